// Copyright 2026 The qcomb developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "qcomb/linalg.hpp"

namespace qcomb {

// Tolerance for state/channel/comb feasibility checks (PSD defect, trace
// defect, trace preservation, causality).
inline constexpr double kFeasTol = 1e-9;

//=============================================================================
// Slot structure
//=============================================================================

// The leg layout of a multitime process on times t_i, t_1, ..., t_n, t_f.
//
// Times are indexed 0 (= t_i) through n+1 (= t_f). The process receives an
// input on leg out(k) at each time k in [0, n] and emits an output on leg
// in(k) at each time k in [1, n+1]; the pair (in(k), out(k)) at an
// intermediate time is one open slot. The canonical flat-matrix leg order is
// latest-time first:
//
//   in(n+1), out(n), in(n), ..., out(1), in(1), out(0)
class SlotStructure {
 public:
  SlotStructure() = default;

  // out_dims[k] = dim of out(k) for k in [0, n];
  // in_dims[k-1] = dim of in(k) for k in [1, n+1]. Both have size n+1.
  SlotStructure(std::vector<int> out_dims, std::vector<int> in_dims);

  // All legs of dimension `dim`.
  static SlotStructure uniform(int n_slots, int dim);

  int n_slots() const { return static_cast<int>(out_dims_.size()) - 1; }
  int out_dim(int k) const;  // k in [0, n]
  int in_dim(int k) const;   // k in [1, n+1]

  std::string out_label(int k) const;  // "out_i" for k = 0, else "out_<k>"
  std::string in_label(int k) const;   // "in_f" for k = n+1, else "in_<k>"

  std::vector<LegSpec> legs() const;            // canonical order
  std::vector<std::string> leg_order() const;   // canonical label order
  int dim() const;

  bool operator==(const SlotStructure& other) const;

 private:
  std::vector<int> out_dims_;
  std::vector<int> in_dims_;
};

//=============================================================================
// Process tensors and channels
//=============================================================================

// Unit-trace positive Choi state of a multitime process, satisfying the comb
// causality trace conditions. Construction checks structure and trace; the
// full positivity/causality diagnostic lives in validate().
class ProcessTensor {
 public:
  ProcessTensor(MultiLegMatrix choi, SlotStructure slots);

  const MultiLegMatrix& choi() const { return choi_; }
  const SlotStructure& slots() const { return slots_; }
  int n_slots() const { return slots_.n_slots(); }

 private:
  MultiLegMatrix choi_;
  SlotStructure slots_;
};

// CPTP map stored as a unit-trace Choi matrix on legs ("out", "in"), with
// "out" most significant. Trace preservation in this convention reads
// tr_out(choi) = 1_in / in_dim.
class Channel {
 public:
  // Validates PSD, unit trace, and trace preservation to kFeasTol.
  Channel(Matrix choi, int out_dim, int in_dim);

  static Channel identity(int dim);
  static Channel from_unitary(const Matrix& u);
  static Channel from_kraus(const std::vector<Matrix>& kraus, int out_dim,
                            int in_dim);
  // Kills off-diagonal entries in the computational basis.
  static Channel completely_dephasing(int dim);
  // Constant output 1/out_dim; Choi is 1/(in_dim*out_dim).
  static Channel maximally_mixing(int out_dim, int in_dim);
  // Traces out the trailing factor of dimension `discard_dim`.
  static Channel discard_trailing(int keep_dim, int discard_dim);
  // Appends a maximally mixed trailing factor of dimension `append_dim`.
  static Channel append_mixed_trailing(int keep_dim, int append_dim);

  const MultiLegMatrix& choi() const { return choi_; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

  // Action on a density matrix (any trace).
  Matrix apply(const Matrix& rho) const;

 private:
  MultiLegMatrix choi_;
  int out_dim_ = 0;
  int in_dim_ = 0;
};

// second after first (composition second . first).
Channel compose(const Channel& second, const Channel& first);
// Parallel tensor; the first argument acts on the most significant factor.
Channel tensor(const Channel& a, const Channel& b);

//=============================================================================
// Control combs
//=============================================================================

// An IQI superprocess: independent pre-channel V at each of t_i, t_1..t_n and
// post-channel W at each of t_1..t_n, t_f, plus a set of intermediate times
// closed by identity links (the coarse-graining mask). The product Choi
// W_f (x) V_n (x) W_n (x) ... (x) V_i is implicit in the list representation;
// materialize() builds it on demand.
class ControlComb {
 public:
  ControlComb(std::vector<Channel> pre, std::vector<Channel> post,
              std::vector<int> coarse_mask);

  // Identity channels matching `slots`, with the given mask.
  static ControlComb trivial(const SlotStructure& slots,
                             std::vector<int> coarse_mask = {});

  int n_slots() const { return static_cast<int>(pre_.size()) - 1; }
  const Channel& pre(int k) const;   // V at time k, k in [0, n]
  const Channel& post(int k) const;  // W at time k, k in [1, n+1]

  // Channels enumerated along the time axis: 2k is the pre at time k,
  // 2k+1 the post at time k+1 (so 0 = V_i, 1 = W_1, 2 = V_1, ..., last = W_f).
  int n_channels() const { return 2 * static_cast<int>(pre_.size()); }
  const Channel& channel(int flat_index) const;
  void set_channel(int flat_index, Channel ch);

  const std::vector<int>& coarse_mask() const { return coarse_mask_; }
  bool is_masked(int time) const;
  void set_coarse_mask(std::vector<int> mask);

  // Throws unless every channel dimension chains with `slots` and masked
  // times admit the identity link.
  void check_chaining(const SlotStructure& slots) const;

  // Slot structure of the transformed process.
  SlotStructure output_slots(const SlotStructure& slots) const;

  // Full comb Choi on the 4(n+1) legs, labelled by the process labels of
  // `slots` and their primed counterparts. Test and serialization use.
  MultiLegMatrix materialize(const SlotStructure& slots) const;

 private:
  std::vector<Channel> pre_;
  std::vector<Channel> post_;
  std::vector<int> coarse_mask_;
};

// Primed label of an outer comb leg.
std::string primed(const std::string& label);

//=============================================================================
// Operations
//=============================================================================

// Contract a process with a control comb: channels are linked onto the
// matching process legs and every masked slot is closed with a maximally
// entangled (identity-channel) insertion. Returns the transformed process on
// the surviving, renumbered slots.
ProcessTensor link(const ProcessTensor& t, const ControlComb& z);

// Identity-link closure of the given intermediate times.
ProcessTensor coarse_grain(const ProcessTensor& t, const std::vector<int>& drop);

// Tensor product of the n+1 step-channel marginals on the leg pairs
// (out(k), in(k+1)). The nearest Markovian process in relative entropy.
ProcessTensor markov_marginal(const ProcessTensor& t);

// Tensor product of all 2(n+1) single-leg marginals. The nearest fully
// uncorrelated process in relative entropy.
ProcessTensor full_marginal(const ProcessTensor& t);

struct ValidationReport {
  double psd_defect = 0.0;        // max(0, -lambda_min)
  double trace_defect = 0.0;      // |tr - 1|
  double causality_defect = 0.0;  // worst per-level max-abs defect
  bool pass = false;
};

// Diagnostic check of the ProcessTensor invariants at kFeasTol.
ValidationReport validate(const ProcessTensor& t);

// t first in time, then s; the gap becomes a new open slot. The composite
// Choi is exactly the tensor product of the inputs' Chois.
ProcessTensor compose_sequential(const ProcessTensor& t, const ProcessTensor& s);

// Same slot count required; per-time legs are fused into composite legs of
// product dimension, with t's factor most significant in each fused leg.
ProcessTensor compose_parallel(const ProcessTensor& t, const ProcessTensor& s);

// Choi state of the process generated by an initial environment state and a
// list of system-environment dynamics (one CPTP map per interval, each on
// H_sys (x) H_env with the system factor most significant): half of a
// maximally entangled pair is fed in at each time, propagated through the
// dynamics, and the environment is traced out at the end.
ProcessTensor build_process(const MultiLegMatrix& env_state,
                            const std::vector<Channel>& dynamics, int sys_dim);

//=============================================================================
// Single-channel subproblem support
//=============================================================================

// Partial contraction of link(t, z) with one comb channel left out. The hole
// channel's Choi enters the remaining contraction relabelled to
// (hole_out_label, hole_in_label); finish_link completes the contraction and
// canonicalizes the result. Used by coordinate-ascent solvers, for which the
// transformed process is linear in the missing channel.
struct LinkHole {
  MultiLegMatrix env;
  std::string hole_out_label;
  std::string hole_in_label;
  SlotStructure out_slots;
  // Working-frame label -> canonical output label.
  std::vector<std::pair<std::string, std::string>> canonical_renames;
};

LinkHole link_all_but(const ProcessTensor& t, const ControlComb& z,
                      int skip_flat_index);

ProcessTensor finish_link(const LinkHole& hole, const Channel& x);

}  // namespace qcomb
