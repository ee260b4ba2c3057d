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

#include <cstdint>
#include <string>
#include <vector>

#include "qcomb/comb.hpp"
#include "qcomb/quantifiers.hpp"
#include "qcomb/rng.hpp"

namespace qcomb {

// What the coordinate ascent maximizes. The lambda-max proxy drives the
// sweeps by the largest Choi eigenvalue of the resulting process and reports
// the achieved total information of the winner.
enum class Objective {
  kTotalInfo,
  kMarkovInfo,
  kNonMarkovianity,
  kLambdaMaxProxy,
};

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

struct OptimizerConfig {
  int restarts = 16;
  int max_sweeps = 200;
  int inner_iters = 50;
  double rel_tol = 1e-7;
  std::uint64_t seed = 0;
  Objective objective = Objective::kTotalInfo;
  // Intermediate times kept open (the resolution m); empty closes every slot.
  std::vector<int> target_resolution;
  // Optimize through a sequence of increasingly coarse masks instead of
  // jumping straight to the target resolution.
  bool staged_schedule = false;
  // Concurrent restarts; the merge is deterministic regardless.
  int threads = 1;
};

struct OptimResult {
  explicit OptimResult(ControlComb comb) : best_comb(std::move(comb)) {}

  // Value of the configured quantifier on link(t, best_comb); every reported
  // number is re-evaluated through that forward path.
  double best_value = 0.0;
  ControlComb best_comb;
  // Per-sweep surrogate values of the winning restart; nondecreasing.
  std::vector<double> trace;
  bool converged = false;
  int best_restart = -1;
};

// Lower-bound estimate of the monotone quantifier at resolution
// cfg.target_resolution by coordinate ascent over the comb's 2(n+1) channels,
// restarted from deterministic baselines (trivial comb, X/Z pulse comb on
// qubit slots) plus seeded random unitary combs. extra_starts are additional
// warm starts; their channels are used with the mask set by the config.
OptimResult estimate_monotone(const ProcessTensor& t,
                              const OptimizerConfig& cfg,
                              const std::vector<ControlComb>& extra_starts = {});

// One coordinate-ascent subproblem: improve the channel at `slot_channel_index`
// (flat index, see ControlComb::channel) with all others fixed, by projected
// gradient ascent on its Choi; never returns a channel that decreases the
// surrogate. For the lambda-max proxy the loop alternates top-eigenvector
// extraction with ascent on the resulting linear functional.
Channel see_saw_inner(const ProcessTensor& t, const ControlComb& comb,
                      int slot_channel_index, const OptimizerConfig& cfg);

// Euclidean gradient of the surrogate objective with respect to the Choi of
// one comb channel, holding the rest fixed (up to multiples of the identity,
// which the feasibility projection removes). Diagnostic surface for the
// inner solver.
Matrix channel_gradient(const ProcessTensor& t, const ControlComb& comb,
                        int slot_channel_index, Objective objective);

// Estimates of all three monotones at one resolution, with the subadditivity
// gap between them. Lower-bound estimates cannot assert the subadditivity
// bound directly; a positive gap beyond tolerance flags an optimizer
// shortfall on the Markovian or non-Markovian side, not a violation.
struct SubadditivityReport {
  double i_bar_found = 0.0;
  double m_bar_found = 0.0;
  double n_bar_found = 0.0;
  double gap = 0.0;  // i_bar_found - (m_bar_found + n_bar_found)
  bool optimizer_shortfall = false;  // gap > 1e-6
  // worst |I - (M + N)| over the transformed processes of the three winning
  // combs; the per-comb identity is exact.
  double worst_identity_defect = 0.0;
};

SubadditivityReport subadditivity_check(const ProcessTensor& t,
                                        const OptimizerConfig& cfg);

struct CptpProjection {
  Channel channel;
  double defect = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nearest (Frobenius) CPTP Choi to a Hermitian matrix, via Dykstra-corrected
// alternating projections between the PSD cone and the trace-preservation
// affine set.
CptpProjection cptp_project(const MultiLegMatrix& m, int in_dim);

// Per-slot composition: the comb acting like z_outer followed by z_inner on
// the transformed process. link(t, warm_start_compose(a, b)) equals
// link(link(t, a), b).
ControlComb warm_start_compose(const ControlComb& z_outer,
                               const ControlComb& z_inner);

// Open-loop pulse comb: unitary pre-channels from `pattern` (one of I, X, Y,
// Z per slot), trivial post-channels, every slot closed.
ControlComb dd_sequence(int n_slots, const std::string& pattern);

//=============================================================================
// Comb builders and feasible-point transfer
//=============================================================================

std::vector<int> mask_for_resolution(int n_slots, const std::vector<int>& kept);

// Haar-random unitary pre-channels, trivial posts.
ControlComb random_unitary_comb(const SlotStructure& slots,
                                const std::vector<int>& mask, Rng& rng);

// Generic random CPTP pre- and post-channels.
ControlComb random_cptp_comb(const SlotStructure& slots,
                             const std::vector<int>& mask, Rng& rng);

// Per-time channel tensor of two combs on the same slot count and mask;
// the warm start matching compose_parallel.
ControlComb tensor_combs(const ControlComb& a, const ControlComb& b);

// Comb for compose_sequential(t, s) from combs for the parts; the new slot
// stays open, handled by `first`'s final post and `second`'s initial pre.
ControlComb concat_combs(const ControlComb& first, const ControlComb& second);

// Effective comb on the other factor when a joint comb acts on
// compose_parallel(a, b) and one factor is a fully uncorrelated process:
// contracts that factor's single-leg marginals into the joint channels.
// link(compose_parallel(t, u), joint) == link(t, absorb) when u is free.
ControlComb absorb_parallel_free(const ControlComb& joint,
                                 const ProcessTensor& free_part,
                                 bool free_is_second);

}  // namespace qcomb
