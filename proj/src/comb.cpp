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

#include "qcomb/comb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qcomb {

namespace {

std::vector<std::string> all_labels_except(
    const MultiLegMatrix& m, const std::vector<std::string>& keep) {
  std::vector<std::string> out;
  for (const auto& leg : m.legs()) {
    if (std::find(keep.begin(), keep.end(), leg.label) == keep.end()) {
      out.push_back(leg.label);
    }
  }
  return out;
}

}  // namespace

//=============================================================================
// SlotStructure
//=============================================================================

SlotStructure::SlotStructure(std::vector<int> out_dims, std::vector<int> in_dims)
    : out_dims_(std::move(out_dims)), in_dims_(std::move(in_dims)) {
  if (out_dims_.empty() || out_dims_.size() != in_dims_.size()) {
    throw std::invalid_argument(
        "SlotStructure: need n+1 out dims and n+1 in dims");
  }
  for (int d : out_dims_) {
    if (d < 1) throw std::invalid_argument("SlotStructure: dims must be >= 1");
  }
  for (int d : in_dims_) {
    if (d < 1) throw std::invalid_argument("SlotStructure: dims must be >= 1");
  }
}

SlotStructure SlotStructure::uniform(int n_slots, int dim) {
  if (n_slots < 0) throw std::invalid_argument("n_slots must be >= 0");
  return SlotStructure(std::vector<int>(n_slots + 1, dim),
                       std::vector<int>(n_slots + 1, dim));
}

int SlotStructure::out_dim(int k) const {
  if (k < 0 || k > n_slots()) throw std::invalid_argument("out_dim: bad time");
  return out_dims_[k];
}

int SlotStructure::in_dim(int k) const {
  if (k < 1 || k > n_slots() + 1) {
    throw std::invalid_argument("in_dim: bad time");
  }
  return in_dims_[k - 1];
}

std::string SlotStructure::out_label(int k) const {
  if (k < 0 || k > n_slots()) throw std::invalid_argument("out_label: bad time");
  return k == 0 ? "out_i" : "out_" + std::to_string(k);
}

std::string SlotStructure::in_label(int k) const {
  if (k < 1 || k > n_slots() + 1) {
    throw std::invalid_argument("in_label: bad time");
  }
  return k == n_slots() + 1 ? "in_f" : "in_" + std::to_string(k);
}

std::vector<LegSpec> SlotStructure::legs() const {
  const int n = n_slots();
  std::vector<LegSpec> out;
  out.push_back({in_label(n + 1), in_dim(n + 1)});
  for (int k = n; k >= 1; --k) {
    out.push_back({out_label(k), out_dim(k)});
    out.push_back({in_label(k), in_dim(k)});
  }
  out.push_back({out_label(0), out_dim(0)});
  return out;
}

std::vector<std::string> SlotStructure::leg_order() const {
  std::vector<std::string> order;
  for (const auto& leg : legs()) order.push_back(leg.label);
  return order;
}

int SlotStructure::dim() const {
  int d = 1;
  for (const auto& leg : legs()) d *= leg.dim;
  return d;
}

bool SlotStructure::operator==(const SlotStructure& other) const {
  return out_dims_ == other.out_dims_ && in_dims_ == other.in_dims_;
}

//=============================================================================
// ProcessTensor
//=============================================================================

ProcessTensor::ProcessTensor(MultiLegMatrix choi, SlotStructure slots)
    : choi_(std::move(choi)), slots_(std::move(slots)) {
  const auto expected = slots_.legs();
  if (choi_.legs() != expected) {
    throw std::invalid_argument(
        "ProcessTensor: Choi legs do not match the slot structure");
  }
  const Complex tr = choi_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-8) {
    throw std::invalid_argument("ProcessTensor: trace must be 1");
  }
}

//=============================================================================
// Channel
//=============================================================================

Channel::Channel(Matrix choi, int out_dim, int in_dim)
    : choi_(MultiLegMatrix(std::move(choi),
                           {{"out", out_dim}, {"in", in_dim}})),
      out_dim_(out_dim), in_dim_(in_dim) {
  if (std::abs(choi_.trace() - Complex(1.0, 0.0)) > kFeasTol) {
    throw std::invalid_argument("Channel: Choi trace must be 1");
  }
  if (min_eigenvalue(choi_) < -kFeasTol) {
    throw std::invalid_argument("Channel: Choi is not positive semidefinite");
  }
  const MultiLegMatrix reduced = partial_trace(choi_, {"out"});
  const Matrix expected =
      Matrix::Identity(in_dim_, in_dim_) / static_cast<double>(in_dim_);
  if ((reduced.entries() - expected).cwiseAbs().maxCoeff() > kFeasTol) {
    throw std::invalid_argument("Channel: map is not trace preserving");
  }
}

Channel Channel::identity(int dim) {
  return Channel(max_entangled(dim, "out", "in").entries(), dim, dim);
}

Channel Channel::from_unitary(const Matrix& u) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d) throw std::invalid_argument("from_unitary: square only");
  if ((u * u.adjoint() - Matrix::Identity(d, d)).norm() > 1e-9) {
    throw std::invalid_argument("from_unitary: matrix is not unitary");
  }
  return from_kraus({u}, d, d);
}

Channel Channel::from_kraus(const std::vector<Matrix>& kraus, int out_dim,
                            int in_dim) {
  Matrix choi = Matrix::Zero(out_dim * in_dim, out_dim * in_dim);
  for (const auto& k : kraus) {
    if (k.rows() != out_dim || k.cols() != in_dim) {
      throw std::invalid_argument("from_kraus: operator shape mismatch");
    }
    for (int a = 0; a < out_dim; ++a) {
      for (int i = 0; i < in_dim; ++i) {
        for (int b = 0; b < out_dim; ++b) {
          for (int j = 0; j < in_dim; ++j) {
            choi(a * in_dim + i, b * in_dim + j) +=
                k(a, i) * std::conj(k(b, j)) / static_cast<double>(in_dim);
          }
        }
      }
    }
  }
  return Channel(std::move(choi), out_dim, in_dim);
}

Channel Channel::completely_dephasing(int dim) {
  std::vector<Matrix> kraus;
  for (int k = 0; k < dim; ++k) {
    Matrix p = Matrix::Zero(dim, dim);
    p(k, k) = 1.0;
    kraus.push_back(std::move(p));
  }
  return from_kraus(kraus, dim, dim);
}

Channel Channel::maximally_mixing(int out_dim, int in_dim) {
  const int d = out_dim * in_dim;
  return Channel(Matrix::Identity(d, d) / static_cast<double>(d), out_dim,
                 in_dim);
}

Channel Channel::discard_trailing(int keep_dim, int discard_dim) {
  std::vector<Matrix> kraus;
  for (int e = 0; e < discard_dim; ++e) {
    Matrix k = Matrix::Zero(keep_dim, keep_dim * discard_dim);
    for (int i = 0; i < keep_dim; ++i) k(i, i * discard_dim + e) = 1.0;
    kraus.push_back(std::move(k));
  }
  return from_kraus(kraus, keep_dim, keep_dim * discard_dim);
}

Channel Channel::append_mixed_trailing(int keep_dim, int append_dim) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(append_dim));
  std::vector<Matrix> kraus;
  for (int e = 0; e < append_dim; ++e) {
    Matrix k = Matrix::Zero(keep_dim * append_dim, keep_dim);
    for (int i = 0; i < keep_dim; ++i) k(i * append_dim + e, i) = scale;
    kraus.push_back(std::move(k));
  }
  return from_kraus(kraus, keep_dim * append_dim, keep_dim);
}

Matrix Channel::apply(const Matrix& rho) const {
  if (rho.rows() != in_dim_ || rho.cols() != in_dim_) {
    throw std::invalid_argument("Channel::apply: input dimension mismatch");
  }
  Matrix out = Matrix::Zero(out_dim_, out_dim_);
  const Matrix& c = choi_.entries();
  for (int a = 0; a < out_dim_; ++a) {
    for (int b = 0; b < out_dim_; ++b) {
      Complex sum = 0;
      for (int i = 0; i < in_dim_; ++i) {
        for (int j = 0; j < in_dim_; ++j) {
          sum += c(a * in_dim_ + i, b * in_dim_ + j) * rho(i, j);
        }
      }
      out(a, b) = static_cast<double>(in_dim_) * sum;
    }
  }
  return out;
}

Channel compose(const Channel& second, const Channel& first) {
  if (first.out_dim() != second.in_dim()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  const MultiLegMatrix a =
      relabel(first.choi(), {{"out", "mid"}, {"in", "in"}});
  const MultiLegMatrix b =
      relabel(second.choi(), {{"out", "out"}, {"in", "mid"}});
  MultiLegMatrix linked = link_product(a, b);   // legs: in, out
  linked = permute_legs(linked, {"out", "in"});
  return Channel(linked.entries(), second.out_dim(), first.in_dim());
}

Channel tensor(const Channel& a, const Channel& b) {
  const MultiLegMatrix am =
      relabel(a.choi(), {{"out", "out_a"}, {"in", "in_a"}});
  const MultiLegMatrix bm =
      relabel(b.choi(), {{"out", "out_b"}, {"in", "in_b"}});
  MultiLegMatrix prod = tensor_product(am, bm);
  prod = permute_legs(prod, {"out_a", "out_b", "in_a", "in_b"});
  return Channel(prod.entries(), a.out_dim() * b.out_dim(),
                 a.in_dim() * b.in_dim());
}

//=============================================================================
// ControlComb
//=============================================================================

ControlComb::ControlComb(std::vector<Channel> pre, std::vector<Channel> post,
                         std::vector<int> coarse_mask)
    : pre_(std::move(pre)), post_(std::move(post)) {
  if (pre_.empty() || pre_.size() != post_.size()) {
    throw std::invalid_argument(
        "ControlComb: need n+1 pre and n+1 post channels");
  }
  set_coarse_mask(std::move(coarse_mask));
}

ControlComb ControlComb::trivial(const SlotStructure& slots,
                                 std::vector<int> coarse_mask) {
  std::vector<Channel> pre, post;
  const int n = slots.n_slots();
  for (int k = 0; k <= n; ++k) pre.push_back(Channel::identity(slots.out_dim(k)));
  for (int k = 1; k <= n + 1; ++k) {
    post.push_back(Channel::identity(slots.in_dim(k)));
  }
  return ControlComb(std::move(pre), std::move(post), std::move(coarse_mask));
}

const Channel& ControlComb::pre(int k) const {
  if (k < 0 || k > n_slots()) throw std::invalid_argument("pre: bad time");
  return pre_[k];
}

const Channel& ControlComb::post(int k) const {
  if (k < 1 || k > n_slots() + 1) throw std::invalid_argument("post: bad time");
  return post_[k - 1];
}

const Channel& ControlComb::channel(int flat_index) const {
  if (flat_index < 0 || flat_index >= n_channels()) {
    throw std::invalid_argument("channel: bad index");
  }
  return flat_index % 2 == 0 ? pre_[flat_index / 2] : post_[flat_index / 2];
}

void ControlComb::set_channel(int flat_index, Channel ch) {
  if (flat_index < 0 || flat_index >= n_channels()) {
    throw std::invalid_argument("set_channel: bad index");
  }
  if (flat_index % 2 == 0) {
    pre_[flat_index / 2] = std::move(ch);
  } else {
    post_[flat_index / 2] = std::move(ch);
  }
}

bool ControlComb::is_masked(int time) const {
  return std::find(coarse_mask_.begin(), coarse_mask_.end(), time) !=
         coarse_mask_.end();
}

void ControlComb::set_coarse_mask(std::vector<int> mask) {
  std::sort(mask.begin(), mask.end());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] < 1 || mask[i] > n_slots() ||
        (i > 0 && mask[i] == mask[i - 1])) {
      throw std::invalid_argument("coarse mask must be a set of slot times");
    }
  }
  coarse_mask_ = std::move(mask);
}

void ControlComb::check_chaining(const SlotStructure& slots) const {
  if (slots.n_slots() != n_slots()) {
    throw std::invalid_argument("comb and process slot counts differ");
  }
  const int n = n_slots();
  for (int k = 0; k <= n; ++k) {
    if (pre(k).out_dim() != slots.out_dim(k)) {
      throw std::invalid_argument("pre-channel output dim mismatch at time " +
                                  std::to_string(k));
    }
  }
  for (int k = 1; k <= n + 1; ++k) {
    if (post(k).in_dim() != slots.in_dim(k)) {
      throw std::invalid_argument("post-channel input dim mismatch at time " +
                                  std::to_string(k));
    }
  }
  for (int k : coarse_mask_) {
    if (post(k).out_dim() != pre(k).in_dim()) {
      throw std::invalid_argument(
          "identity link does not fit the masked slot at time " +
          std::to_string(k));
    }
  }
}

SlotStructure ControlComb::output_slots(const SlotStructure& slots) const {
  check_chaining(slots);
  const int n = n_slots();
  std::vector<int> out_dims{pre(0).in_dim()};
  std::vector<int> in_dims;
  for (int k = 1; k <= n; ++k) {
    if (is_masked(k)) continue;
    in_dims.push_back(post(k).out_dim());
    out_dims.push_back(pre(k).in_dim());
  }
  in_dims.push_back(post(n + 1).out_dim());
  return SlotStructure(std::move(out_dims), std::move(in_dims));
}

std::string primed(const std::string& label) { return label + "'"; }

MultiLegMatrix ControlComb::materialize(const SlotStructure& slots) const {
  check_chaining(slots);
  const int n = n_slots();
  MultiLegMatrix out = relabel(
      post(n + 1).choi(), {{"out", primed(slots.in_label(n + 1))},
                           {"in", slots.in_label(n + 1)}});
  for (int k = n; k >= 1; --k) {
    out = tensor_product(
        out, relabel(pre(k).choi(), {{"out", slots.out_label(k)},
                                     {"in", primed(slots.out_label(k))}}));
    out = tensor_product(
        out, relabel(post(k).choi(), {{"out", primed(slots.in_label(k))},
                                      {"in", slots.in_label(k)}}));
  }
  out = tensor_product(
      out, relabel(pre(0).choi(), {{"out", slots.out_label(0)},
                                   {"in", primed(slots.out_label(0))}}));
  return out;
}

//=============================================================================
// Link
//=============================================================================

LinkHole link_all_but(const ProcessTensor& t, const ControlComb& z,
                      int skip_flat_index) {
  z.check_chaining(t.slots());
  const SlotStructure& sl = t.slots();
  const int n = sl.n_slots();
  const auto skipped = [&](int flat) { return flat == skip_flat_index; };

  LinkHole hole;
  MultiLegMatrix work = t.choi();

  // Closed slots first: each contraction removes two legs. The identity link
  // is an explicit maximally entangled insertion between the primed legs.
  for (int k : z.coarse_mask()) {
    const int pre_idx = 2 * k;
    const int post_idx = 2 * k - 1;
    const std::string in_p = primed(sl.in_label(k));
    const std::string out_p = primed(sl.out_label(k));
    const MultiLegMatrix closure =
        max_entangled(z.pre(k).in_dim(), out_p, in_p);
    if (!skipped(post_idx)) {
      work = link_product(work, relabel(z.post(k).choi(),
                                        {{"out", in_p}, {"in", sl.in_label(k)}}));
    }
    if (skipped(pre_idx)) {
      work = link_product(work, closure);
      hole.hole_out_label = sl.out_label(k);
      hole.hole_in_label = out_p;
    } else {
      const MultiLegMatrix closed_pre = link_product(
          relabel(z.pre(k).choi(), {{"out", sl.out_label(k)}, {"in", out_p}}),
          closure);
      work = link_product(work, closed_pre);
      if (skipped(post_idx)) {
        hole.hole_out_label = in_p;
        hole.hole_in_label = sl.in_label(k);
      }
    }
  }

  // Open slots: post then pre, with primed outer legs.
  for (int k = 1; k <= n; ++k) {
    if (z.is_masked(k)) continue;
    if (!skipped(2 * k - 1)) {
      work = link_product(
          work, relabel(z.post(k).choi(), {{"out", primed(sl.in_label(k))},
                                           {"in", sl.in_label(k)}}));
    } else {
      hole.hole_out_label = primed(sl.in_label(k));
      hole.hole_in_label = sl.in_label(k);
    }
    if (!skipped(2 * k)) {
      work = link_product(
          work, relabel(z.pre(k).choi(), {{"out", sl.out_label(k)},
                                          {"in", primed(sl.out_label(k))}}));
    } else {
      hole.hole_out_label = sl.out_label(k);
      hole.hole_in_label = primed(sl.out_label(k));
    }
  }

  if (!skipped(0)) {
    work = link_product(
        work, relabel(z.pre(0).choi(), {{"out", sl.out_label(0)},
                                        {"in", primed(sl.out_label(0))}}));
  } else {
    hole.hole_out_label = sl.out_label(0);
    hole.hole_in_label = primed(sl.out_label(0));
  }
  if (!skipped(2 * n + 1)) {
    work = link_product(
        work, relabel(z.post(n + 1).choi(), {{"out", primed(sl.in_label(n + 1))},
                                             {"in", sl.in_label(n + 1)}}));
  } else {
    hole.hole_out_label = primed(sl.in_label(n + 1));
    hole.hole_in_label = sl.in_label(n + 1);
  }

  // Working-frame -> canonical renames for the surviving, renumbered slots.
  SlotStructure out_slots = z.output_slots(sl);
  std::vector<std::pair<std::string, std::string>> renames;
  renames.push_back({primed(sl.out_label(0)), out_slots.out_label(0)});
  renames.push_back({primed(sl.in_label(n + 1)),
                     out_slots.in_label(out_slots.n_slots() + 1)});
  int j = 1;
  for (int k = 1; k <= n; ++k) {
    if (z.is_masked(k)) continue;
    renames.push_back({primed(sl.in_label(k)), out_slots.in_label(j)});
    renames.push_back({primed(sl.out_label(k)), out_slots.out_label(j)});
    ++j;
  }
  hole.env = std::move(work);
  hole.out_slots = std::move(out_slots);
  hole.canonical_renames = std::move(renames);
  return hole;
}

ProcessTensor finish_link(const LinkHole& hole, const Channel& x) {
  const MultiLegMatrix xc = relabel(
      x.choi(), {{"out", hole.hole_out_label}, {"in", hole.hole_in_label}});
  MultiLegMatrix full = link_product(hole.env, xc);
  std::vector<std::pair<std::string, std::string>> renames;
  for (const auto& r : hole.canonical_renames) {
    if (full.has_leg(r.first)) renames.push_back(r);
  }
  full = relabel(full, renames);
  full = permute_legs(full, hole.out_slots.leg_order());
  return ProcessTensor(std::move(full), hole.out_slots);
}

ProcessTensor link(const ProcessTensor& t, const ControlComb& z) {
  LinkHole hole = link_all_but(t, z, -1);
  MultiLegMatrix full = std::move(hole.env);
  full = relabel(full, hole.canonical_renames);
  full = permute_legs(full, hole.out_slots.leg_order());
  return ProcessTensor(std::move(full), hole.out_slots);
}

ProcessTensor coarse_grain(const ProcessTensor& t,
                           const std::vector<int>& drop) {
  return link(t, ControlComb::trivial(t.slots(), drop));
}

//=============================================================================
// Marginals
//=============================================================================

ProcessTensor markov_marginal(const ProcessTensor& t) {
  const SlotStructure& sl = t.slots();
  const int n = sl.n_slots();
  MultiLegMatrix out = MultiLegMatrix::scalar(1.0);
  for (int k = n; k >= 0; --k) {
    const std::vector<std::string> keep{sl.in_label(k + 1), sl.out_label(k)};
    MultiLegMatrix step =
        partial_trace(t.choi(), all_labels_except(t.choi(), keep));
    out = tensor_product(out, step);
  }
  return ProcessTensor(std::move(out), sl);
}

ProcessTensor full_marginal(const ProcessTensor& t) {
  MultiLegMatrix out = MultiLegMatrix::scalar(1.0);
  for (const auto& leg : t.choi().legs()) {
    MultiLegMatrix single =
        partial_trace(t.choi(), all_labels_except(t.choi(), {leg.label}));
    out = tensor_product(out, single);
  }
  return ProcessTensor(std::move(out), t.slots());
}

//=============================================================================
// Validation
//=============================================================================

ValidationReport validate(const ProcessTensor& t) {
  ValidationReport report;
  report.psd_defect = std::max(0.0, -min_eigenvalue(t.choi()));
  report.trace_defect = std::abs(t.choi().trace() - Complex(1.0, 0.0));

  const SlotStructure& sl = t.slots();
  MultiLegMatrix m = t.choi();
  for (int k = sl.n_slots() + 1; k >= 1; --k) {
    MultiLegMatrix traced = partial_trace(m, {sl.in_label(k)});
    MultiLegMatrix rest = partial_trace(traced, {sl.out_label(k - 1)});
    // Normalize so the factor check is meaningful even when upstream levels
    // already drifted.
    const int d = sl.out_dim(k - 1);
    MultiLegMatrix mixed(
        Matrix::Identity(d, d) / static_cast<double>(d),
        {{sl.out_label(k - 1), d}});
    const MultiLegMatrix expected = tensor_product(mixed, rest);
    report.causality_defect =
        std::max(report.causality_defect, max_abs_diff(traced, expected));
    m = std::move(rest);
  }
  report.pass = report.psd_defect <= kFeasTol &&
                report.trace_defect <= kFeasTol &&
                report.causality_defect <= kFeasTol;
  return report;
}

//=============================================================================
// Composition
//=============================================================================

ProcessTensor compose_sequential(const ProcessTensor& t,
                                 const ProcessTensor& s) {
  const SlotStructure& a = t.slots();
  const SlotStructure& b = s.slots();
  const int na = a.n_slots();
  const int nb = b.n_slots();

  std::vector<int> out_dims, in_dims;
  for (int k = 0; k <= na; ++k) out_dims.push_back(a.out_dim(k));
  for (int k = 0; k <= nb; ++k) out_dims.push_back(b.out_dim(k));
  for (int k = 1; k <= na + 1; ++k) in_dims.push_back(a.in_dim(k));
  for (int k = 1; k <= nb + 1; ++k) in_dims.push_back(b.in_dim(k));
  SlotStructure slots(std::move(out_dims), std::move(in_dims));

  std::vector<std::pair<std::string, std::string>> ren_t, ren_s;
  for (int k = 0; k <= na; ++k) {
    ren_t.push_back({a.out_label(k), slots.out_label(k)});
  }
  for (int k = 1; k <= na + 1; ++k) {
    ren_t.push_back({a.in_label(k), slots.in_label(k)});
  }
  for (int k = 0; k <= nb; ++k) {
    ren_s.push_back({b.out_label(k), slots.out_label(na + 1 + k)});
  }
  for (int k = 1; k <= nb + 1; ++k) {
    ren_s.push_back({b.in_label(k), slots.in_label(na + 1 + k)});
  }

  // In the canonical latest-first order every leg of s precedes every leg of
  // t, in the same relative order, so the composite Choi is a plain tensor
  // product.
  MultiLegMatrix choi =
      tensor_product(relabel(s.choi(), ren_s), relabel(t.choi(), ren_t));
  choi = permute_legs(choi, slots.leg_order());
  return ProcessTensor(std::move(choi), std::move(slots));
}

ProcessTensor compose_parallel(const ProcessTensor& t, const ProcessTensor& s) {
  const SlotStructure& a = t.slots();
  const SlotStructure& b = s.slots();
  if (a.n_slots() != b.n_slots()) {
    throw std::invalid_argument("compose_parallel: slot counts differ");
  }
  const int n = a.n_slots();
  std::vector<int> out_dims, in_dims;
  for (int k = 0; k <= n; ++k) out_dims.push_back(a.out_dim(k) * b.out_dim(k));
  for (int k = 1; k <= n + 1; ++k) in_dims.push_back(a.in_dim(k) * b.in_dim(k));
  SlotStructure slots(std::move(out_dims), std::move(in_dims));

  auto tag = [](const std::string& label, const std::string& suffix) {
    return label + suffix;
  };
  std::vector<std::pair<std::string, std::string>> ren_t, ren_s;
  for (const auto& leg : a.legs()) ren_t.push_back({leg.label, tag(leg.label, "#a")});
  for (const auto& leg : b.legs()) ren_s.push_back({leg.label, tag(leg.label, "#b")});

  MultiLegMatrix choi =
      tensor_product(relabel(t.choi(), ren_t), relabel(s.choi(), ren_s));

  // Interleave by time (t factor most significant within each fused leg).
  std::vector<std::string> order;
  for (const auto& leg : a.legs()) {
    order.push_back(tag(leg.label, "#a"));
    order.push_back(tag(leg.label, "#b"));
  }
  choi = permute_legs(choi, order);
  for (const auto& leg : a.legs()) {
    choi = merge_legs(choi, tag(leg.label, "#a"), 2, leg.label);
  }
  return ProcessTensor(std::move(choi), std::move(slots));
}

//=============================================================================
// Eq.-style process construction
//=============================================================================

ProcessTensor build_process(const MultiLegMatrix& env_state,
                            const std::vector<Channel>& dynamics,
                            int sys_dim) {
  if (dynamics.empty()) {
    throw std::invalid_argument("build_process: need at least one interval");
  }
  if (std::abs(env_state.trace() - Complex(1.0, 0.0)) > 1e-8) {
    throw std::invalid_argument("build_process: environment trace must be 1");
  }
  const int env_dim = env_state.dim();
  const int se_dim = sys_dim * env_dim;
  for (const auto& d : dynamics) {
    if (d.in_dim() != se_dim || d.out_dim() != se_dim) {
      throw std::invalid_argument(
          "build_process: dynamics must act on system x environment");
    }
  }
  const int n = static_cast<int>(dynamics.size()) - 1;
  const SlotStructure slots = SlotStructure::uniform(n, sys_dim);

  // Rename environment legs to reserved names.
  std::vector<std::pair<std::string, std::string>> env_ren;
  std::vector<LegSpec> env_legs;
  for (std::size_t i = 0; i < env_state.legs().size(); ++i) {
    const std::string name = "env" + std::to_string(i);
    env_ren.push_back({env_state.legs()[i].label, name});
    env_legs.push_back({name, env_state.legs()[i].dim});
  }

  MultiLegMatrix work = tensor_product(
      max_entangled(sys_dim, "wire", slots.out_label(0)),
      env_state.legs().empty() ? env_state : relabel(env_state, env_ren));

  for (int j = 0; j <= n; ++j) {
    // Apply the interval dynamics to (wire, env...).
    std::vector<std::string> order;
    for (const auto& leg : work.legs()) {
      const bool is_se =
          leg.label == "wire" ||
          std::any_of(env_legs.begin(), env_legs.end(),
                      [&](const LegSpec& e) { return e.label == leg.label; });
      if (!is_se) order.push_back(leg.label);
    }
    order.push_back("wire");
    for (const auto& leg : env_legs) order.push_back(leg.label);
    work = permute_legs(work, order);
    work = merge_legs(work, "wire", 1 + static_cast<int>(env_legs.size()),
                      "se");
    work = link_product(
        work, relabel(dynamics[j].choi(), {{"out", "se+"}, {"in", "se"}}));
    if (env_legs.empty()) {
      work = relabel(work, {{"se+", "wire"}});
    } else {
      work = split_leg(work, "se+", sys_dim, "wire", "envblk");
      for (std::size_t i = 0; i + 1 < env_legs.size(); ++i) {
        work = split_leg(work, "envblk", env_legs[i].dim, env_legs[i].label,
                         "envblk");
      }
      work = relabel(work, {{"envblk", env_legs.back().label}});
    }

    if (j < n) {
      work = relabel(work, {{"wire", slots.in_label(j + 1)}});
      work = tensor_product(
          work, max_entangled(sys_dim, "wire", slots.out_label(j + 1)));
    } else {
      work = relabel(work, {{"wire", slots.in_label(n + 1)}});
      std::vector<std::string> env_names;
      for (const auto& leg : env_legs) env_names.push_back(leg.label);
      if (!env_names.empty()) work = partial_trace(work, env_names);
    }
  }

  work = permute_legs(work, slots.leg_order());
  return ProcessTensor(std::move(work), slots);
}

}  // namespace qcomb
