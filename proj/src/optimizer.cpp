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

#include "qcomb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <utility>

#include "qcomb/random.hpp"
#include "qcomb/scenarios.hpp"

namespace qcomb {

namespace {

double quantifier_value(Objective objective, const ProcessTensor& p) {
  switch (objective) {
    case Objective::kTotalInfo:
    case Objective::kLambdaMaxProxy:
      return total_info(p);
    case Objective::kMarkovInfo:
      return markov_info(p);
    case Objective::kNonMarkovianity:
      return non_markovianity(p);
  }
  throw std::invalid_argument("unknown objective");
}

double surrogate_value(Objective objective, const ProcessTensor& p) {
  if (objective == Objective::kLambdaMaxProxy) {
    return herm_eig(p.choi()).values[0];
  }
  return quantifier_value(objective, p);
}

// log2 of a PSD matrix with eigenvalues clamped at the support cutoff, so
// gradients stay bounded near rank-deficient points.
MultiLegMatrix clamped_log2(const MultiLegMatrix& m) {
  const EigResult eig = herm_eig(m);
  const int d = m.dim();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double lambda = std::max(eig.values[i], kEigCutoff);
    out += std::log2(lambda) * eig.vectors.col(i) *
           eig.vectors.col(i).adjoint();
  }
  return MultiLegMatrix(std::move(out), m.legs());
}

// Embed an operator on a subset of legs into the full space, identity
// elsewhere, in the leg order of `frame`.
MultiLegMatrix embed(const MultiLegMatrix& op, const MultiLegMatrix& frame) {
  std::vector<LegSpec> rest;
  for (const auto& leg : frame.legs()) {
    if (!op.has_leg(leg.label)) rest.push_back(leg);
  }
  MultiLegMatrix full =
      rest.empty() ? op : tensor_product(op, MultiLegMatrix::identity(rest));
  std::vector<std::string> order;
  for (const auto& leg : frame.legs()) order.push_back(leg.label);
  return permute_legs(full, order);
}

MultiLegMatrix marginal_log(const ProcessTensor& p,
                            const std::vector<std::string>& keep) {
  std::vector<std::string> over;
  for (const auto& leg : p.choi().legs()) {
    if (std::find(keep.begin(), keep.end(), leg.label) == keep.end()) {
      over.push_back(leg.label);
    }
  }
  return clamped_log2(partial_trace(p.choi(), over));
}

// Euclidean gradient of the surrogate with respect to the process Choi,
// up to multiples of the identity (which the feasibility projection removes).
MultiLegMatrix surrogate_gradient(Objective objective, const ProcessTensor& p) {
  const SlotStructure& sl = p.slots();
  const int n = sl.n_slots();
  const int d = p.choi().dim();

  if (objective == Objective::kLambdaMaxProxy) {
    // Ties broken by the deterministic sorted eigendecomposition.
    const EigResult eig = herm_eig(p.choi());
    const Matrix top = eig.vectors.col(0) * eig.vectors.col(0).adjoint();
    return MultiLegMatrix(top, p.choi().legs());
  }

  Matrix grad = Matrix::Zero(d, d);
  const auto add_single_marginals = [&](double sign) {
    for (const auto& leg : p.choi().legs()) {
      const MultiLegMatrix lg = marginal_log(p, {leg.label});
      grad += sign * embed(MultiLegMatrix(lg.entries(), {leg}), p.choi())
                         .entries();
    }
  };
  const auto add_pair_marginals = [&](double sign) {
    for (int k = 0; k <= n; ++k) {
      const std::vector<std::string> pair{sl.in_label(k + 1), sl.out_label(k)};
      MultiLegMatrix lg = marginal_log(p, pair);
      grad += sign * embed(lg, p.choi()).entries();
    }
  };

  switch (objective) {
    case Objective::kTotalInfo:
      // I = sum_k S(single_k) - S(P)
      grad += clamped_log2(p.choi()).entries();
      add_single_marginals(-1.0);
      break;
    case Objective::kMarkovInfo:
      // M = sum_k S(single_k) - sum_j S(pair_j)
      add_pair_marginals(1.0);
      add_single_marginals(-1.0);
      break;
    case Objective::kNonMarkovianity:
      // N = sum_j S(pair_j) - S(P)
      grad += clamped_log2(p.choi()).entries();
      add_pair_marginals(-1.0);
      break;
    default:
      throw std::invalid_argument("unknown objective");
  }
  return MultiLegMatrix(std::move(grad), p.choi().legs());
}

// Gradient of X -> surrogate(finish_link(hole, X)) at the current hole, given
// the gradient G on the output process (working-frame labels). Derivation:
// the output is linear in X, and the adjoint of that linear map is itself a
// link contraction of the environment tensor with the transposed gradient.
Matrix grad_wrt_channel(const LinkHole& hole, const MultiLegMatrix& g_work) {
  double gamma_shared = 1.0;
  for (const auto& label : {hole.hole_out_label, hole.hole_in_label}) {
    if (hole.env.has_leg(label)) gamma_shared *= hole.env.leg_dim(label);
  }
  double gamma_out = 1.0;
  std::vector<std::string> g_labels;
  for (const auto& leg : g_work.legs()) {
    g_labels.push_back(leg.label);
    if (hole.env.has_leg(leg.label)) gamma_out *= leg.dim;
  }
  const MultiLegMatrix g_t = partial_transpose(g_work, g_labels);
  MultiLegMatrix m = link_product(hole.env, g_t);
  m = permute_legs(m, {hole.hole_out_label, hole.hole_in_label});
  const Matrix scaled = (gamma_shared / gamma_out) * m.entries();
  // d f = sum_ab scaled_ab dX_ab; the Hermitian ascent direction follows.
  return 0.5 * (scaled.transpose() + scaled.conjugate());
}

MultiLegMatrix gradient_in_working_frame(const LinkHole& hole,
                                         const MultiLegMatrix& g_canonical) {
  std::vector<std::pair<std::string, std::string>> back;
  for (const auto& [work, canon] : hole.canonical_renames) {
    if (g_canonical.has_leg(canon)) back.push_back({canon, work});
  }
  return relabel(g_canonical, back);
}

std::string dd_cycle_pattern(int n_slots) {
  static const char kCycle[] = {'X', 'Z', 'X', 'Z'};
  std::string pattern;
  for (int k = 0; k < n_slots; ++k) pattern.push_back(kCycle[k % 4]);
  return pattern;
}

bool all_qubit_slots(const SlotStructure& slots) {
  for (int k = 0; k <= slots.n_slots(); ++k) {
    if (slots.out_dim(k) != 2) return false;
  }
  for (int k = 1; k <= slots.n_slots() + 1; ++k) {
    if (slots.in_dim(k) != 2) return false;
  }
  return true;
}

struct RestartOutcome {
  explicit RestartOutcome(ControlComb c) : comb(std::move(c)) {}
  ControlComb comb;
  double value = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

RestartOutcome run_restart(const ProcessTensor& t, ControlComb comb,
                           const OptimizerConfig& cfg,
                           const std::vector<int>& target_mask) {
  std::vector<std::vector<int>> stages;
  if (cfg.staged_schedule && !target_mask.empty()) {
    for (std::size_t s = 1; s <= target_mask.size(); ++s) {
      stages.emplace_back(target_mask.begin(), target_mask.begin() + s);
    }
  } else {
    stages.push_back(target_mask);
  }

  RestartOutcome outcome(std::move(comb));
  for (const auto& stage_mask : stages) {
    outcome.comb.set_coarse_mask(stage_mask);
    double objective = surrogate_value(cfg.objective, link(t, outcome.comb));
    outcome.converged = false;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      for (int c = 0; c < outcome.comb.n_channels(); ++c) {
        outcome.comb.set_channel(c, see_saw_inner(t, outcome.comb, c, cfg));
      }
      const double next = surrogate_value(cfg.objective, link(t, outcome.comb));
      outcome.trace.push_back(next);
      const bool settled =
          std::abs(next - objective) <= cfg.rel_tol * std::max(1.0, std::abs(objective));
      objective = next;
      if (settled) {
        outcome.converged = true;
        break;
      }
    }
  }
  outcome.value = quantifier_value(cfg.objective, link(t, outcome.comb));
  return outcome;
}

}  // namespace

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::kTotalInfo: return "total_info";
    case Objective::kMarkovInfo: return "markov_info";
    case Objective::kNonMarkovianity: return "non_markovianity";
    case Objective::kLambdaMaxProxy: return "lambda_max_proxy";
  }
  throw std::invalid_argument("unknown objective");
}

Objective objective_from_string(const std::string& name) {
  if (name == "total_info") return Objective::kTotalInfo;
  if (name == "markov_info") return Objective::kMarkovInfo;
  if (name == "non_markovianity") return Objective::kNonMarkovianity;
  if (name == "lambda_max_proxy") return Objective::kLambdaMaxProxy;
  throw std::invalid_argument("unknown objective '" + name + "'");
}

std::vector<int> mask_for_resolution(int n_slots,
                                     const std::vector<int>& kept) {
  std::vector<int> mask;
  for (int k = 1; k <= n_slots; ++k) {
    if (std::find(kept.begin(), kept.end(), k) == kept.end()) {
      mask.push_back(k);
    }
  }
  return mask;
}

Matrix channel_gradient(const ProcessTensor& t, const ControlComb& comb,
                        int slot_channel_index, Objective objective) {
  const LinkHole hole = link_all_but(t, comb, slot_channel_index);
  const ProcessTensor p = finish_link(hole, comb.channel(slot_channel_index));
  const MultiLegMatrix g_canonical = surrogate_gradient(objective, p);
  return grad_wrt_channel(hole, gradient_in_working_frame(hole, g_canonical));
}

CptpProjection cptp_project(const MultiLegMatrix& m, int in_dim) {
  const int dim = m.dim();
  if (in_dim < 1 || dim % in_dim != 0) {
    throw std::invalid_argument("cptp_project: input dim does not divide");
  }
  const int out_dim = dim / in_dim;
  const double herm_defect = (m.entries() - m.entries().adjoint()).norm();
  if (herm_defect > kHermTolScale * std::max(1.0, m.entries().norm())) {
    throw std::invalid_argument("cptp_project: matrix must be Hermitian");
  }

  const auto tp_project = [&](const Matrix& x) {
    // Orthogonal projection onto {X : tr_out X = 1/in_dim}.
    Matrix reduced = Matrix::Zero(in_dim, in_dim);
    for (int a = 0; a < out_dim; ++a) {
      reduced += x.block(a * in_dim, a * in_dim, in_dim, in_dim);
    }
    const Matrix delta =
        Matrix::Identity(in_dim, in_dim) / static_cast<double>(in_dim) -
        reduced;
    Matrix out = x;
    for (int a = 0; a < out_dim; ++a) {
      out.block(a * in_dim, a * in_dim, in_dim, in_dim) +=
          delta / static_cast<double>(out_dim);
    }
    return out;
  };
  const auto psd_project = [](const Matrix& x) {
    const EigResult eig = herm_eig(x);
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (int i = 0; i < eig.values.size(); ++i) {
      if (eig.values[i] > 0) {
        out += eig.values[i] * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
      }
    }
    return out;
  };

  constexpr int kMaxIters = 2000;
  constexpr double kStop = 1e-11;
  Matrix x = 0.5 * (m.entries() + m.entries().adjoint());
  Matrix p = Matrix::Zero(dim, dim);
  Matrix q = Matrix::Zero(dim, dim);
  double defect = 0.0;
  int iters = 0;
  for (; iters < kMaxIters; ++iters) {
    const Matrix y = psd_project(x + p);
    p = x + p - y;
    const Matrix xn = tp_project(y + q);
    q = y + q - xn;
    x = xn;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (x + x.adjoint()));
    defect = std::max(0.0, -solver.eigenvalues().minCoeff());
    if (defect <= kStop) break;
  }
  // The iterate satisfies trace preservation exactly; clean up any residual
  // negative part before handing the result to the Channel invariants.
  if (defect > kStop) {
    for (int round = 0; round < 8 && defect > kStop; ++round) {
      x = tp_project(psd_project(x));
      Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (x + x.adjoint()));
      defect = std::max(0.0, -solver.eigenvalues().minCoeff());
    }
  }
  CptpProjection result{Channel(0.5 * (x + x.adjoint()), out_dim, in_dim),
                        defect, iters, defect <= kFeasTol};
  return result;
}

Channel see_saw_inner(const ProcessTensor& t, const ControlComb& comb,
                      int slot_channel_index, const OptimizerConfig& cfg) {
  const LinkHole hole = link_all_but(t, comb, slot_channel_index);
  Channel x = comb.channel(slot_channel_index);
  double fx = surrogate_value(cfg.objective, finish_link(hole, x));
  double step = 0.5;

  for (int iter = 0; iter < cfg.inner_iters; ++iter) {
    const ProcessTensor p = finish_link(hole, x);
    const MultiLegMatrix g_canonical = surrogate_gradient(cfg.objective, p);
    const MultiLegMatrix g_work = gradient_in_working_frame(hole, g_canonical);
    const Matrix g = grad_wrt_channel(hole, g_work);
    const double g_norm = g.norm();
    if (g_norm < 1e-13) break;

    bool improved = false;
    for (int trial = 0; trial < 24; ++trial) {
      const Matrix candidate = x.choi().entries() + (step / g_norm) * g;
      const CptpProjection projected = cptp_project(
          MultiLegMatrix(candidate, x.choi().legs()), x.in_dim());
      const double fc =
          surrogate_value(cfg.objective, finish_link(hole, projected.channel));
      if (fc > fx + 1e-14) {
        x = projected.channel;
        fx = fc;
        step = std::min(step * 1.6, 4.0);
        improved = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-10) break;
    }
    if (!improved) break;
  }
  return x;
}

OptimResult estimate_monotone(const ProcessTensor& t,
                              const OptimizerConfig& cfg,
                              const std::vector<ControlComb>& extra_starts) {
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (cfg.rel_tol <= 0) throw std::invalid_argument("rel_tol must be > 0");
  const int n = t.n_slots();
  for (int k : cfg.target_resolution) {
    if (k < 1 || k > n) {
      throw std::invalid_argument("target_resolution outside slot range");
    }
  }
  const std::vector<int> mask = mask_for_resolution(n, cfg.target_resolution);

  std::vector<ControlComb> starts;
  starts.push_back(ControlComb::trivial(t.slots(), mask));
  if (n >= 1 && all_qubit_slots(t.slots()) && cfg.restarts > 1) {
    ControlComb dd = dd_sequence(n, dd_cycle_pattern(n));
    dd.set_coarse_mask(mask);
    starts.push_back(std::move(dd));
  }
  for (int r = static_cast<int>(starts.size()); r < cfg.restarts; ++r) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
    starts.push_back(random_unitary_comb(t.slots(), mask, rng));
  }
  for (const auto& seed_comb : extra_starts) {
    ControlComb adjusted = seed_comb;
    adjusted.set_coarse_mask(mask);
    adjusted.check_chaining(t.slots());
    starts.push_back(std::move(adjusted));
  }

  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(starts.size());
  const int threads = std::max(1, cfg.threads);
  if (threads <= 1) {
    for (auto& start : starts) {
      outcomes.push_back(run_restart(t, std::move(start), cfg, mask));
    }
  } else {
    std::vector<std::future<RestartOutcome>> futures;
    for (auto& start : starts) {
      futures.push_back(std::async(std::launch::async, [&t, &cfg, &mask,
                                                        s = std::move(start)]() {
        return run_restart(t, s, cfg, mask);
      }));
    }
    for (auto& f : futures) outcomes.push_back(f.get());
  }

  int best = 0;
  for (int r = 1; r < static_cast<int>(outcomes.size()); ++r) {
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  OptimResult result(outcomes[best].comb);
  result.best_value = quantifier_value(cfg.objective, link(t, result.best_comb));
  result.trace = std::move(outcomes[best].trace);
  result.converged = outcomes[best].converged;
  result.best_restart = best;
  return result;
}

SubadditivityReport subadditivity_check(const ProcessTensor& t,
                                        const OptimizerConfig& cfg) {
  SubadditivityReport report;
  std::vector<ControlComb> winners;
  const auto run = [&](Objective objective) {
    OptimizerConfig local = cfg;
    local.objective = objective;
    OptimResult res = estimate_monotone(t, local);
    winners.push_back(res.best_comb);
    return res.best_value;
  };
  report.i_bar_found = run(Objective::kTotalInfo);
  report.m_bar_found = run(Objective::kMarkovInfo);
  report.n_bar_found = run(Objective::kNonMarkovianity);
  report.gap =
      report.i_bar_found - (report.m_bar_found + report.n_bar_found);
  report.optimizer_shortfall = report.gap > 1e-6;
  for (const auto& comb : winners) {
    const QuantifierReport q = quantify(link(t, comb));
    report.worst_identity_defect =
        std::max(report.worst_identity_defect, q.identity_defect);
  }
  return report;
}

ControlComb warm_start_compose(const ControlComb& z_outer,
                               const ControlComb& z_inner) {
  const int n = z_outer.n_slots();
  std::vector<int> surviving;
  for (int k = 1; k <= n; ++k) {
    if (!z_outer.is_masked(k)) surviving.push_back(k);
  }
  if (static_cast<int>(surviving.size()) != z_inner.n_slots()) {
    throw std::invalid_argument(
        "warm_start_compose: inner comb does not fit the outer output");
  }

  std::vector<Channel> pre, post;
  std::vector<int> mask = z_outer.coarse_mask();
  pre.push_back(compose(z_outer.pre(0), z_inner.pre(0)));
  for (int k = 1; k <= n; ++k) {
    if (z_outer.is_masked(k)) {
      pre.push_back(z_outer.pre(k));
      post.push_back(z_outer.post(k));
      continue;
    }
    const int r = static_cast<int>(std::find(surviving.begin(),
                                             surviving.end(), k) -
                                   surviving.begin()) +
                  1;
    pre.push_back(compose(z_outer.pre(k), z_inner.pre(r)));
    post.push_back(compose(z_inner.post(r), z_outer.post(k)));
    if (z_inner.is_masked(r)) mask.push_back(k);
  }
  post.push_back(
      compose(z_inner.post(z_inner.n_slots() + 1), z_outer.post(n + 1)));
  return ControlComb(std::move(pre), std::move(post), std::move(mask));
}

ControlComb dd_sequence(int n_slots, const std::string& pattern) {
  if (static_cast<int>(pattern.size()) != n_slots) {
    throw std::invalid_argument("dd_sequence: pattern length != slot count");
  }
  std::vector<Channel> pre{Channel::identity(2)};
  std::vector<Channel> post;
  std::vector<int> mask;
  for (int k = 1; k <= n_slots; ++k) {
    pre.push_back(Channel::from_unitary(pauli(pattern[k - 1])));
    post.push_back(Channel::identity(2));
    mask.push_back(k);
  }
  post.push_back(Channel::identity(2));
  return ControlComb(std::move(pre), std::move(post), std::move(mask));
}

ControlComb random_unitary_comb(const SlotStructure& slots,
                                const std::vector<int>& mask, Rng& rng) {
  std::vector<Channel> pre, post;
  for (int k = 0; k <= slots.n_slots(); ++k) {
    pre.push_back(random_unitary_channel(rng, slots.out_dim(k)));
  }
  for (int k = 1; k <= slots.n_slots() + 1; ++k) {
    post.push_back(Channel::identity(slots.in_dim(k)));
  }
  return ControlComb(std::move(pre), std::move(post), mask);
}

ControlComb random_cptp_comb(const SlotStructure& slots,
                             const std::vector<int>& mask, Rng& rng) {
  std::vector<Channel> pre, post;
  for (int k = 0; k <= slots.n_slots(); ++k) {
    pre.push_back(random_cptp(rng, slots.out_dim(k), slots.out_dim(k)));
  }
  for (int k = 1; k <= slots.n_slots() + 1; ++k) {
    post.push_back(random_cptp(rng, slots.in_dim(k), slots.in_dim(k)));
  }
  return ControlComb(std::move(pre), std::move(post), mask);
}

ControlComb tensor_combs(const ControlComb& a, const ControlComb& b) {
  if (a.n_slots() != b.n_slots() || a.coarse_mask() != b.coarse_mask()) {
    throw std::invalid_argument("tensor_combs: slot or mask mismatch");
  }
  const int n = a.n_slots();
  std::vector<Channel> pre, post;
  for (int k = 0; k <= n; ++k) pre.push_back(tensor(a.pre(k), b.pre(k)));
  for (int k = 1; k <= n + 1; ++k) post.push_back(tensor(a.post(k), b.post(k)));
  return ControlComb(std::move(pre), std::move(post), a.coarse_mask());
}

ControlComb concat_combs(const ControlComb& first, const ControlComb& second) {
  const int na = first.n_slots();
  const int nb = second.n_slots();
  std::vector<Channel> pre, post;
  std::vector<int> mask = first.coarse_mask();
  for (int k = 0; k <= na; ++k) pre.push_back(first.pre(k));
  for (int k = 0; k <= nb; ++k) pre.push_back(second.pre(k));
  for (int k = 1; k <= na + 1; ++k) post.push_back(first.post(k));
  for (int k = 1; k <= nb + 1; ++k) post.push_back(second.post(k));
  for (int k : second.coarse_mask()) mask.push_back(na + 1 + k);
  return ControlComb(std::move(pre), std::move(post), std::move(mask));
}

ControlComb absorb_parallel_free(const ControlComb& joint,
                                 const ProcessTensor& free_part,
                                 bool free_is_second) {
  const SlotStructure& fs = free_part.slots();
  const int n = joint.n_slots();
  if (fs.n_slots() != n) {
    throw std::invalid_argument("absorb_parallel_free: slot count mismatch");
  }

  const auto single_marginal = [&](const std::string& label) {
    std::vector<std::string> over;
    for (const auto& leg : free_part.choi().legs()) {
      if (leg.label != label) over.push_back(leg.label);
    }
    return partial_trace(free_part.choi(), over);
  };

  // Split the fused leg of a joint channel and contract the free factor's
  // marginal on its component (second = least significant).
  const auto absorb = [&](const Channel& ch, const std::string& which,
                          int free_dim, const MultiLegMatrix& factor) {
    const int fused = ch.choi().leg_dim(which);
    const int keep = fused / free_dim;
    MultiLegMatrix split =
        free_is_second
            ? split_leg(ch.choi(), which, keep, which, "free")
            : split_leg(ch.choi(), which, free_dim, "free", which);
    const MultiLegMatrix contracted =
        link_product(relabel(factor, {{factor.legs()[0].label, "free"}}), split);
    MultiLegMatrix aligned = permute_legs(contracted, {"out", "in"});
    const int out_dim = aligned.legs()[0].dim;
    const int in_dim = aligned.legs()[1].dim;
    return Channel(aligned.entries(), out_dim, in_dim);
  };

  std::vector<Channel> pre, post;
  for (int k = 0; k <= n; ++k) {
    pre.push_back(absorb(joint.pre(k), "out", fs.out_dim(k),
                         single_marginal(fs.out_label(k))));
  }
  for (int k = 1; k <= n + 1; ++k) {
    post.push_back(absorb(joint.post(k), "in", fs.in_dim(k),
                          single_marginal(fs.in_label(k))));
  }
  return ControlComb(std::move(pre), std::move(post), joint.coarse_mask());
}

}  // namespace qcomb
