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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcomb/divergence.hpp"
#include "qcomb/quantifiers.hpp"
#include "qcomb/random.hpp"
#include "qcomb/scenarios.hpp"

using namespace qcomb;

namespace {

DivergenceConfig small_config(std::uint64_t seed) {
  DivergenceConfig cfg;
  cfg.opt.restarts = 3;
  cfg.opt.max_sweeps = 2;
  cfg.opt.inner_iters = 10;
  cfg.opt.rel_tol = 1e-6;
  cfg.opt.seed = seed;
  return cfg;
}

ProcessTensor random_process(std::uint64_t seed, int n_slots, int env_dim) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kHaarRandomEnv;
  spec.n_slots = n_slots;
  spec.env_dim = env_dim;
  spec.seed = seed;
  return build_random(spec);
}

}  // namespace

TEST_CASE("divergence of a process against itself vanishes") {
  const ProcessTensor t = build_counterexample();
  const DivergenceResult res = reachable_divergence(t, t, small_config(1));
  CHECK(std::abs(res.value_bits) < 1e-9);
  CHECK_FALSE(res.support_violation);
  CHECK(res.samples_evaluated > 0);
}

TEST_CASE("divergence against the marginal reaches the channel bound") {
  const ProcessTensor t = build_counterexample();
  const DivergenceResult res =
      reachable_divergence(t, full_marginal(t), small_config(2));
  CHECK(res.value_bits >= 2.0 - 1e-8);
}

TEST_CASE("identity channel against the fully mixed channel gives 2 bits") {
  // Zero-slot processes: the divergence with the trivial comb equals
  // S(psi+ || 1/4) = 2.
  const SlotStructure slots = SlotStructure::uniform(0, 2);
  const ProcessTensor psi(
      permute_legs(max_entangled(2, "in_f", "out_i"), slots.leg_order()),
      slots);
  const ProcessTensor mixed(
      MultiLegMatrix(Matrix::Identity(4, 4) / 4.0, slots.legs()), slots);
  DivergenceConfig cfg = small_config(3);
  cfg.ref_dim = 1;
  const DivergenceResult res = reachable_divergence(psi, mixed, cfg);
  CHECK(res.value_bits >= 2.0 - 1e-9);
}

TEST_CASE("the reported value is achieved by the stored witness") {
  const ProcessTensor t = random_process(4, 1, 2);
  const ProcessTensor r = full_marginal(t);
  const DivergenceResult res = reachable_divergence(t, r, small_config(4));
  const double replay = rel_entropy(link(t, res.witness_comb).choi(),
                                    link(r, res.witness_comb).choi());
  CHECK(std::abs(replay - res.value_bits) < 1e-10);
}

TEST_CASE("support violations are reported as infinite with a witness") {
  // Reference with a pure slot-output leg cannot cover the identity process.
  const SlotStructure slots = SlotStructure::uniform(0, 2);
  const ProcessTensor psi(
      permute_legs(max_entangled(2, "in_f", "out_i"), slots.leg_order()),
      slots);
  Matrix pure = Matrix::Zero(4, 4);
  pure(0, 0) = 0.5;
  pure(1, 1) = 0.5;  // |0><0| (x) 1/2 : in_f support is rank one
  const ProcessTensor degenerate(MultiLegMatrix(pure, slots.legs()), slots);
  DivergenceConfig cfg = small_config(5);
  cfg.ref_dim = 1;
  const DivergenceResult res = reachable_divergence(psi, degenerate, cfg);
  CHECK(std::isinf(res.value_bits));
  CHECK(res.support_violation);
}

TEST_CASE("data-processing consistency through comb composition") {
  // A witness found for the transformed pair composes into a witness for the
  // original pair achieving the same value.
  Rng rng(50);
  const ProcessTensor t = build_counterexample();
  const ProcessTensor r = full_marginal(t);
  ControlComb z = random_cptp_comb(t.slots(), {}, rng);
  const ProcessTensor t2 = link(t, z);
  const ProcessTensor r2 = link(r, z);

  DivergenceConfig cfg = small_config(6);
  cfg.ref_dim = 1;
  const DivergenceResult inner = reachable_divergence(t2, r2, cfg);
  const ControlComb composed = warm_start_compose(z, inner.witness_comb);
  const double replay = rel_entropy(link(t, composed).choi(),
                                    link(r, composed).choi());
  CHECK(replay >= inner.value_bits - 1e-9);

  const DivergenceResult seeded =
      reachable_divergence(t, r, cfg, {composed});
  CHECK(seeded.value_bits >= inner.value_bits - 1e-9);
}

TEST_CASE("per-witness marginal inequality holds on divergence witnesses") {
  const ProcessTensor t = random_process(7, 1, 2);
  const ProcessTensor marg = full_marginal(t);
  const DivergenceResult res =
      reachable_divergence(t, marg, small_config(7));
  const ProcessTensor pushed = link(t, res.witness_comb);
  const ProcessTensor marg_pushed = link(marg, res.witness_comb);
  CHECK(rel_entropy(pushed.choi(), marg_pushed.choi()) >=
        total_info(pushed) - 1e-9);
}

TEST_CASE("hierarchy check on the counterexample") {
  const ProcessTensor t = build_counterexample();
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.max_sweeps = 3;
  cfg.inner_iters = 10;
  cfg.seed = 8;
  const HierarchyReport report = hierarchy_check(t, cfg);
  CHECK(report.pass);
  CHECK(report.i_bar_found >= 2.0 - 1e-6);
  CHECK(report.equality_defect <= 1e-6);
  CHECK(report.d_reach_found >= report.i_bar_found - 1e-8);
  CHECK(report.witness_margin >= -1e-9);
}

TEST_CASE("hierarchy check on a fully uncorrelated process") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kUncorrelatedRandom;
  spec.n_slots = 1;
  spec.seed = 9;
  const ProcessTensor u = build_random(spec);
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_sweeps = 1;
  cfg.inner_iters = 5;
  cfg.seed = 10;
  const HierarchyReport report = hierarchy_check(u, cfg);
  CHECK(std::abs(report.i_bar_found) < 1e-6);
  CHECK(std::abs(report.m_bar_found) < 1e-6);
  // free processes stay free under every comb, so the divergence to the own
  // marginal vanishes as well
  CHECK(std::abs(report.d_reach_found) < 1e-6);
}

TEST_CASE("reference extension preserves the achieved value") {
  const ProcessTensor t = build_counterexample();
  const ProcessTensor r = full_marginal(t);
  const ControlComb base = ControlComb::trivial(t.slots(), {1});
  const ControlComb extended = extend_comb_with_ref(base, 3);
  const double plain = rel_entropy(link(t, base).choi(), link(r, base).choi());
  const double wide =
      rel_entropy(link(t, extended).choi(), link(r, extended).choi());
  CHECK(plain == doctest::Approx(wide).epsilon(1e-10));
}

TEST_CASE("divergence rejects mismatched slot structures") {
  const ProcessTensor t = build_counterexample();
  const ProcessTensor r = random_process(11, 0, 2);
  CHECK_THROWS_AS(reachable_divergence(t, r, small_config(12)),
                  std::invalid_argument);
}
