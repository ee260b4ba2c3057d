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
#include <limits>

#include "qcomb/quantifiers.hpp"
#include "qcomb/random.hpp"
#include "qcomb/rng.hpp"
#include "qcomb/scenarios.hpp"

using namespace qcomb;

namespace {

ProcessTensor random_process(std::uint64_t seed, int n_slots, int env_dim) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kHaarRandomEnv;
  spec.n_slots = n_slots;
  spec.env_dim = env_dim;
  spec.seed = seed;
  return build_random(spec);
}

}  // namespace

TEST_CASE("vn_entropy on pure and maximally mixed states") {
  CHECK(vn_entropy(max_entangled(2, "a", "b")) ==
        doctest::Approx(0.0).epsilon(1e-12));
  const MultiLegMatrix mixed(Matrix::Identity(4, 4) / 4.0,
                             {{"a", 2}, {"b", 2}});
  CHECK(vn_entropy(mixed) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("vn_entropy matches the eigenvalue-sum oracle on a random state") {
  Rng rng(30);
  const Matrix rho = random_density(rng, 6);
  const MultiLegMatrix m(rho, {{"a", 6}});
  // Oracle: direct eigenvalue sum via Eigen on the raw matrix.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  long double expected = 0.0L;
  for (int i = 0; i < 6; ++i) {
    const long double p = solver.eigenvalues()[i];
    if (p > 0) expected -= p * std::log2((double)p);
  }
  CHECK(vn_entropy(m) == doctest::Approx((double)expected).epsilon(1e-12));
}

TEST_CASE("vn_entropy rejects invalid states") {
  const MultiLegMatrix not_unit(Matrix::Identity(2, 2), {{"a", 2}});
  CHECK_THROWS_AS(vn_entropy(not_unit), std::invalid_argument);
  Matrix indefinite(2, 2);
  indefinite << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(vn_entropy(MultiLegMatrix(indefinite, {{"a", 2}})),
                  std::invalid_argument);
}

TEST_CASE("rel_entropy of a state with itself is zero") {
  Rng rng(31);
  const MultiLegMatrix rho(random_density(rng, 4), {{"a", 4}});
  CHECK(std::abs(rel_entropy(rho, rho)) < 1e-10);
}

TEST_CASE("rel_entropy of the entangled state to the mixed state is 2 bits") {
  const MultiLegMatrix psi = max_entangled(2, "a", "b");
  const MultiLegMatrix mixed(Matrix::Identity(4, 4) / 4.0,
                             {{"a", 2}, {"b", 2}});
  CHECK(rel_entropy(psi, mixed) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rel_entropy is infinite on disjoint supports") {
  Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const double s = rel_entropy(MultiLegMatrix(zero, {{"a", 2}}),
                               MultiLegMatrix(one, {{"a", 2}}));
  CHECK(std::isinf(s));
  CHECK(s > 0);
}

TEST_CASE("rel_entropy rejects leg mismatches") {
  Rng rng(32);
  const MultiLegMatrix a(random_density(rng, 2), {{"a", 2}});
  const MultiLegMatrix b(random_density(rng, 2), {{"b", 2}});
  CHECK_THROWS_AS(rel_entropy(a, b), std::invalid_argument);
}

TEST_CASE("rel_entropy is insensitive to leg order of the second argument") {
  Rng rng(33);
  const std::vector<LegSpec> legs{{"a", 2}, {"b", 3}};
  const MultiLegMatrix x(random_density(rng, 6), legs);
  const MultiLegMatrix y(random_density(rng, 6), legs);
  const MultiLegMatrix y_swapped = permute_legs(y, {"b", "a"});
  CHECK(rel_entropy(x, y) ==
        doctest::Approx(rel_entropy(x, y_swapped)).epsilon(1e-12));
}

TEST_CASE("counterexample quantifier values") {
  const ProcessTensor t = build_counterexample();
  CHECK(std::abs(total_info(t) - 1.0) < 1e-8);
  CHECK(std::abs(total_info(coarse_grain(t, {1})) - 2.0) < 1e-8);
  CHECK(non_markovianity(t) > 1e-3);
  CHECK(markov_info(t) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("raw total information is not monotone under coarse-graining") {
  const ProcessTensor t = build_counterexample();
  const double before = total_info(t);
  const double after = total_info(coarse_grain(t, {1}));
  CHECK(after > before + 0.5);
}

TEST_CASE("free and Markov processes have vanishing quantifiers") {
  ScenarioSpec spec;
  spec.seed = 71;
  spec.n_slots = 2;
  spec.kind = ScenarioKind::kUncorrelatedRandom;
  const ProcessTensor u = build_random(spec);
  CHECK(std::abs(total_info(u)) < 1e-9);
  CHECK(std::abs(markov_info(u)) < 1e-9);
  CHECK(std::abs(non_markovianity(u)) < 1e-9);

  spec.kind = ScenarioKind::kMarkovRandom;
  const ProcessTensor m = build_random(spec);
  CHECK(std::abs(non_markovianity(m)) < 1e-9);
  CHECK(std::abs(total_info(m) - markov_info(m)) < 1e-9);
}

TEST_CASE("Markov process of two identity channels has M = I = 4") {
  const ProcessTensor t = build_process(
      MultiLegMatrix::scalar(1.0), {Channel::identity(2), Channel::identity(2)},
      2);
  CHECK(markov_info(t) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(total_info(t) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("identity I = M + N over many random processes") {
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    ScenarioSpec spec;
    spec.kind = s % 4 == 0 ? ScenarioKind::kMarkovRandom
                           : ScenarioKind::kHaarRandomEnv;
    spec.n_slots = 1 + s % 2;
    spec.env_dim = 2 + s % 3;
    spec.seed = 1000 + s;
    const QuantifierReport q = quantify(build_random(spec));
    CHECK(q.total_info_bits >= -1e-9);
    CHECK(q.markov_info_bits >= -1e-9);
    CHECK(q.non_markovianity_bits >= -1e-9);
    worst = std::max(worst, q.identity_defect);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("per-superprocess divergence inequality for random IQI combs") {
  Rng rng(34);
  const ProcessTensor t = build_counterexample();
  const ProcessTensor marg = full_marginal(t);
  for (int trial = 0; trial < 10; ++trial) {
    ControlComb z({random_cptp(rng, 2, 2), random_cptp(rng, 2, 2)},
                  {random_cptp(rng, 2, 2), random_cptp(rng, 2, 2)}, {1});
    const ProcessTensor pushed = link(t, z);
    const ProcessTensor marg_pushed = link(marg, z);
    const double lhs = rel_entropy(pushed.choi(), marg_pushed.choi());
    const double rhs = total_info(pushed);
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("quantifier report carries a small identity defect") {
  const QuantifierReport q = quantify(random_process(55, 2, 3));
  CHECK(q.identity_defect <= 1e-8);
}
