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

#include "qcomb/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "qcomb/random.hpp"
#include "qcomb/rng.hpp"

namespace qcomb {

namespace {

// Permutation unitary on three qubits (most significant first) given a
// mapping of bit triples.
template <typename Fn>
Matrix three_qubit_permutation(Fn&& map_bits) {
  Matrix u = Matrix::Zero(8, 8);
  for (int idx = 0; idx < 8; ++idx) {
    const int b2 = (idx >> 2) & 1;
    const int b1 = (idx >> 1) & 1;
    const int b0 = idx & 1;
    const auto [n2, n1, n0] = map_bits(b2, b1, b0);
    u((n2 << 2) | (n1 << 1) | n0, idx) = 1.0;
  }
  return u;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kCounterexample: return "counterexample";
    case ScenarioKind::kMarkovRandom: return "markov_random";
    case ScenarioKind::kUncorrelatedRandom: return "uncorrelated_random";
    case ScenarioKind::kHaarRandomEnv: return "haar_random_env";
    case ScenarioKind::kPlantedUnitary: return "planted_unitary";
    case ScenarioKind::kDephasingStaticEnv: return "dephasing_static_env";
  }
  throw std::invalid_argument("unknown scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "counterexample") return ScenarioKind::kCounterexample;
  if (name == "markov_random") return ScenarioKind::kMarkovRandom;
  if (name == "uncorrelated_random") return ScenarioKind::kUncorrelatedRandom;
  if (name == "haar_random_env") return ScenarioKind::kHaarRandomEnv;
  if (name == "planted_unitary") return ScenarioKind::kPlantedUnitary;
  if (name == "dephasing_static_env") return ScenarioKind::kDephasingStaticEnv;
  throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

Matrix pauli(char which) {
  Matrix m(2, 2);
  switch (which) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default:
      throw std::invalid_argument("pauli: expected one of I, X, Y, Z");
  }
  return m;
}

ProcessTensor build_counterexample() {
  // Environment: e1 in |0><0|, e2 maximally mixed.
  Matrix env = Matrix::Zero(4, 4);
  env(0, 0) = 0.5;
  env(1, 1) = 0.5;
  const MultiLegMatrix env_state(env, {{"e1", 2}, {"e2", 2}});

  // First interval: SWAP(s, e1).
  const Matrix swap_se1 = three_qubit_permutation(
      [](int s, int e1, int e2) { return std::make_tuple(e1, s, e2); });

  // Second interval: complete dephasing on s, then an s-controlled SWAP of
  // (e1, e2), then SWAP(s, e1).
  const Matrix cswap = three_qubit_permutation([](int s, int e1, int e2) {
    return s == 1 ? std::make_tuple(s, e2, e1) : std::make_tuple(s, e1, e2);
  });
  const Matrix p0 = (Matrix(2, 2) << 1, 0, 0, 0).finished();
  const Matrix p1 = (Matrix(2, 2) << 0, 0, 0, 1).finished();
  const Matrix id4 = Matrix::Identity(4, 4);
  Matrix k0(8, 8), k1(8, 8);
  k0.setZero();
  k1.setZero();
  k0.topLeftCorner(4, 4) = id4;        // P0 (x) 1
  k1.bottomRightCorner(4, 4) = id4;    // P1 (x) 1
  const Channel dephase_s = Channel::from_kraus({k0, k1}, 8, 8);
  const Channel second =
      compose(Channel::from_unitary(swap_se1 * cswap), dephase_s);

  return build_process(env_state,
                       {Channel::from_unitary(swap_se1), second}, 2);
}

ProcessTensor build_random(const ScenarioSpec& spec) {
  Rng rng(spec.seed);
  const int n = spec.n_slots;
  const int d = spec.sys_dim;
  switch (spec.kind) {
    case ScenarioKind::kMarkovRandom: {
      std::vector<Channel> dynamics;
      for (int k = 0; k <= n; ++k) dynamics.push_back(random_cptp(rng, d, d));
      return build_process(MultiLegMatrix::scalar(1.0), dynamics, d);
    }
    case ScenarioKind::kUncorrelatedRandom: {
      const SlotStructure slots = SlotStructure::uniform(n, d);
      MultiLegMatrix choi = MultiLegMatrix::scalar(1.0);
      for (int k = n; k >= 0; --k) {
        const MultiLegMatrix in_state(random_density(rng, d),
                                      {{slots.in_label(k + 1), d}});
        const MultiLegMatrix out_mixed(
            Matrix::Identity(d, d) / static_cast<double>(d),
            {{slots.out_label(k), d}});
        choi = tensor_product(choi, tensor_product(in_state, out_mixed));
      }
      return ProcessTensor(std::move(choi), slots);
    }
    case ScenarioKind::kHaarRandomEnv: {
      const int de = spec.env_dim;
      Matrix env = Matrix::Zero(de, de);
      env(0, 0) = 1.0;
      std::vector<Channel> dynamics;
      for (int k = 0; k <= n; ++k) {
        dynamics.push_back(
            Channel::from_unitary(haar_unitary(rng, d * de)));
      }
      return build_process(MultiLegMatrix(env, {{"e", de}}), dynamics, d);
    }
    case ScenarioKind::kCounterexample:
      return build_counterexample();
    default:
      throw std::invalid_argument(
          "build_random: use build_planted for planted scenarios");
  }
}

PlantedModel build_planted(const ScenarioSpec& spec) {
  Rng rng(spec.seed);
  const int n = spec.n_slots;
  const int d = spec.sys_dim;
  if (spec.kind == ScenarioKind::kPlantedUnitary) {
    std::vector<Matrix> unitaries;
    std::vector<Channel> dynamics;
    for (int k = 0; k <= n; ++k) {
      unitaries.push_back(haar_unitary(rng, d));
      dynamics.push_back(Channel::from_unitary(unitaries.back()));
    }
    ProcessTensor process =
        build_process(MultiLegMatrix::scalar(1.0), dynamics, d);

    std::vector<Channel> pre, post;
    std::vector<int> mask;
    for (int k = 0; k <= n; ++k) {
      pre.push_back(Channel::from_unitary(unitaries[k].adjoint()));
      post.push_back(Channel::identity(d));
      if (k >= 1) mask.push_back(k);
    }
    return PlantedModel{std::move(process),
                        ControlComb(std::move(pre), std::move(post), mask)};
  }

  if (spec.kind == ScenarioKind::kDephasingStaticEnv) {
    if (n < 1) {
      throw std::invalid_argument("dephasing_static_env needs >= 1 slot");
    }
    // Interval angles theta_0..theta_n for the coupling Z (x) Z. The default
    // angles make the all-X echo exact: the alternating sum vanishes.
    std::vector<double> theta(spec.params.begin(), spec.params.end());
    if (theta.empty()) {
      theta.resize(n + 1);
      double alt = 0.0;
      for (int k = 1; k <= n; ++k) {
        theta[k] = 0.5 / k;
        alt += (k % 2 == 1 ? theta[k] : -theta[k]);
      }
      theta[0] = alt;
      if (theta[0] <= 0.0) theta[0] = 0.25;
    }
    if (static_cast<int>(theta.size()) != n + 1) {
      throw std::invalid_argument(
          "dephasing_static_env: need n+1 interval angles");
    }

    Matrix env = Matrix::Identity(2, 2) / 2.0;
    Matrix coupling = Matrix::Zero(4, 4);  // Z (x) Z, system most significant
    coupling(0, 0) = 1.0;
    coupling(1, 1) = -1.0;
    coupling(2, 2) = -1.0;
    coupling(3, 3) = 1.0;
    std::vector<Channel> dynamics;
    for (int k = 0; k <= n; ++k) {
      // exp(-i theta Z(x)Z) in closed form, since (Z(x)Z)^2 = 1.
      const Matrix u = std::cos(theta[k]) * Matrix::Identity(4, 4) -
                       Complex(0, 1) * std::sin(theta[k]) * coupling;
      dynamics.push_back(Channel::from_unitary(u));
    }
    ProcessTensor process =
        build_process(MultiLegMatrix(env, {{"e", 2}}), dynamics, 2);

    std::vector<Channel> pre{Channel::identity(2)};
    std::vector<Channel> post;
    std::vector<int> mask;
    for (int k = 1; k <= n; ++k) {
      pre.push_back(Channel::from_unitary(pauli('X')));
      mask.push_back(k);
    }
    for (int k = 1; k <= n + 1; ++k) post.push_back(Channel::identity(2));
    return PlantedModel{std::move(process),
                        ControlComb(std::move(pre), std::move(post), mask)};
  }

  throw std::invalid_argument("build_planted: not a planted scenario kind");
}

}  // namespace qcomb
