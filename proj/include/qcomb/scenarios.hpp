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

namespace qcomb {

enum class ScenarioKind {
  kCounterexample,
  kMarkovRandom,
  kUncorrelatedRandom,
  kHaarRandomEnv,
  kPlantedUnitary,
  kDephasingStaticEnv,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

// Deterministic recipe for a test process.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kCounterexample;
  int sys_dim = 2;
  int env_dim = 2;
  int n_slots = 1;
  std::uint64_t seed = 0;
  std::vector<double> params;  // kind-specific
};

// One-slot qubit process with a two-qubit environment |0><0| (x) 1/2 whose
// first interval swaps the system into the environment and whose second
// interval dephases, conditionally swaps the environment qubits, and swaps
// back. The process output at t_1 is |0><0| for every input, and the output
// at t_f is p*rho_1 + (1-p)*1/2 with p = <0|rho_2|0>. Its total information
// rises from 1 to 2 bits under coarse-graining.
ProcessTensor build_counterexample();

// Random process families; bitwise deterministic given spec.seed.
//  - kMarkovRandom: independent random CPTP step channels, trivial env.
//  - kUncorrelatedRandom: product of random input states with maximally
//    mixed output legs (the free processes).
//  - kHaarRandomEnv: independent Haar system-environment unitaries per
//    interval; env_dim controls the memory size.
ProcessTensor build_random(const ScenarioSpec& spec);

// Ground-truth models for optimizer tests. Returns the process together with
// a comb witnessing the intended optimum:
//  - kPlantedUnitary: noiseless dynamics conjugated by known unitaries; the
//    returned comb inverts them, reaching 2*log2(sys_dim) at full closure.
//  - kDephasingStaticEnv: system dephased through a static environment
//    coupling that anticommutes with X, so echo pulses outperform doing
//    nothing; the returned comb is the exact echo sequence.
struct PlantedModel {
  ProcessTensor process;
  ControlComb comb;
};
PlantedModel build_planted(const ScenarioSpec& spec);

// Standard qubit gates used by the scenarios and the DD sequences.
Matrix pauli(char which);  // 'I', 'X', 'Y', 'Z'

}  // namespace qcomb
