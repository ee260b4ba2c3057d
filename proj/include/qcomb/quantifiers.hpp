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

#include "qcomb/comb.hpp"
#include "qcomb/linalg.hpp"

namespace qcomb {

// Acceptance tolerance for the state checks (unit trace, positivity) of
// entropy inputs.
inline constexpr double kStateTol = 1e-8;

// Mass of x allowed outside the support of y before a relative entropy is
// declared infinite.
inline constexpr double kSupportTol = 1e-9;

// Temporal-correlation content of one process, in bits.
struct QuantifierReport {
  double total_info_bits = 0.0;       // I
  double markov_info_bits = 0.0;      // M
  double non_markovianity_bits = 0.0; // N
  double identity_defect = 0.0;       // |I - (M + N)|
};

// Von Neumann entropy in bits of a unit-trace PSD matrix. Eigenvalues below
// the support cutoff contribute zero; trace or positivity violations beyond
// kStateTol are rejected.
double vn_entropy(const MultiLegMatrix& m);

// Quantum relative entropy S(x || y) = tr[x log2 x - x log2 y], evaluated in
// the eigenbases of x and y. Returns +infinity when the support of x is not
// contained in the support of y. Both arguments must be unit-trace PSD on the
// same legs (any order).
double rel_entropy(const MultiLegMatrix& x, const MultiLegMatrix& y);

// I(T) = S(T || T^marg): distance to the process' own uncorrelated marginals.
double total_info(const ProcessTensor& t);

// M(T) = S(T^Mkv || T^marg): correlation content of the step marginals.
double markov_info(const ProcessTensor& t);

// N(T) = S(T || T^Mkv): distance to the process' own Markov marginal.
double non_markovianity(const ProcessTensor& t);

QuantifierReport quantify(const ProcessTensor& t);

}  // namespace qcomb
