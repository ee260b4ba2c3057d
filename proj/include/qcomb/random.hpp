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
#include "qcomb/rng.hpp"

namespace qcomb {

// Complex Gaussian matrix, independent standard normal real/imag parts.
Matrix ginibre(Rng& rng, int rows, int cols);

// Haar-distributed unitary via orthonormalization of a Ginibre matrix,
// with the phase convention that makes the factorization unique.
Matrix haar_unitary(Rng& rng, int dim);

// Full-rank random density matrix G G^dag / tr.
Matrix random_density(Rng& rng, int dim);

// Generic CPTP map via a Haar random isometry into an environment of
// dimension in_dim * out_dim.
Channel random_cptp(Rng& rng, int out_dim, int in_dim);

Channel random_unitary_channel(Rng& rng, int dim);

}  // namespace qcomb
