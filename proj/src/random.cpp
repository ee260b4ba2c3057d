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

#include "qcomb/random.hpp"

#include <cmath>

namespace qcomb {

Matrix ginibre(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  return m;
}

Matrix haar_unitary(Rng& rng, int dim) {
  const Matrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar.
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    q.col(i) *= (mag > 0 ? d / mag : Complex(1.0, 0.0));
  }
  return q;
}

Matrix random_density(Rng& rng, int dim) {
  const Matrix g = ginibre(rng, dim, dim);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Channel random_cptp(Rng& rng, int out_dim, int in_dim) {
  const int env_dim = in_dim * out_dim;
  // Isometry in_dim -> out_dim * env_dim: first in_dim columns of a Haar
  // unitary on the dilated space.
  const Matrix u = haar_unitary(rng, out_dim * env_dim);
  const Matrix v = u.leftCols(in_dim);
  std::vector<Matrix> kraus;
  kraus.reserve(env_dim);
  for (int e = 0; e < env_dim; ++e) {
    Matrix k(out_dim, in_dim);
    for (int a = 0; a < out_dim; ++a) {
      k.row(a) = v.row(a * env_dim + e);
    }
    kraus.push_back(std::move(k));
  }
  return Channel::from_kraus(kraus, out_dim, in_dim);
}

Channel random_unitary_channel(Rng& rng, int dim) {
  return Channel::from_unitary(haar_unitary(rng, dim));
}

}  // namespace qcomb
