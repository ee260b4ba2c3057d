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

#include "qcomb/quantifiers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcomb {

namespace {

void check_state(const MultiLegMatrix& m, const RealVector& eigenvalues) {
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > kStateTol) {
    throw std::invalid_argument("entropy input must have unit trace");
  }
  if (eigenvalues.minCoeff() < -kStateTol) {
    throw std::invalid_argument("entropy input must be positive semidefinite");
  }
}

}  // namespace

double vn_entropy(const MultiLegMatrix& m) {
  const EigResult eig = herm_eig(m);
  check_state(m, eig.values);
  double s = 0.0;
  for (int i = 0; i < eig.values.size(); ++i) {
    const double p = eig.values[i];
    if (p > kEigCutoff) s -= p * std::log2(p);
  }
  return s;
}

double rel_entropy(const MultiLegMatrix& x, const MultiLegMatrix& y) {
  for (const auto& leg : x.legs()) {
    if (!y.has_leg(leg.label) || y.leg_dim(leg.label) != leg.dim) {
      throw std::invalid_argument("rel_entropy: leg mismatch on '" +
                                  leg.label + "'");
    }
  }
  if (x.n_legs() != y.n_legs()) {
    throw std::invalid_argument("rel_entropy: leg mismatch");
  }
  std::vector<std::string> order;
  for (const auto& leg : x.legs()) order.push_back(leg.label);
  const MultiLegMatrix y_aligned = permute_legs(y, order);

  const EigResult ex = herm_eig(x);
  const EigResult ey = herm_eig(y_aligned);
  check_state(x, ex.values);
  check_state(y_aligned, ey.values);

  // Overlap weights |<u_i|v_j>|^2 between the two eigenbases.
  const Eigen::MatrixXd overlap =
      (ex.vectors.adjoint() * ey.vectors).cwiseAbs2();

  double s = 0.0;
  for (int i = 0; i < ex.values.size(); ++i) {
    const double p = ex.values[i];
    if (p > kEigCutoff) s += p * std::log2(p);
  }

  double cross = 0.0;
  double outside_mass = 0.0;
  for (int j = 0; j < ey.values.size(); ++j) {
    const double q = ey.values[j];
    if (q > kEigCutoff) {
      double weight = 0.0;
      for (int i = 0; i < ex.values.size(); ++i) {
        const double p = ex.values[i];
        if (p > kEigCutoff) weight += p * overlap(i, j);
      }
      cross += weight * std::log2(q);
    } else {
      for (int i = 0; i < ex.values.size(); ++i) {
        const double p = ex.values[i];
        if (p > kEigCutoff) outside_mass += p * overlap(i, j);
      }
    }
  }
  if (outside_mass > kSupportTol) {
    return std::numeric_limits<double>::infinity();
  }
  return s - cross;
}

double total_info(const ProcessTensor& t) {
  return rel_entropy(t.choi(), full_marginal(t).choi());
}

double markov_info(const ProcessTensor& t) {
  return rel_entropy(markov_marginal(t).choi(), full_marginal(t).choi());
}

double non_markovianity(const ProcessTensor& t) {
  return rel_entropy(t.choi(), markov_marginal(t).choi());
}

QuantifierReport quantify(const ProcessTensor& t) {
  QuantifierReport report;
  report.total_info_bits = total_info(t);
  report.markov_info_bits = markov_info(t);
  report.non_markovianity_bits = non_markovianity(t);
  report.identity_defect =
      std::abs(report.total_info_bits -
               (report.markov_info_bits + report.non_markovianity_bits));
  return report;
}

}  // namespace qcomb
