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

#include "qcomb/linalg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace qcomb {

namespace {

void check_unique_labels(const std::vector<LegSpec>& legs) {
  std::set<std::string> seen;
  for (const auto& leg : legs) {
    if (leg.dim < 1) {
      throw std::invalid_argument("leg '" + leg.label +
                                  "' has non-positive dimension");
    }
    if (!seen.insert(leg.label).second) {
      throw std::invalid_argument("duplicate leg label '" + leg.label + "'");
    }
  }
}

int total_dim(const std::vector<LegSpec>& legs) {
  long long d = 1;
  for (const auto& leg : legs) d *= leg.dim;
  if (d > (1 << 20)) {
    throw std::invalid_argument("composite dimension too large");
  }
  return static_cast<int>(d);
}

// Strides for row-major composite indexing, first leg most significant.
std::vector<int> strides(const std::vector<LegSpec>& legs) {
  std::vector<int> s(legs.size());
  int acc = 1;
  for (int i = static_cast<int>(legs.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= legs[i].dim;
  }
  return s;
}

// Flat offsets of every multi-index over the legs at `positions`, all other
// digits zero. Iterates the selected digits in row-major order.
std::vector<int> subspace_offsets(const std::vector<LegSpec>& legs,
                                  const std::vector<int>& positions) {
  const auto str = strides(legs);
  std::vector<int> offsets{0};
  for (int pos : positions) {
    std::vector<int> next;
    next.reserve(offsets.size() * legs[pos].dim);
    for (int off : offsets) {
      for (int digit = 0; digit < legs[pos].dim; ++digit) {
        next.push_back(off + digit * str[pos]);
      }
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<int> positions_of(const MultiLegMatrix& m,
                              const std::vector<std::string>& labels) {
  std::vector<int> pos;
  pos.reserve(labels.size());
  for (const auto& label : labels) pos.push_back(m.leg_index(label));
  return pos;
}

}  // namespace

bool operator==(const LegSpec& a, const LegSpec& b) {
  return a.label == b.label && a.dim == b.dim;
}

MultiLegMatrix::MultiLegMatrix(Matrix entries, std::vector<LegSpec> legs)
    : entries_(std::move(entries)), legs_(std::move(legs)) {
  check_unique_labels(legs_);
  const int d = total_dim(legs_);
  if (entries_.rows() != d || entries_.cols() != d) {
    throw std::invalid_argument(
        "matrix size does not match the product of leg dimensions");
  }
}

MultiLegMatrix MultiLegMatrix::scalar(Complex value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return MultiLegMatrix(std::move(m), {});
}

MultiLegMatrix MultiLegMatrix::identity(std::vector<LegSpec> legs) {
  const int d = total_dim(legs);
  return MultiLegMatrix(Matrix::Identity(d, d), std::move(legs));
}

bool MultiLegMatrix::has_leg(const std::string& label) const {
  for (const auto& leg : legs_) {
    if (leg.label == label) return true;
  }
  return false;
}

int MultiLegMatrix::leg_index(const std::string& label) const {
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    if (legs_[i].label == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown leg label '" + label + "'");
}

int MultiLegMatrix::leg_dim(const std::string& label) const {
  return legs_[leg_index(label)].dim;
}

double max_abs_diff(const MultiLegMatrix& a, const MultiLegMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  }
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

MultiLegMatrix tensor_product(const MultiLegMatrix& a,
                              const MultiLegMatrix& b) {
  for (const auto& leg : b.legs()) {
    if (a.has_leg(leg.label)) {
      throw std::invalid_argument("tensor_product: duplicate leg label '" +
                                  leg.label + "'");
    }
  }
  const int da = a.dim();
  const int db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
    }
  }
  std::vector<LegSpec> legs = a.legs();
  legs.insert(legs.end(), b.legs().begin(), b.legs().end());
  return MultiLegMatrix(std::move(out), std::move(legs));
}

MultiLegMatrix partial_trace(const MultiLegMatrix& m,
                             const std::vector<std::string>& over) {
  const auto traced_pos = positions_of(m, over);
  std::vector<int> kept_pos;
  std::vector<LegSpec> kept_legs;
  for (int i = 0; i < m.n_legs(); ++i) {
    if (std::find(traced_pos.begin(), traced_pos.end(), i) ==
        traced_pos.end()) {
      kept_pos.push_back(i);
      kept_legs.push_back(m.legs()[i]);
    }
  }
  const auto kept_off = subspace_offsets(m.legs(), kept_pos);
  const auto traced_off = subspace_offsets(m.legs(), traced_pos);
  const int dk = static_cast<int>(kept_off.size());

  Matrix out = Matrix::Zero(dk, dk);
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      Complex sum = 0;
      for (int s : traced_off) {
        sum += m.entries()(kept_off[r] + s, kept_off[c] + s);
      }
      out(r, c) = sum;
    }
  }
  return MultiLegMatrix(std::move(out), std::move(kept_legs));
}

MultiLegMatrix partial_transpose(const MultiLegMatrix& m,
                                 const std::vector<std::string>& over) {
  const auto t_pos = positions_of(m, over);
  std::vector<int> kept_pos;
  for (int i = 0; i < m.n_legs(); ++i) {
    if (std::find(t_pos.begin(), t_pos.end(), i) == t_pos.end()) {
      kept_pos.push_back(i);
    }
  }
  const auto t_off = subspace_offsets(m.legs(), t_pos);
  const auto k_off = subspace_offsets(m.legs(), kept_pos);
  const int dt = static_cast<int>(t_off.size());
  const int dk = static_cast<int>(k_off.size());

  Matrix out(m.dim(), m.dim());
  for (int tr = 0; tr < dt; ++tr) {
    for (int tc = 0; tc < dt; ++tc) {
      for (int kr = 0; kr < dk; ++kr) {
        for (int kc = 0; kc < dk; ++kc) {
          out(t_off[tc] + k_off[kr], t_off[tr] + k_off[kc]) =
              m.entries()(t_off[tr] + k_off[kr], t_off[tc] + k_off[kc]);
        }
      }
    }
  }
  return MultiLegMatrix(std::move(out), m.legs());
}

MultiLegMatrix permute_legs(const MultiLegMatrix& m,
                            const std::vector<std::string>& order) {
  if (static_cast<int>(order.size()) != m.n_legs()) {
    throw std::invalid_argument("permute_legs: order must list every leg");
  }
  std::vector<int> old_pos = positions_of(m, order);
  {
    std::set<int> uniq(old_pos.begin(), old_pos.end());
    if (static_cast<int>(uniq.size()) != m.n_legs()) {
      throw std::invalid_argument("permute_legs: order repeats a leg");
    }
  }
  std::vector<LegSpec> new_legs;
  new_legs.reserve(order.size());
  for (int p : old_pos) new_legs.push_back(m.legs()[p]);

  // Map each old flat index to its new flat index.
  const auto old_str = strides(m.legs());
  const auto new_str = strides(new_legs);
  const int d = m.dim();
  std::vector<int> map(d);
  for (int idx = 0; idx < d; ++idx) {
    int rem = idx;
    std::vector<int> digits(m.n_legs());
    for (int i = 0; i < m.n_legs(); ++i) {
      digits[i] = rem / old_str[i];
      rem %= old_str[i];
    }
    int out = 0;
    for (std::size_t i = 0; i < old_pos.size(); ++i) {
      out += digits[old_pos[i]] * new_str[i];
    }
    map[idx] = out;
  }

  Matrix out(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      out(map[r], map[c]) = m.entries()(r, c);
    }
  }
  return MultiLegMatrix(std::move(out), std::move(new_legs));
}

MultiLegMatrix relabel(
    const MultiLegMatrix& m,
    const std::vector<std::pair<std::string, std::string>>& renames) {
  std::vector<LegSpec> legs = m.legs();
  for (const auto& [from, to] : renames) {
    legs[m.leg_index(from)].label = to;
  }
  return MultiLegMatrix(m.entries(), std::move(legs));
}

MultiLegMatrix merge_legs(const MultiLegMatrix& m, const std::string& first,
                          int count, const std::string& merged_label) {
  const int pos = m.leg_index(first);
  if (count < 1 || pos + count > m.n_legs()) {
    throw std::invalid_argument("merge_legs: range out of bounds");
  }
  int dim = 1;
  for (int i = 0; i < count; ++i) dim *= m.legs()[pos + i].dim;
  std::vector<LegSpec> legs(m.legs().begin(), m.legs().begin() + pos);
  legs.push_back({merged_label, dim});
  legs.insert(legs.end(), m.legs().begin() + pos + count, m.legs().end());
  return MultiLegMatrix(m.entries(), std::move(legs));
}

MultiLegMatrix split_leg(const MultiLegMatrix& m, const std::string& label,
                         int dim_first, const std::string& first_label,
                         const std::string& second_label) {
  const int pos = m.leg_index(label);
  const int d = m.legs()[pos].dim;
  if (dim_first < 1 || d % dim_first != 0) {
    throw std::invalid_argument("split_leg: dimension does not divide");
  }
  std::vector<LegSpec> legs(m.legs().begin(), m.legs().begin() + pos);
  legs.push_back({first_label, dim_first});
  legs.push_back({second_label, d / dim_first});
  legs.insert(legs.end(), m.legs().begin() + pos + 1, m.legs().end());
  return MultiLegMatrix(m.entries(), std::move(legs));
}

EigResult herm_eig(const Matrix& m) {
  const double herm_defect = (m - m.adjoint()).norm();
  const double tol = kHermTolScale * std::max(1.0, m.norm());
  if (herm_defect > tol) {
    throw std::invalid_argument("herm_eig: matrix is not Hermitian (defect " +
                                std::to_string(herm_defect) + ")");
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigendecomposition failed");
  }
  // Eigen sorts ascending; flip to descending.
  const int d = static_cast<int>(sym.rows());
  EigResult res;
  res.values = solver.eigenvalues().reverse();
  res.vectors = Matrix(d, d);
  for (int i = 0; i < d; ++i) {
    res.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return res;
}

EigResult herm_eig(const MultiLegMatrix& m) { return herm_eig(m.entries()); }

double min_eigenvalue(const MultiLegMatrix& m) {
  const Matrix sym = 0.5 * (m.entries() + m.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  return solver.eigenvalues().minCoeff();
}

MultiLegMatrix max_entangled(int dim, const std::string& leg_a,
                             const std::string& leg_b) {
  if (dim < 1) throw std::invalid_argument("max_entangled: dim must be >= 1");
  const int d2 = dim * dim;
  Matrix out = Matrix::Zero(d2, d2);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out(i * dim + i, j * dim + j) = 1.0 / dim;
    }
  }
  return MultiLegMatrix(std::move(out), {{leg_a, dim}, {leg_b, dim}});
}

MultiLegMatrix link_product(const MultiLegMatrix& a, const MultiLegMatrix& b) {
  std::vector<std::string> shared;
  double norm = 1.0;
  for (const auto& leg : a.legs()) {
    if (b.has_leg(leg.label)) {
      if (b.leg_dim(leg.label) != leg.dim) {
        throw std::invalid_argument("link_product: dimension mismatch on '" +
                                    leg.label + "'");
      }
      shared.push_back(leg.label);
      norm *= leg.dim;
    }
  }
  if (shared.empty()) return tensor_product(a, b);

  // Reorder so the contraction reduces to one GEMM: with a as [ext_a, shared]
  // and b as [shared, ext_b], the link product
  //   r_{(x r),(x' r')} = norm * sum_{s, s''} a_{(x s''),(x' s)} b_{(s'' r),(s r')}
  // is a matrix product of the reshaped factors. This realizes
  // norm * tr_shared[a^{T_shared} b] on the union space without embedding.
  std::vector<std::string> a_order, b_order;
  std::vector<LegSpec> ext_a, ext_b;
  for (const auto& leg : a.legs()) {
    if (std::find(shared.begin(), shared.end(), leg.label) == shared.end()) {
      a_order.push_back(leg.label);
      ext_a.push_back(leg);
    }
  }
  for (const auto& label : shared) a_order.push_back(label);
  b_order = shared;
  for (const auto& leg : b.legs()) {
    if (std::find(shared.begin(), shared.end(), leg.label) == shared.end()) {
      b_order.push_back(leg.label);
      ext_b.push_back(leg);
    }
  }
  const MultiLegMatrix ap = permute_legs(a, a_order);
  const MultiLegMatrix bp = permute_legs(b, b_order);

  int ds = 1;
  for (const auto& label : shared) ds *= a.leg_dim(label);
  const int dx = ap.dim() / ds;
  const int dr = bp.dim() / ds;

  Matrix a_resh(dx * dx, ds * ds);
  for (int x = 0; x < dx; ++x) {
    for (int xp = 0; xp < dx; ++xp) {
      for (int s2 = 0; s2 < ds; ++s2) {
        for (int s = 0; s < ds; ++s) {
          a_resh(x * dx + xp, s2 * ds + s) =
              ap.entries()(x * ds + s2, xp * ds + s);
        }
      }
    }
  }
  Matrix b_resh(ds * ds, dr * dr);
  for (int s2 = 0; s2 < ds; ++s2) {
    for (int s = 0; s < ds; ++s) {
      for (int r = 0; r < dr; ++r) {
        for (int rp = 0; rp < dr; ++rp) {
          b_resh(s2 * ds + s, r * dr + rp) =
              bp.entries()(s2 * dr + r, s * dr + rp);
        }
      }
    }
  }
  const Matrix prod = a_resh * b_resh;

  Matrix out(dx * dr, dx * dr);
  for (int x = 0; x < dx; ++x) {
    for (int xp = 0; xp < dx; ++xp) {
      for (int r = 0; r < dr; ++r) {
        for (int rp = 0; rp < dr; ++rp) {
          out(x * dr + r, xp * dr + rp) = norm * prod(x * dx + xp, r * dr + rp);
        }
      }
    }
  }
  std::vector<LegSpec> legs = std::move(ext_a);
  legs.insert(legs.end(), ext_b.begin(), ext_b.end());
  return MultiLegMatrix(std::move(out), std::move(legs));
}

}  // namespace qcomb
