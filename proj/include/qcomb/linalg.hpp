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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcomb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Hermiticity acceptance scale: a matrix is considered Hermitian when
// ||m - m^dag||_F <= kHermTolScale * max(1, ||m||_F).
inline constexpr double kHermTolScale = 1e-9;

// Eigenvalues below this cutoff are treated as zero for support decisions
// and logarithm evaluation.
inline constexpr double kEigCutoff = 1e-12;

//=============================================================================
// Multi-leg matrices
//=============================================================================

// One tensor factor of a composite Hilbert space.
struct LegSpec {
  std::string label;
  int dim = 0;
};

bool operator==(const LegSpec& a, const LegSpec& b);

// A dense complex matrix on a tensor product of labelled legs.
//
// The flat row/column indices use row-major composite indexing with the
// first leg most significant: for legs of dimension d0, d1, ..., the
// composite index of digits (i0, i1, ...) is ((i0*d1 + i1)*d2 + i2)...
// The leg order is part of the value; operations that reorder legs reshuffle
// the entries accordingly.
class MultiLegMatrix {
 public:
  MultiLegMatrix() = default;
  MultiLegMatrix(Matrix entries, std::vector<LegSpec> legs);

  // 1x1 matrix on zero legs.
  static MultiLegMatrix scalar(Complex value);
  static MultiLegMatrix identity(std::vector<LegSpec> legs);

  const Matrix& entries() const { return entries_; }
  const std::vector<LegSpec>& legs() const { return legs_; }

  // Total dimension (product of leg dims).
  int dim() const { return static_cast<int>(entries_.rows()); }
  int n_legs() const { return static_cast<int>(legs_.size()); }

  bool has_leg(const std::string& label) const;
  // Position of a leg in the leg list; throws std::invalid_argument if absent.
  int leg_index(const std::string& label) const;
  int leg_dim(const std::string& label) const;

  Complex trace() const { return entries_.trace(); }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  Matrix entries_;
  std::vector<LegSpec> legs_;
};

// Largest absolute entry difference; throws if shapes differ.
double max_abs_diff(const MultiLegMatrix& a, const MultiLegMatrix& b);

//=============================================================================
// Operations
//=============================================================================

// Kronecker product; result carries the legs of `a` followed by those of `b`.
// Label sets must be disjoint.
MultiLegMatrix tensor_product(const MultiLegMatrix& a, const MultiLegMatrix& b);

// Trace out the legs in `over` (which must all exist). The remaining legs
// keep their relative order.
MultiLegMatrix partial_trace(const MultiLegMatrix& m,
                             const std::vector<std::string>& over);

// Transpose the row/column indices of the legs in `over` only. Involutive.
MultiLegMatrix partial_transpose(const MultiLegMatrix& m,
                                 const std::vector<std::string>& over);

// Reorder the legs to `order` (a permutation of the current labels),
// reshuffling entries to keep the represented operator fixed.
MultiLegMatrix permute_legs(const MultiLegMatrix& m,
                            const std::vector<std::string>& order);

// Rename legs via old->new pairs. New labels must keep the set duplicate-free.
MultiLegMatrix relabel(const MultiLegMatrix& m,
                       const std::vector<std::pair<std::string, std::string>>&
                           renames);

// Fuse `count` adjacent legs starting at `first` into one leg of product
// dimension. Entries are unchanged (the index convention makes fusion a
// relabelling).
MultiLegMatrix merge_legs(const MultiLegMatrix& m, const std::string& first,
                          int count, const std::string& merged_label);

// Inverse of merge_legs for one leg split into two.
MultiLegMatrix split_leg(const MultiLegMatrix& m, const std::string& label,
                         int dim_first, const std::string& first_label,
                         const std::string& second_label);

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
struct EigResult {
  RealVector values;  // descending
  Matrix vectors;     // columns, matching order
};

// Rejects matrices whose anti-Hermitian part exceeds the acceptance scale;
// otherwise symmetrizes (m + m^dag)/2 before decomposing.
EigResult herm_eig(const MultiLegMatrix& m);
EigResult herm_eig(const Matrix& m);

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const MultiLegMatrix& m);

// Unit-trace projector onto (1/sqrt(dim)) sum_i |ii>, on legs (legA, legB).
MultiLegMatrix max_entangled(int dim, const std::string& leg_a,
                             const std::string& leg_b);

//=============================================================================
// Link product
//=============================================================================

// Contraction of two multi-leg matrices over their common labels:
//
//   (prod of shared dims) * tr_shared[ a^{T_shared} b ]
//
// with both factors embedded on the union space. Common labels must agree in
// dimension. The result carries the non-shared legs of `a` followed by those
// of `b`. The partial transpose acts on the shared legs of `a`.
MultiLegMatrix link_product(const MultiLegMatrix& a, const MultiLegMatrix& b);

}  // namespace qcomb
