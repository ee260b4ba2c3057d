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

#include "qcomb/linalg.hpp"
#include "qcomb/random.hpp"
#include "qcomb/rng.hpp"

#include "oracles.hpp"

using namespace qcomb;

namespace {

MultiLegMatrix random_mlm(Rng& rng, const std::vector<LegSpec>& legs) {
  int d = 1;
  for (const auto& leg : legs) d *= leg.dim;
  return MultiLegMatrix(ginibre(rng, d, d), legs);
}

std::vector<oracle::Leg> to_oracle(const std::vector<LegSpec>& legs) {
  std::vector<oracle::Leg> out;
  for (const auto& leg : legs) out.push_back({leg.label, leg.dim});
  return out;
}

}  // namespace

TEST_CASE("tensor product identity case") {
  const MultiLegMatrix half(Matrix::Identity(2, 2) / 2.0, {{"a", 2}});
  const MultiLegMatrix quarter = tensor_product(
      half, MultiLegMatrix(Matrix::Identity(2, 2) / 2.0, {{"b", 2}}));
  CHECK(max_abs_diff(quarter, MultiLegMatrix(Matrix::Identity(4, 4) / 4.0,
                                             {{"a", 2}, {"b", 2}})) == 0.0);
}

TEST_CASE("tensor product of maximally entangled states is a unit-trace rank-1 projector") {
  const MultiLegMatrix psi2 = max_entangled(2, "a", "b");
  const MultiLegMatrix prod =
      tensor_product(psi2, max_entangled(2, "c", "d"));
  CHECK(prod.dim() == 16);
  CHECK(std::abs(prod.trace() - Complex(1.0)) < 1e-14);
  const EigResult eig = herm_eig(prod);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(eig.values[1]) < 1e-12);
  // projector: squares to itself
  CHECK((prod.entries() * prod.entries() - prod.entries()).norm() < 1e-12);
}

TEST_CASE("tensor product matches the four-nested-loop oracle") {
  Rng rng(41);
  const MultiLegMatrix a = random_mlm(rng, {{"a", 2}});
  const MultiLegMatrix b = random_mlm(rng, {{"b", 3}});
  const MultiLegMatrix prod = tensor_product(a, b);
  const Matrix expected = oracle::kron(a.entries(), b.entries());
  CHECK((prod.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          CHECK(std::abs(prod.entries()(i * 3 + k, j * 3 + l) -
                         a.entries()(i, j) * b.entries()(k, l)) < 1e-14);
        }
      }
    }
  }
}

TEST_CASE("tensor product rejects duplicate labels") {
  Rng rng(1);
  const MultiLegMatrix a = random_mlm(rng, {{"x", 2}});
  CHECK_THROWS_AS(tensor_product(a, a), std::invalid_argument);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  const MultiLegMatrix psi = max_entangled(2, "a", "b");
  const MultiLegMatrix marg = partial_trace(psi, {"b"});
  CHECK(max_abs_diff(marg, MultiLegMatrix(Matrix::Identity(2, 2) / 2.0,
                                          {{"a", 2}})) < 1e-15);
}

TEST_CASE("partial trace over all legs gives the scalar trace") {
  Rng rng(2);
  const MultiLegMatrix m = random_mlm(rng, {{"a", 2}, {"b", 3}});
  const MultiLegMatrix s = partial_trace(m, {"a", "b"});
  CHECK(s.dim() == 1);
  CHECK(std::abs(s.entries()(0, 0) - m.trace()) < 1e-13);
}

TEST_CASE("partial trace matches the index-summation oracle on a (2,2,2) space") {
  Rng rng(3);
  const std::vector<LegSpec> legs{{"p", 2}, {"q", 2}, {"r", 2}};
  const MultiLegMatrix m = random_mlm(rng, legs);
  const MultiLegMatrix traced = partial_trace(m, {"q"});
  const Matrix expected =
      oracle::partial_trace(m.entries(), to_oracle(legs), {"q"});
  CHECK((traced.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace commutes with tensor product") {
  Rng rng(4);
  const MultiLegMatrix a = random_mlm(rng, {{"a", 3}});
  const MultiLegMatrix b = random_mlm(rng, {{"b", 2}});
  const MultiLegMatrix left = partial_trace(tensor_product(a, b), {"b"});
  const Matrix expected = a.entries() * b.trace();
  CHECK((left.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace rejects unknown labels") {
  Rng rng(5);
  const MultiLegMatrix m = random_mlm(rng, {{"a", 2}});
  CHECK_THROWS_AS(partial_trace(m, {"nope"}), std::invalid_argument);
}

TEST_CASE("partial transpose basics") {
  Rng rng(6);
  const std::vector<LegSpec> legs{{"a", 2}, {"b", 2}};
  const MultiLegMatrix m = random_mlm(rng, legs);

  SUBCASE("empty set is the identity") {
    CHECK(max_abs_diff(partial_transpose(m, {}), m) == 0.0);
  }
  SUBCASE("all legs is the full transpose") {
    const MultiLegMatrix t = partial_transpose(m, {"a", "b"});
    CHECK((t.entries() - m.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single leg matches the index-permutation oracle") {
    const MultiLegMatrix t = partial_transpose(m, {"a"});
    const Matrix expected =
        oracle::partial_transpose(m.entries(), to_oracle(legs), {"a"});
    CHECK((t.entries() - expected).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("partial transpose is an involution on every leg subset") {
  Rng rng(7);
  const std::vector<LegSpec> legs{{"a", 2}, {"b", 3}, {"c", 2}};
  const MultiLegMatrix m = random_mlm(rng, legs);
  const std::vector<std::vector<std::string>> subsets{
      {}, {"a"}, {"b"}, {"c"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
      {"a", "b", "c"}};
  for (const auto& subset : subsets) {
    CHECK(max_abs_diff(partial_transpose(partial_transpose(m, subset), subset),
                       m) == 0.0);
  }
}

TEST_CASE("herm_eig on simple states") {
  const EigResult half = herm_eig(
      MultiLegMatrix(Matrix::Identity(2, 2) / 2.0, {{"a", 2}}));
  CHECK(half.values[0] == doctest::Approx(0.5));
  CHECK(half.values[1] == doctest::Approx(0.5));

  const EigResult pure = herm_eig(max_entangled(2, "a", "b"));
  CHECK(pure.values[0] == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(pure.values[i]) < 1e-12);
}

TEST_CASE("herm_eig reconstruction and ordering on random Hermitian input") {
  Rng rng(8);
  const Matrix g = ginibre(rng, 6, 6);
  const Matrix h = 0.5 * (g + g.adjoint());
  const MultiLegMatrix m(h, {{"a", 6}});
  const EigResult eig = herm_eig(m);
  for (int i = 1; i < 6; ++i) CHECK(eig.values[i - 1] >= eig.values[i]);
  Matrix rebuilt = Matrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    rebuilt +=
        eig.values[i] * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  CHECK((rebuilt - h).norm() <= 1e-10 * h.norm());
}

TEST_CASE("herm_eig rejects clearly non-Hermitian matrices") {
  Rng rng(9);
  Matrix g = ginibre(rng, 3, 3);
  g(0, 1) += Complex(0.5, 0.5);
  CHECK_THROWS_AS(herm_eig(MultiLegMatrix(g, {{"a", 3}})),
                  std::invalid_argument);
}

TEST_CASE("eigenvalues of a unit-trace positive matrix sum to one") {
  Rng rng(10);
  const Matrix rho = random_density(rng, 5);
  const EigResult eig = herm_eig(MultiLegMatrix(rho, {{"a", 5}}));
  CHECK(eig.values.minCoeff() >= -1e-10);
  CHECK(eig.values.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("max_entangled") {
  SUBCASE("qubit matrix entries") {
    const MultiLegMatrix psi = max_entangled(2, "a", "b");
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(psi.entries()(i * 2 + i, j * 2 + j) - 0.5) < 1e-15);
      }
    }
    CHECK(std::abs(psi.entries()(1, 2)) == 0.0);
  }
  SUBCASE("dimension one is the scalar 1") {
    const MultiLegMatrix psi = max_entangled(1, "a", "b");
    CHECK(psi.dim() == 1);
    CHECK(psi.entries()(0, 0) == Complex(1.0));
  }
  SUBCASE("qutrit marginals are maximally mixed") {
    const MultiLegMatrix psi = max_entangled(3, "a", "b");
    for (const char* leg : {"a", "b"}) {
      const MultiLegMatrix marg = partial_trace(psi, {leg});
      CHECK((marg.entries() - Matrix::Identity(3, 3) / 3.0)
                .cwiseAbs()
                .maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("permute, merge, and split are consistent") {
  Rng rng(11);
  const std::vector<LegSpec> legs{{"a", 2}, {"b", 3}, {"c", 2}};
  const MultiLegMatrix m = random_mlm(rng, legs);

  const MultiLegMatrix p = permute_legs(m, {"c", "a", "b"});
  CHECK(p.legs()[0].label == "c");
  CHECK(max_abs_diff(permute_legs(p, {"a", "b", "c"}), m) == 0.0);

  const MultiLegMatrix merged = merge_legs(m, "a", 2, "ab");
  CHECK(merged.n_legs() == 2);
  CHECK(merged.leg_dim("ab") == 6);
  const MultiLegMatrix split = split_leg(merged, "ab", 2, "a", "b");
  CHECK(max_abs_diff(split, m) == 0.0);
  CHECK(split.legs() == m.legs());
}

TEST_CASE("permute_legs moves entries consistently with the index convention") {
  Rng rng(12);
  const std::vector<LegSpec> legs{{"a", 2}, {"b", 3}};
  const MultiLegMatrix m = random_mlm(rng, legs);
  const MultiLegMatrix p = permute_legs(m, {"b", "a"});
  for (int ia = 0; ia < 2; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      for (int ja = 0; ja < 2; ++ja) {
        for (int jb = 0; jb < 3; ++jb) {
          CHECK(std::abs(m.entries()(ia * 3 + ib, ja * 3 + jb) -
                         p.entries()(ib * 2 + ia, jb * 2 + ja)) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("link product matches the embedding oracle") {
  Rng rng(13);
  SUBCASE("one shared leg") {
    const std::vector<LegSpec> a_legs{{"x", 2}, {"s", 3}};
    const std::vector<LegSpec> b_legs{{"s", 3}, {"y", 2}};
    const MultiLegMatrix a = random_mlm(rng, a_legs);
    const MultiLegMatrix b = random_mlm(rng, b_legs);
    const MultiLegMatrix linked = link_product(a, b);
    const Matrix expected =
        oracle::link_product(a.entries(), to_oracle(a_legs), b.entries(),
                             to_oracle(b_legs));
    CHECK((linked.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("two shared legs, one survivor each side") {
    const std::vector<LegSpec> a_legs{{"u", 2}, {"s", 2}, {"t", 2}};
    const std::vector<LegSpec> b_legs{{"t", 2}, {"v", 3}, {"s", 2}};
    const MultiLegMatrix a = random_mlm(rng, a_legs);
    const MultiLegMatrix b = random_mlm(rng, b_legs);
    const MultiLegMatrix linked = link_product(a, b);
    const Matrix expected =
        oracle::link_product(a.entries(), to_oracle(a_legs), b.entries(),
                             to_oracle(b_legs));
    CHECK((linked.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(linked.legs()[0].label == "u");
    CHECK(linked.legs()[1].label == "v");
  }
  SUBCASE("full contraction to a scalar") {
    const std::vector<LegSpec> legs{{"s", 2}, {"t", 2}};
    const MultiLegMatrix a = random_mlm(rng, legs);
    const MultiLegMatrix b = random_mlm(rng, legs);
    const MultiLegMatrix linked = link_product(a, b);
    const Matrix expected = oracle::link_product(
        a.entries(), to_oracle(legs), b.entries(), to_oracle(legs));
    CHECK(linked.dim() == 1);
    CHECK(std::abs(linked.entries()(0, 0) - expected(0, 0)) < 1e-12);
  }
}

TEST_CASE("link product is commutative") {
  Rng rng(14);
  const MultiLegMatrix a = random_mlm(rng, {{"x", 2}, {"s", 2}});
  const MultiLegMatrix b = random_mlm(rng, {{"s", 2}, {"y", 3}});
  const MultiLegMatrix ab = link_product(a, b);
  const MultiLegMatrix ba =
      permute_legs(link_product(b, a), {"x", "y"});
  CHECK(max_abs_diff(ab, ba) < 1e-12);
}

TEST_CASE("all contraction primitives agree with oracles across leg shapes") {
  // Dims <= 3 per leg, up to 4 legs, total dimension <= 81.
  Rng rng(15);
  const std::vector<std::vector<int>> shapes{
      {2}, {3}, {2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {3, 3, 3}, {2, 2, 2, 2},
      {3, 3, 3, 3}, {2, 3, 2, 3}};
  for (const auto& shape : shapes) {
    std::vector<LegSpec> legs;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      legs.push_back({"l" + std::to_string(i), shape[i]});
    }
    const MultiLegMatrix m = random_mlm(rng, legs);
    for (std::size_t i = 0; i < shape.size(); ++i) {
      const std::vector<std::string> over{legs[i].label};
      CHECK((partial_trace(m, over).entries() -
             oracle::partial_trace(m.entries(), to_oracle(legs), over))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
      CHECK((partial_transpose(m, over).entries() -
             oracle::partial_transpose(m.entries(), to_oracle(legs), over))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}
