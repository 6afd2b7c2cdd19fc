// Copyright 2026 The dimred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dimred/correction.hpp"
#include "dimred/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dimred {
namespace {

ComplexMatrix plus_state() { return ComplexMatrix::Constant(2, 2, 0.5); }
ComplexMatrix minus_state() {
  ComplexMatrix m(2, 2);
  m << 0.5, -0.5, -0.5, 0.5;
  return m;
}

// Coordinate projector onto the first `rank` of `dim` basis vectors.
Projector leading(Eigen::Index dim, Eigen::Index rank) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(rank));
  for (Eigen::Index i = 0; i < rank; ++i) idx[static_cast<std::size_t>(i)] = i;
  return Projector::from_indices(dim, idx);
}

// POVM whose elements all commute with `pi`.
Povm block_diagonal_povm(const Projector& pi, Rng& rng) {
  const Povm base = random_povm(pi.dim(), 4, 2, 2, rng);
  std::vector<Povm::Element> els;
  for (const auto& el : base.elements()) {
    const ComplexMatrix p = pi.matrix() * el.matrix * pi.matrix() + pi.complement() * el.matrix * pi.complement();
    els.push_back({el.label, 0.5 * (p + p.adjoint())});
  }
  return Povm(els, 2, 2);
}

TEST(BlockDecompose, Examples) {
  Rng rng(1);
  const Projector pi = leading(4, 2);
  const Povm diag = block_diagonal_povm(pi, rng);
  EXPECT_LT(max_abs(block_decompose(diag.elements()[0].matrix, pi).b_block), 1e-15);

  const ComplexMatrix p = random_psd(3, 2, rng);
  const BlockDecomposition full = block_decompose(p, leading(3, 3));
  EXPECT_LT(max_abs(full.a_block - p), 1e-15);
  EXPECT_EQ(full.b_block.cols(), 0);
  EXPECT_EQ(full.d_block.rows(), 0);
  EXPECT_EQ(contraction_norm(full), 0.0);
}

TEST(BlockDecompose, ReembeddingOracle) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix p = random_psd(6, uniform_index(1, 6, rng), rng);
    const Projector pi = random_projector(6, 3, rng);
    const BlockDecomposition bd = block_decompose(p, pi);
    EXPECT_LT(max_abs(bd.reconstruct() - p), 1e-12);
    EXPECT_LT(max_abs(bd.off_diag - (pi.matrix() * p * pi.complement() + pi.complement() * p * pi.matrix())),
              1e-12);
    EXPECT_TRUE(is_psd(bd.a_block));
    EXPECT_TRUE(is_psd(bd.d_block));
  }
}

TEST(BlockDecompose, Errors) {
  EXPECT_THROW(block_decompose(ComplexMatrix::Identity(3, 3), leading(2, 1)), DomainError);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_THROW(block_decompose(neg, leading(2, 1)), DomainError);
}

TEST(ContractionNorm, PlusStateAgainstComputationalProjector) {
  // A = B = D = 1/2, K = (1/sqrt(1/2)) (1/2) (1/sqrt(1/2)) = 1.
  EXPECT_NEAR(contraction_norm(block_decompose(plus_state(), leading(2, 1))), 1.0, 1e-14);
}

TEST(ContractionNorm, RandomPsdSweep) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index d = uniform_index(2, 10, rng);
    const ComplexMatrix p = random_psd(d, uniform_index(1, d, rng), rng) * uniform_real(0.01, 100.0, rng);
    const Projector pi = random_projector(d, uniform_index(1, d - 1, rng), rng);
    const double k = contraction_norm(block_decompose(p, pi));
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, 1.0 + 1e-9);
  }
}

TEST(ComputeC, Examples) {
  Rng rng(4);
  const Projector pi = leading(5, 2);
  EXPECT_EQ(compute_c(block_diagonal_povm(pi, rng), pi).c, 0.0);

  const Povm pm({{{0, 0}, plus_state()}, {{1, 0}, minus_state()}}, 2, 1);
  const ContractionReport r = compute_c(pm, leading(2, 1));
  ASSERT_EQ(r.per_element.size(), 2u);
  EXPECT_NEAR(r.per_element[0].k_norm, 1.0, 1e-14);
  EXPECT_NEAR(r.per_element[1].k_norm, 1.0, 1e-14);
  EXPECT_NEAR(r.c, 1.0, 1e-14);

  const Povm big = random_povm(8, 4, 2, 2, rng);
  const ContractionReport rb = compute_c(big, random_projector(8, 4, rng));
  double mx = 0.0;
  for (const auto& e : rb.per_element) mx = std::max(mx, e.k_norm);
  EXPECT_EQ(rb.c, mx);
  EXPECT_GE(rb.c, 0.0);
  EXPECT_LE(rb.c, 1.0 + 1e-9);

  EXPECT_THROW(compute_c(big, leading(4, 2)), DomainError);
}

TEST(ComputeC, ScaleInvariance) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = uniform_index(2, 7, rng);
    const Povm povm = random_povm(d, 4, 2, 2, rng);
    const Projector pi = random_projector(d, uniform_index(1, d - 1, rng), rng);
    const ContractionReport base = compute_c(povm, pi);
    std::vector<Povm::Element> scaled;
    // Scaled elements need not sum to <= 1, so compare per element.
    for (const auto& el : povm.elements()) {
      const double s = uniform_real(0.1, 10.0, rng);
      scaled.push_back({el.label, s * el.matrix});
    }
    for (std::size_t k = 0; k < scaled.size(); ++k) {
      const double ks = contraction_norm(block_decompose(scaled[k].matrix, pi));
      EXPECT_NEAR(ks, base.per_element[k].k_norm, 1e-9);
    }
  }
}

TEST(ComputeC, UnitaryInvariance) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = uniform_index(2, 7, rng);
    const Povm povm = random_povm(d, 2, 2, 1, rng);
    const Projector pi = random_projector(d, uniform_index(1, d - 1, rng), rng);
    const ComplexMatrix u = random_unitary(d, rng);
    std::vector<Povm::Element> rotated;
    for (const auto& el : povm.elements()) {
      ComplexMatrix p = u * el.matrix * u.adjoint();
      rotated.push_back({el.label, 0.5 * (p + p.adjoint())});
    }
    const Projector rpi = Projector::from_basis(u * pi.range_basis());
    EXPECT_NEAR(compute_c(Povm(rotated, 2, 1), rpi).c, compute_c(povm, pi).c, 1e-9);
  }
}

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  // mpmath at 40 digits: 0.81127812445913286...
  EXPECT_NEAR(binary_entropy(0.25), 0.811278124459133, 1e-12);
  EXPECT_THROW(binary_entropy(-0.1), DomainError);
  EXPECT_THROW(binary_entropy(1.1), DomainError);
}

TEST(Delta, Values) {
  EXPECT_EQ(delta({0.37, 0.0, 4}), 0.0);
  EXPECT_EQ(delta({0.0, 0.8, 16}), 0.0);
  // mpmath at 40 digits: 0.68344668561366463...
  EXPECT_NEAR(delta({0.01, 1.0, 4}), 0.683446685613665, 1e-12);
  EXPECT_THROW(delta({1.5, 0.5, 2}), DomainError);
  EXPECT_THROW(delta({0.5, -0.1, 2}), DomainError);
  EXPECT_THROW(delta({0.5, 0.5, 0}), DomainError);
}

TEST(Delta, MonotoneInEachArgument) {
  for (int ci = 0; ci <= 20; ++ci)
    for (int wi = 0; wi < 1000; ++wi) {
      const double c = ci / 20.0, w = wi * 1e-3;
      EXPECT_GE(delta({(wi + 1) * 1e-3, c, 4}) + 1e-12, delta({w, c, 4}));
      EXPECT_GE(delta({w, std::min(ci + 1, 20) / 20.0, 4}) + 1e-12, delta({w, c, 4}));
      EXPECT_GE(delta({w, c, 5}) + 1e-12, delta({w, c, 4}));
    }
}

TEST(KeyrateLowerBound, Values) {
  EXPECT_EQ(keyrate_lower_bound(0.42, {0.3, 0.0, 2}), 0.42);
  EXPECT_NEAR(keyrate_lower_bound(1.0, {0.01, 1.0, 4}), 0.316553314386335, 1e-12);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const double v = uniform_real(-1.0, 1.0, rng);
    EXPECT_LE(keyrate_lower_bound(v, {uniform_real(0, 1, rng), uniform_real(0, 1, rng), 3}), v);
  }
}

TEST(DeltaCurve, ShapeAndMonotonicity) {
  const auto grid = uniform_grid(0.2, 200);
  ASSERT_EQ(grid.size(), 201u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 0.2);
  EXPECT_THROW(uniform_grid(0.2, 0), DomainError);

  for (const auto& row : delta_curve({0.0}, 4, grid)) EXPECT_EQ(row.delta, 0.0);

  const auto rows = delta_curve({1.0, 0.0, 0.5}, 4, grid);
  ASSERT_EQ(rows.size(), 3u * 201u);
  EXPECT_EQ(rows.front().c, 0.0);
  EXPECT_EQ(rows.back().c, 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].c != rows[i - 1].c) continue;
    EXPECT_GT(rows[i].w, rows[i - 1].w);
    EXPECT_GE(rows[i].delta + 1e-12, rows[i - 1].delta);
  }
  for (std::size_t j = 0; j < 201; ++j) {
    EXPECT_LE(rows[j].delta, rows[201 + j].delta + 1e-12);
    EXPECT_LE(rows[201 + j].delta, rows[402 + j].delta + 1e-12);
  }
}

TEST(EstimateCNested, FullSpaceMatchesComputeC) {
  Rng rng(8);
  const Povm povm = random_povm(10, 4, 2, 2, rng);
  const Projector pi = leading(10, 3);
  const NestedEstimate est = estimate_c_nested(povm, pi, {10}, {}, 1e-6);
  ASSERT_EQ(est.estimates.size(), 1u);
  EXPECT_EQ(est.estimates[0], compute_c(povm, pi).c);
  EXPECT_FALSE(est.converged);
}

TEST(EstimateCNested, BlockDiagonalIsZero) {
  Rng rng(9);
  const Projector pi = leading(8, 2);
  const NestedEstimate est = estimate_c_nested(block_diagonal_povm(pi, rng), pi, {3, 5, 8});
  for (double e : est.estimates) EXPECT_EQ(e, 0.0);
  EXPECT_TRUE(est.converged);
}

TEST(EstimateCNested, Dim40Sequence) {
  Rng rng(10);
  const Povm povm = random_povm(40, 4, 2, 2, rng);
  const Projector pi = leading(40, 4);
  const double tol = 1e-3;
  const NestedEstimate est = estimate_c_nested(povm, pi, {8, 16, 24, 32, 40}, {}, tol);
  ASSERT_EQ(est.estimates.size(), 5u);
  EXPECT_NEAR(est.estimates.back(), compute_c(povm, pi).c, 1e-9);
  EXPECT_EQ(est.converged, std::abs(est.estimates[4] - est.estimates[3]) < tol);
  for (double e : est.estimates) EXPECT_LE(e, 1.0 + 1e-9);
}

TEST(EstimateCNested, Errors) {
  Rng rng(11);
  const Povm povm = random_povm(6, 2, 2, 1, rng);
  EXPECT_THROW(estimate_c_nested(povm, leading(6, 3), {2, 6}), DomainError);  // below rank
  EXPECT_THROW(estimate_c_nested(povm, leading(6, 3), {4, 4}), DomainError);  // not increasing
  EXPECT_THROW(estimate_c_nested(povm, leading(6, 3), {7}), DomainError);     // above ambient
  EXPECT_THROW(estimate_c_nested(povm, Projector::from_indices(6, {5}), {3, 6}), DomainError);  // not contained
  EXPECT_THROW(estimate_c_nested(povm, leading(6, 3), {}), DomainError);
}

}  // namespace
}  // namespace dimred
