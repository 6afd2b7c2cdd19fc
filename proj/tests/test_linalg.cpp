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

#include "dimred/linalg.hpp"
#include "dimred/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace dimred {
namespace {

ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

TEST(HermitianEig, DiagonalInput) {
  const HermitianEig e = hermitian_eig(diag({3.0, 1.0}));
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 0.0, 1e-15);
}

TEST(HermitianEig, PauliX) {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const HermitianEig e = hermitian_eig(x);
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), -1.0, 1e-15);
}

TEST(HermitianEig, RandomReconstruction) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_hermitian(6, rng);
    const HermitianEig e = hermitian_eig(m);
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(spectral_norm(m - back), 1e-10);
    EXPECT_LT(spectral_norm(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(6, 6)), 1e-12);
    for (Eigen::Index i = 1; i < 6; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(HermitianEig, RejectsBadInput) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), DomainError);
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(hermitian_eig(m), DomainError);
  m(0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(hermitian_eig(m), DomainError);
}

TEST(Svd, ZeroAndShift) {
  EXPECT_EQ(singular_values(ComplexMatrix::Zero(3, 2)).maxCoeff(), 0.0);
  ComplexMatrix m(2, 2);
  m << 0, 2, 0, 0;
  const RealVector s = svd(m).singular_values;
  EXPECT_NEAR(s(0), 2.0, 1e-15);
  EXPECT_NEAR(s(1), 0.0, 1e-15);
}

TEST(Svd, RectangularReconstruction) {
  Rng rng(5);
  const ComplexMatrix m = random_ginibre(5, 3, rng);
  const Svd d = svd(m);
  const ComplexMatrix back = d.u * d.singular_values.cast<Complex>().asDiagonal() * d.v.adjoint();
  EXPECT_LT(max_abs(m - back), 1e-10);
  EXPECT_LT(max_abs(d.u.adjoint() * d.u - ComplexMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(max_abs(d.v.adjoint() * d.v - ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(Norms, SimpleValues) {
  for (Eigen::Index n : {1, 3, 7}) EXPECT_NEAR(spectral_norm(ComplexMatrix::Identity(n, n)), 1.0, 1e-15);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_NEAR(spectral_norm(x), 1.0, 1e-15);
  EXPECT_NEAR(trace_norm(diag({1.0, -2.0})), 3.0, 1e-15);
  EXPECT_EQ(trace_norm(ComplexMatrix::Zero(4, 4)), 0.0);
  EXPECT_EQ(spectral_norm(ComplexMatrix(0, 0)), 0.0);
}

// ||M|| >= ||Mx|| for every unit x, and the best of many random x comes close.
TEST(Norms, SpectralNormRandomVectorOracle) {
  Rng rng(17);
  const ComplexMatrix m = random_ginibre(6, 6, rng);
  const double norm = spectral_norm(m);
  double best = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ComplexVector x = random_ginibre(6, 1, rng).col(0);
    x.normalize();
    const double v = (m * x).norm();
    EXPECT_LE(v, norm + 1e-12);
    best = std::max(best, v);
  }
  // Refine the best direction with power iteration on M^dagger M.
  ComplexVector x = random_ginibre(6, 1, rng).col(0);
  for (int i = 0; i < 500; ++i) x = (m.adjoint() * (m * x)).normalized();
  EXPECT_NEAR((m * x).norm(), norm, 1e-6);
  EXPECT_GT(best, 0.5 * norm);
}

TEST(Norms, TraceNormMatchesEigenvalues) {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_hermitian(6, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    EXPECT_NEAR(trace_norm(m), es.eigenvalues().cwiseAbs().sum(), 1e-10);
  }
}

TEST(Norms, PropertySweep) {
  Rng rng(29);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = uniform_index(1, 8, rng);
    const Eigen::Index r = uniform_index(1, n, rng);
    const ComplexMatrix m = random_ginibre(n, r, rng) * random_ginibre(r, n, rng);
    const double s = spectral_norm(m), tr = trace_norm(m);
    EXPECT_LE(s, tr + 1e-12);
    EXPECT_LE(tr, static_cast<double>(numerical_rank(m, 1e-10)) * s + 1e-9);
    const ComplexMatrix p = random_psd(n, r, rng);
    EXPECT_NEAR(trace_norm(p), real_trace(p), 1e-10);
  }
}

TEST(GeneralizedInverse, SimpleValues) {
  const ComplexMatrix g = generalized_inverse(diag({2.0, 0.0}));
  EXPECT_LT(max_abs(g - diag({0.5, 0.0})), 1e-15);
  EXPECT_LT(max_abs(generalized_inverse(ComplexMatrix::Identity(4, 4)) - ComplexMatrix::Identity(4, 4)), 1e-15);
  EXPECT_EQ(max_abs(generalized_inverse(ComplexMatrix::Zero(3, 3))), 0.0);
}

TEST(GeneralizedInverse, SupportProjectorOracle) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_psd(5, 3, rng);
    // Independent support projector from the top-3 eigenvectors.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const ComplexMatrix v = es.eigenvectors().rightCols(3);
    const ComplexMatrix support = v * v.adjoint();
    const ComplexMatrix g = generalized_inverse(m);
    EXPECT_LT(max_abs(g * m - support), 1e-9);
    EXPECT_LT(max_abs(generalized_inverse(g) - support * m * support), 1e-9);
  }
}

TEST(GeneralizedInverse, RejectsNegative) {
  EXPECT_THROW(generalized_inverse(diag({1.0, -0.5})), DomainError);
  // Within the clip: treated as zero.
  EXPECT_LT(max_abs(generalized_inverse(diag({1.0, -1e-13})) - diag({1.0, 0.0})), 1e-15);
}

TEST(PsdSqrt, SimpleValues) {
  EXPECT_LT(max_abs(psd_sqrt(diag({4.0, 9.0})) - diag({2.0, 3.0})), 1e-14);
  EXPECT_EQ(max_abs(psd_sqrt(ComplexMatrix::Zero(3, 3))), 0.0);
  EXPECT_THROW(psd_sqrt(diag({1.0, -1.0})), DomainError);
}

TEST(PsdSqrt, SquaringOracle) {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_psd(6, uniform_index(1, 6, rng), rng);
    const ComplexMatrix r = psd_sqrt(m);
    EXPECT_LT(max_abs(r * r - m), 1e-9);
    EXPECT_TRUE(is_psd(r));
  }
}

TEST(Decompositions, ResidualsUpToDim64) {
  Rng rng(41);
  for (Eigen::Index n : {2, 16, 64}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const HermitianEig e = hermitian_eig(h);
    EXPECT_LT(spectral_norm(h - from_spectrum(e, e.values)), 1e-9 * spectral_norm(h));
    const ComplexMatrix g = random_ginibre(n, n, rng);
    const Svd d = svd(g);
    EXPECT_LT(spectral_norm(g - d.u * d.singular_values.cast<Complex>().asDiagonal() * d.v.adjoint()),
              1e-9 * spectral_norm(g));
  }
}

TEST(Tolerance, Validation) {
  EXPECT_NO_THROW(Tolerance{}.validate());
  EXPECT_THROW((Tolerance{0.0, 1e-10}.validate()), DomainError);
  EXPECT_THROW((Tolerance{1e-10, 1.0}.validate()), DomainError);
}

}  // namespace
}  // namespace dimred
