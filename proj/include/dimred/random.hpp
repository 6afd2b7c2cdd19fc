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

#pragma once

// Seeded random instances: Ginibre matrices, Haar unitaries, density
// operators, complete POVMs and projectors. Same seed, same instance.

#include "dimred/linalg.hpp"
#include "dimred/quantum.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace dimred {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Entries i.i.d. standard complex Gaussian.
inline ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// R's diagonal absorbed into Q.
inline ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

inline Eigen::Index uniform_index(Eigen::Index lo, Eigen::Index hi, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> dist(lo, hi);
  return dist(rng);
}

inline double uniform_real(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

/// Normalized G G^dagger with G a dim x rank Ginibre matrix.
inline DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) throw DomainError("random_density: need 1 <= rank <= dim");
  const ComplexMatrix g = random_ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= real_trace(rho);
  rho = 0.5 * (rho + rho.adjoint());
  return DensityOperator(std::move(rho));
}

inline DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

/// Random PSD matrix of the given rank with unit spectral norm.
inline ComplexMatrix random_psd(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (dim < 1 || rank < 0 || rank > dim) throw DomainError("random_psd: need 0 <= rank <= dim");
  if (rank == 0) return ComplexMatrix::Zero(dim, dim);
  const ComplexMatrix g = random_ginibre(dim, rank, rng);
  ComplexMatrix p = g * g.adjoint();
  p /= spectral_norm(p);
  return 0.5 * (p + p.adjoint());
}

/// V diag(u) V^dagger with u uniform in [0, 1] and V Haar, so 0 <= P <= 1.
inline ComplexMatrix random_povm_element(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix v = random_unitary(dim, rng);
  RealVector u(dim);
  for (Eigen::Index i = 0; i < dim; ++i) u(i) = uniform_real(0.0, 1.0, rng);
  ComplexMatrix p = v * u.asDiagonal() * v.adjoint();
  return 0.5 * (p + p.adjoint());
}

/// Complete POVM: P_k = S^{-1/2} M_k M_k^dagger S^{-1/2}, S = sum_k M_k M_k^dagger.
/// Each M_k is dim x w_k Ginibre; `element_rank` = 0 draws w_k uniformly in
/// [1, dim], widened if needed so that S has full rank.
inline Povm random_povm(Eigen::Index dim, std::size_t n_elements, std::size_t z_size, std::size_t c_size,
                        Rng& rng, Eigen::Index element_rank = 0) {
  if (dim < 1) throw DomainError("random_povm: dimension must be positive");
  if (n_elements < 1 || n_elements != z_size * c_size)
    throw DomainError("random_povm: n_elements must equal z_size * c_size >= 1");
  if (element_rank < 0 || element_rank > dim) throw DomainError("random_povm: element_rank out of range");

  std::vector<Eigen::Index> widths(n_elements);
  Eigen::Index total = 0;
  for (auto& w : widths) {
    w = element_rank > 0 ? element_rank : uniform_index(1, dim, rng);
    total += w;
  }
  for (std::size_t i = 0; total < dim; i = (i + 1) % n_elements) {
    if (widths[i] < dim) {
      ++widths[i];
      ++total;
    }
  }

  std::vector<ComplexMatrix> raw;
  raw.reserve(n_elements);
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index w : widths) {
    const ComplexMatrix m = random_ginibre(dim, w, rng);
    raw.push_back(m * m.adjoint());
    s += raw.back();
  }
  const ComplexMatrix s_inv_root = psd_inverse_sqrt(0.5 * (s + s.adjoint()));

  std::vector<Povm::Element> elements;
  elements.reserve(n_elements);
  for (std::size_t k = 0; k < n_elements; ++k) {
    ComplexMatrix p = s_inv_root * raw[k] * s_inv_root;
    p = 0.5 * (p + p.adjoint());
    elements.push_back({KeyLabel{k % z_size, k / z_size}, std::move(p)});
  }
  return Povm(std::move(elements), z_size, c_size);
}

inline Povm random_povm(Eigen::Index dim, std::size_t n_elements, std::size_t z_size, std::size_t c_size,
                        std::uint64_t seed, Eigen::Index element_rank = 0) {
  Rng rng(seed);
  return random_povm(dim, n_elements, z_size, c_size, rng, element_rank);
}

/// Projector onto the span of the first `rank` columns of a Haar unitary.
inline Projector random_projector(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (dim < 1 || rank < 0 || rank > dim) throw DomainError("random_projector: need 0 <= rank <= dim");
  const ComplexMatrix u = random_unitary(dim, rng);
  return Projector::from_basis(u.leftCols(rank));
}

inline Projector random_projector(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_projector(dim, rank, rng);
}

}  // namespace dimred
