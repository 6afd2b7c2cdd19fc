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

// Correction term for projecting a key-rate problem onto a subspace.
//
// Each POVM element P is split into blocks with respect to a projector Pi:
//
//     P = [ A    B ]      A = Pi P Pi,  B = Pi P Pibar,  D = Pibar P Pibar
//         [ B^t  D ]
//
// P >= 0 iff K = sqrt(A)^g B sqrt(D)^g is a contraction. The constant
// c = max_k ||K_k||_inf measures how far the POVM is from commuting with Pi,
// and the correction for weight W = Tr(rho Pibar) is
//
//     Delta(W) = x log2|Z| + (1 + x) h(x / (1 + x)),   x = c sqrt(W).

#include "dimred/linalg.hpp"
#include "dimred/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dimred {

inline constexpr double kContractionSlack = 1e-9;

/// Blocks of a PSD operator compressed to orthonormal bases of range(Pi)
/// and range(Pibar).
struct BlockDecomposition {
  ComplexMatrix a_block;   // rank x rank
  ComplexMatrix b_block;   // rank x (dim - rank)
  ComplexMatrix d_block;   // (dim - rank) x (dim - rank)
  ComplexMatrix off_diag;  // H = Pi P Pibar + Pibar P Pi, full dimension
  ComplexMatrix range_basis;
  ComplexMatrix complement_basis;
  double scale = 0.0;  // spectral norm of the source operator

  /// A + B + B^dagger + D re-embedded in the full space.
  ComplexMatrix reconstruct() const {
    const ComplexMatrix& q1 = range_basis;
    const ComplexMatrix& q2 = complement_basis;
    return q1 * a_block * q1.adjoint() + q1 * b_block * q2.adjoint() +
           q2 * b_block.adjoint() * q1.adjoint() + q2 * d_block * q2.adjoint();
  }
};

inline BlockDecomposition block_decompose(const ComplexMatrix& p, const Projector& pi,
                                          const Tolerance& tol = {}) {
  require_square(p, "block_decompose");
  if (p.rows() != pi.dim()) throw DomainError("block_decompose: dimension mismatch");
  const HermitianEig e = psd_eig(p, tol, 0.0, "block_decompose");

  BlockDecomposition bd;
  bd.range_basis = pi.range_basis();
  bd.complement_basis = pi.complement_basis();
  const ComplexMatrix& q1 = bd.range_basis;
  const ComplexMatrix& q2 = bd.complement_basis;
  bd.a_block = q1.adjoint() * p * q1;
  bd.a_block = 0.5 * (bd.a_block + bd.a_block.adjoint());
  bd.b_block = q1.adjoint() * p * q2;
  bd.d_block = q2.adjoint() * p * q2;
  bd.d_block = 0.5 * (bd.d_block + bd.d_block.adjoint());
  const ComplexMatrix b_full = q1 * bd.b_block * q2.adjoint();
  bd.off_diag = b_full + b_full.adjoint();
  bd.scale = e.values.size() == 0 ? 0.0 : std::max(e.values(0), 0.0);
  return bd;
}

/// ||sqrt(A)^g B sqrt(D)^g||_inf. Supports of A and D are decided relative
/// to the norm of the source operator, so the result is invariant under
/// rescaling P.
inline double contraction_norm(const BlockDecomposition& bd, const Tolerance& tol = {}) {
  if (bd.b_block.size() == 0) return 0.0;
  const ComplexMatrix a_inv_root = psd_inverse_sqrt(bd.a_block, tol, bd.scale);
  const ComplexMatrix d_inv_root = psd_inverse_sqrt(bd.d_block, tol, bd.scale);
  return spectral_norm(a_inv_root * bd.b_block * d_inv_root);
}

struct ElementNorm {
  KeyLabel label;
  double k_norm = 0.0;
};

struct ContractionReport {
  std::vector<ElementNorm> per_element;
  double c = 0.0;
};

inline ContractionReport compute_c(const Povm& povm, const Projector& pi, const Tolerance& tol = {}) {
  if (povm.dim() != pi.dim()) throw DomainError("compute_c: POVM and projector dimensions differ");
  ContractionReport report;
  report.per_element.reserve(povm.size());
  for (const auto& el : povm.elements()) {
    const double k = contraction_norm(block_decompose(el.matrix, pi, tol), tol);
    report.per_element.push_back({el.label, k});
    report.c = std::max(report.c, k);
  }
  return report;
}

/// h(x) = -x log2 x - (1-x) log2(1-x).
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0, 1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

struct CorrectionQuery {
  double weight = 0.0;     // W in [0, 1]
  double c = 0.0;          // in [0, 1]
  std::size_t z_size = 1;  // |Z| >= 1

  void validate() const {
    if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("CorrectionQuery: weight W must lie in [0, 1]");
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("CorrectionQuery: c must lie in [0, 1]");
    if (z_size < 1) throw DomainError("CorrectionQuery: |Z| must be at least 1");
  }
};

inline double delta(const CorrectionQuery& q) {
  q.validate();
  const double x = q.c * std::sqrt(q.weight);
  if (x == 0.0) return 0.0;
  return x * std::log2(static_cast<double>(q.z_size)) + (1.0 + x) * binary_entropy(x / (1.0 + x));
}

/// Finite-dimensional optimum minus the correction.
inline double keyrate_lower_bound(double finite_dim_value, const CorrectionQuery& q) {
  return finite_dim_value - delta(q);
}

struct CurvePoint {
  double w = 0.0;
  double c = 0.0;
  double delta = 0.0;
};

/// steps + 1 equally spaced points from 0 to w_max inclusive.
inline std::vector<double> uniform_grid(double w_max, std::size_t steps) {
  if (steps < 1) throw DomainError("uniform_grid: steps must be at least 1");
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    grid[i] = w_max * static_cast<double>(i) / static_cast<double>(steps);
  grid.back() = w_max;
  return grid;
}

/// Delta at every (W, c) pair, ordered by c then W.
inline std::vector<CurvePoint> delta_curve(std::vector<double> c_values, std::size_t z_size,
                                           std::vector<double> w_grid) {
  std::sort(c_values.begin(), c_values.end());
  std::sort(w_grid.begin(), w_grid.end());
  std::vector<CurvePoint> rows;
  rows.reserve(c_values.size() * w_grid.size());
  for (double c : c_values)
    for (double w : w_grid) rows.push_back({w, c, delta({w, c, z_size})});
  return rows;
}

struct NestedEstimate {
  std::vector<std::size_t> dims;
  std::vector<double> estimates;
  bool converged = false;
};

/// Estimates c by compressing every element and the projector to the span
/// of the first n coordinates, for each n in `nested_dims`. range(Pi) must
/// lie inside the smallest such span.
inline NestedEstimate estimate_c_nested(const Povm& povm, const Projector& pi,
                                        const std::vector<std::size_t>& nested_dims,
                                        const Tolerance& tol = {}, double convergence_tol = 1e-6) {
  const auto ambient = static_cast<std::size_t>(povm.dim());
  if (pi.dim() != povm.dim()) throw DomainError("estimate_c_nested: POVM and projector dimensions differ");
  if (nested_dims.empty()) throw DomainError("estimate_c_nested: nested_dims is empty");
  if (!(convergence_tol > 0.0)) throw DomainError("estimate_c_nested: convergence_tol must be positive");
  for (std::size_t i = 0; i < nested_dims.size(); ++i) {
    const std::size_t n = nested_dims[i];
    if (n < static_cast<std::size_t>(pi.rank()) || n > ambient)
      throw DomainError("estimate_c_nested: nested dimension " + std::to_string(n) +
                        " outside [rank(Pi), ambient dimension]");
    if (i > 0 && n <= nested_dims[i - 1])
      throw DomainError("estimate_c_nested: nested_dims must be strictly increasing");
  }
  const auto n0 = static_cast<Eigen::Index>(nested_dims.front());
  const ComplexMatrix& range = pi.range_basis();
  if (max_abs(range.bottomRows(range.rows() - n0)) > kProjectorTol)
    throw DomainError("estimate_c_nested: range of Pi is not contained in the smallest nested subspace");

  NestedEstimate out;
  out.dims = nested_dims;
  for (std::size_t n_u : nested_dims) {
    const auto n = static_cast<Eigen::Index>(n_u);
    double c = 0.0;
    if (n_u == ambient) {
      c = compute_c(povm, pi, tol).c;
    } else {
      const Projector compressed_pi = Projector::from_basis(range.topRows(n));
      for (const auto& el : povm.elements()) {
        const ComplexMatrix p = el.matrix.topLeftCorner(n, n);
        c = std::max(c, contraction_norm(block_decompose(p, compressed_pi, tol), tol));
      }
    }
    out.estimates.push_back(c);
  }
  const auto m = out.estimates.size();
  out.converged = m >= 2 && std::abs(out.estimates[m - 1] - out.estimates[m - 2]) < convergence_tol;
  return out;
}

}  // namespace dimred
