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

// Dense complex linear algebra used throughout the library: Hermitian
// eigendecomposition, SVD, Schatten norms, generalized inverse and PSD square
// root. Everything is a pure function of its arguments.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimred {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when an input violates a mathematical precondition (shape,
/// Hermiticity, positivity, range). The message names the violated condition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical policy shared by every routine that has to decide a rank or
/// repair a slightly non-PSD matrix. Both thresholds are relative to the
/// largest eigenvalue (or singular value) of the operator in question.
struct Tolerance {
  double rank_cutoff = 1e-10;
  double psd_clip = 1e-10;

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    if (!ok(rank_cutoff)) throw DomainError("Tolerance: rank_cutoff must lie in (0, 1)");
    if (!ok(psd_clip)) throw DomainError("Tolerance: psd_clip must lie in (0, 1)");
  }
};

struct HermitianEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns match `values`
};

struct Svd {
  ComplexMatrix u;
  RealVector singular_values;  // descending, nonnegative
  ComplexMatrix v;
};

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DomainError(std::string(what) + ": matrix must be square, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

// Frobenius norm of the anti-Hermitian part, relative to the Frobenius norm
// of the matrix.
inline bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double skew = (m - m.adjoint()).norm();
  return skew <= rel_tol * m.norm();
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
inline HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerance& tol = {}) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  if (!is_hermitian(m, tol.psd_clip)) throw DomainError("hermitian_eig: matrix is not Hermitian");
  const Eigen::Index n = m.rows();
  if (n == 0) return {RealVector(0), ComplexMatrix(0, 0)};

  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw DomainError("hermitian_eig: eigensolver did not converge");

  // Eigen returns ascending order.
  HermitianEig out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  return out;
}

inline Svd svd(const ComplexMatrix& m) {
  require_finite(m, "svd");
  if (m.size() == 0) {
    return {ComplexMatrix::Identity(m.rows(), 0), RealVector(0),
            ComplexMatrix::Identity(m.cols(), 0)};
  }
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

inline RealVector singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return RealVector(0);
  Eigen::JacobiSVD<ComplexMatrix> solver(m);
  return solver.singularValues();
}

/// Schatten infinity-norm. Zero for empty matrices.
inline double spectral_norm(const ComplexMatrix& m) {
  const RealVector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

/// Schatten 1-norm.
inline double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

/// Numerical rank with a cutoff relative to the largest singular value.
inline Eigen::Index numerical_rank(const ComplexMatrix& m, double rel_cutoff) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * s(0)) ++r;
  return r;
}

/// Spectrum of a PSD matrix with small negative eigenvalues clipped to zero.
/// `reference_scale` lets a caller measure the clip against a parent operator
/// (e.g. a corner block against the full matrix); the effective scale is
/// max(largest |eigenvalue|, reference_scale).
inline HermitianEig psd_eig(const ComplexMatrix& m, const Tolerance& tol,
                            double reference_scale = 0.0, const char* what = "psd") {
  HermitianEig e = hermitian_eig(m, tol);
  if (e.values.size() == 0) return e;
  const double scale =
      std::max({std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)), reference_scale});
  const double floor = -tol.psd_clip * scale;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) < floor)
      throw DomainError(std::string(what) + ": matrix is not positive semidefinite (eigenvalue " +
                        std::to_string(e.values(i)) + ")");
    if (e.values(i) < 0.0) e.values(i) = 0.0;
  }
  return e;
}

inline ComplexMatrix from_spectrum(const HermitianEig& e, const RealVector& values) {
  return e.vectors * values.asDiagonal() * e.vectors.adjoint();
}

inline bool is_psd(const ComplexMatrix& m, const Tolerance& tol = {}) {
  try {
    psd_eig(m, tol);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

namespace detail {

// Eigenvalues at or below rank_cutoff * max(lambda_max, reference_scale) are
// treated as kernel.
inline double support_threshold(const HermitianEig& e, const Tolerance& tol,
                                double reference_scale) {
  const double top = e.values.size() == 0 ? 0.0 : e.values(0);
  return tol.rank_cutoff * std::max(top, reference_scale);
}

}  // namespace detail

/// Inverse on the support of a PSD matrix, zero on its kernel.
inline ComplexMatrix generalized_inverse(const ComplexMatrix& m, const Tolerance& tol = {},
                                         double reference_scale = 0.0) {
  const HermitianEig e = psd_eig(m, tol, reference_scale, "generalized_inverse");
  const double cut = detail::support_threshold(e, tol, reference_scale);
  RealVector inv = RealVector::Zero(e.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    if (e.values(i) > cut) inv(i) = 1.0 / e.values(i);
  return from_spectrum(e, inv);
}

/// Projector onto the support of a PSD matrix.
inline ComplexMatrix support_projector(const ComplexMatrix& m, const Tolerance& tol = {},
                                       double reference_scale = 0.0) {
  const HermitianEig e = psd_eig(m, tol, reference_scale, "support_projector");
  const double cut = detail::support_threshold(e, tol, reference_scale);
  RealVector ind = RealVector::Zero(e.values.size());
  for (Eigen::Index i = 0; i < ind.size(); ++i)
    if (e.values(i) > cut) ind(i) = 1.0;
  return from_spectrum(e, ind);
}

/// Eigenvalues at the rounding floor (n * eps * lambda_max) are dropped
/// before the square root, which would otherwise amplify them to ~1e-8.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerance& tol = {}) {
  const HermitianEig e = psd_eig(m, tol, 0.0, "psd_sqrt");
  if (e.values.size() == 0) return m;
  const double floor =
      static_cast<double>(e.values.size()) * std::numeric_limits<double>::epsilon() * e.values(0);
  const RealVector roots = (e.values.array() > floor).select(e.values.cwiseSqrt(), 0.0);
  return from_spectrum(e, roots);
}

/// (sqrt M)^g, i.e. 1/sqrt(lambda) on the support and zero elsewhere.
inline ComplexMatrix psd_inverse_sqrt(const ComplexMatrix& m, const Tolerance& tol = {},
                                      double reference_scale = 0.0) {
  const HermitianEig e = psd_eig(m, tol, reference_scale, "psd_inverse_sqrt");
  const double cut = detail::support_threshold(e, tol, reference_scale);
  RealVector v = RealVector::Zero(e.values.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (e.values(i) > cut) v(i) = 1.0 / std::sqrt(e.values(i));
  return from_spectrum(e, v);
}

inline double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

/// Largest absolute entry; 0 for empty matrices.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace dimred
