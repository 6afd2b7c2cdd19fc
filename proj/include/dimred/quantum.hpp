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

// Density operators, POVMs, projectors, the dephasing channel and the
// conditional-entropy objective evaluated on classical-quantum states.
//
// Entropies use log base 2 and are evaluated directly on subnormalized
// operators, S(X) = -Tr[X log2 X]. Conditional entropies are differences of
// such terms, which makes them positively homogeneous of degree one.

#include "dimred/linalg.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dimred {

/// Key symbol z and public announcement c of one POVM outcome.
struct KeyLabel {
  std::size_t z = 0;
  std::size_t c = 0;
  auto operator<=>(const KeyLabel&) const = default;
};

inline std::string to_string(const KeyLabel& k) {
  return "(z=" + std::to_string(k.z) + ",c=" + std::to_string(k.c) + ")";
}

inline constexpr double kTraceSlack = 1e-12;
inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kPovmSumTol = 1e-9;

/// PSD operator with trace in (0, 1]. Subnormalized states are allowed.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, const Tolerance& tol = {}) : matrix_(std::move(m)) {
    require_square(matrix_, "DensityOperator");
    require_finite(matrix_, "DensityOperator");
    psd_eig(matrix_, tol, 0.0, "DensityOperator");
    const double tr = real_trace(matrix_);
    if (!(tr > 0.0)) throw DomainError("DensityOperator: trace must be positive");
    if (tr > 1.0 + kTraceSlack) throw DomainError("DensityOperator: trace exceeds 1");
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double trace() const { return real_trace(matrix_); }

 private:
  ComplexMatrix matrix_;
};

/// Orthogonal projector together with orthonormal bases of its range and of
/// the range of its complement.
class Projector {
 public:
  /// Coordinate projector onto span{e_i : i in indices}.
  static Projector from_indices(Eigen::Index dim, const std::vector<Eigen::Index>& indices) {
    if (dim < 1) throw DomainError("Projector: dimension must be positive");
    std::vector<bool> in(static_cast<std::size_t>(dim), false);
    for (Eigen::Index i : indices) {
      if (i < 0 || i >= dim)
        throw DomainError("Projector: basis index " + std::to_string(i) + " out of range");
      if (in[static_cast<std::size_t>(i)])
        throw DomainError("Projector: duplicate basis index " + std::to_string(i));
      in[static_cast<std::size_t>(i)] = true;
    }
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix range(dim, static_cast<Eigen::Index>(indices.size()));
    ComplexMatrix comp(dim, dim - range.cols());
    Eigen::Index r = 0, s = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (in[static_cast<std::size_t>(i)])
        range.col(r++) = id.col(i);
      else
        comp.col(s++) = id.col(i);
    }
    return Projector(std::move(range), std::move(comp));
  }

  /// Projector from an explicit matrix; must be Hermitian and idempotent.
  static Projector from_matrix(const ComplexMatrix& m) {
    require_square(m, "Projector");
    require_finite(m, "Projector");
    if (max_abs(m - m.adjoint()) > kProjectorTol)
      throw DomainError("Projector: matrix is not Hermitian");
    if (max_abs(m * m - m) > kProjectorTol)
      throw DomainError("Projector: matrix is not idempotent");
    const HermitianEig e = hermitian_eig(m);
    Eigen::Index rank = 0;
    while (rank < e.values.size() && e.values(rank) > 0.5) ++rank;
    return Projector(e.vectors.leftCols(rank), e.vectors.rightCols(m.rows() - rank));
  }

  /// Projector onto the span of the (orthonormal) columns of `basis`.
  static Projector from_basis(const ComplexMatrix& basis) {
    const Eigen::Index dim = basis.rows();
    if (max_abs(basis.adjoint() * basis - ComplexMatrix::Identity(basis.cols(), basis.cols())) > kProjectorTol)
      throw DomainError("Projector: basis columns are not orthonormal");
    const ComplexMatrix comp_proj =
        ComplexMatrix::Identity(dim, dim) - basis * basis.adjoint();
    const HermitianEig e = hermitian_eig(comp_proj);
    return Projector(basis, e.vectors.leftCols(dim - basis.cols()));
  }

  Eigen::Index dim() const { return range_.rows(); }
  Eigen::Index rank() const { return range_.cols(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  ComplexMatrix complement() const {
    return ComplexMatrix::Identity(dim(), dim()) - matrix_;
  }
  /// Orthonormal basis of the range, dim x rank.
  const ComplexMatrix& range_basis() const { return range_; }
  /// Orthonormal basis of the complement's range, dim x (dim - rank).
  const ComplexMatrix& complement_basis() const { return comp_; }

 private:
  Projector(ComplexMatrix range, ComplexMatrix comp)
      : range_(std::move(range)), comp_(std::move(comp)) {
    matrix_ = range_ * range_.adjoint();
  }

  ComplexMatrix range_;
  ComplexMatrix comp_;
  ComplexMatrix matrix_;
};

/// Labelled measurement {P_k}, k = (z, c), with sum_k P_k <= 1. Completeness
/// is only enforced when requested, since discarded outcomes are not key
/// symbols.
class Povm {
 public:
  struct Element {
    KeyLabel label;
    ComplexMatrix matrix;
  };

  Povm(std::vector<Element> elements, std::size_t z_size, std::size_t c_size,
       const Tolerance& tol = {}, bool require_complete = false)
      : elements_(std::move(elements)), z_size_(z_size), c_size_(c_size) {
    if (elements_.empty()) throw DomainError("Povm: at least one element is required");
    if (z_size_ < 1 || c_size_ < 1) throw DomainError("Povm: |Z| and |C| must be at least 1");
    const Eigen::Index d = elements_.front().matrix.rows();
    if (d < 1) throw DomainError("Povm: elements must have positive dimension");
    std::vector<KeyLabel> seen;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const auto& el = elements_[i];
      const std::string where = "Povm element " + std::to_string(i);
      if (el.matrix.rows() != d || el.matrix.cols() != d)
        throw DomainError(where + ": dimension mismatch");
      if (el.label.z >= z_size_ || el.label.c >= c_size_)
        throw DomainError(where + ": label " + to_string(el.label) + " out of range");
      if (std::find(seen.begin(), seen.end(), el.label) != seen.end())
        throw DomainError(where + ": duplicate label " + to_string(el.label));
      seen.push_back(el.label);
      require_finite(el.matrix, where.c_str());
      psd_eig(el.matrix, tol, 0.0, where.c_str());
      sum += el.matrix;
    }
    const RealVector ev = hermitian_eig(sum, tol).values;
    if (ev(0) > 1.0 + kPovmSumTol) throw DomainError("Povm: sum of elements exceeds identity");
    if (require_complete && ev(ev.size() - 1) < 1.0 - kPovmSumTol)
      throw DomainError("Povm: elements do not sum to identity");
  }

  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().matrix.rows(); }
  std::size_t z_size() const { return z_size_; }
  std::size_t c_size() const { return c_size_; }

 private:
  std::vector<Element> elements_;
  std::size_t z_size_;
  std::size_t c_size_;
};

/// Classical-quantum operator sum_k |k><k| (x) block_k.
class CqState {
 public:
  struct Block {
    KeyLabel label;
    ComplexMatrix block;
  };

  explicit CqState(std::vector<Block> blocks, const Tolerance& tol = {}) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw DomainError("CqState: at least one block is required");
    const Eigen::Index d = blocks_.front().block.rows();
    double total = 0.0;
    for (const auto& b : blocks_) {
      if (b.block.rows() != d || b.block.cols() != d) throw DomainError("CqState: block dimension mismatch");
      require_finite(b.block, "CqState");
      total += real_trace(b.block);
    }
    if (total > 1.0 + kTraceSlack) throw DomainError("CqState: total trace exceeds 1");
    // Blocks are checked against the scale of the whole state so that
    // numerically empty blocks do not trip the relative clip.
    for (const auto& b : blocks_) psd_eig(b.block, tol, total, "CqState block");
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  Eigen::Index dim() const { return blocks_.front().block.rows(); }
  double trace() const {
    double t = 0.0;
    for (const auto& b : blocks_) t += real_trace(b.block);
    return t;
  }

  /// The full block-diagonal operator, blocks ordered as stored.
  ComplexMatrix embedded() const {
    const Eigen::Index d = dim();
    const auto n = static_cast<Eigen::Index>(blocks_.size());
    ComplexMatrix out = ComplexMatrix::Zero(n * d, n * d);
    for (Eigen::Index i = 0; i < n; ++i) out.block(i * d, i * d, d, d) = blocks_[static_cast<std::size_t>(i)].block;
    return out;
  }

 private:
  std::vector<Block> blocks_;
};

/// Pinching X -> Pi X Pi + Pibar X Pibar.
inline ComplexMatrix dephase(const ComplexMatrix& x, const Projector& pi) {
  if (x.rows() != pi.dim() || x.cols() != pi.dim()) throw DomainError("dephase: dimension mismatch");
  const ComplexMatrix& p = pi.matrix();
  const ComplexMatrix q = pi.complement();
  return p * x * p + q * x * q;
}

inline DensityOperator dephase(const DensityOperator& rho, const Projector& pi,
                               const Tolerance& tol = {}) {
  return DensityOperator(dephase(rho.matrix(), pi), tol);
}

struct AdjointCheck {
  double lhs = 0.0;  // Tr(P Xi(rho))
  double rhs = 0.0;  // Tr(Xi(P) rho)
};

inline AdjointCheck dephase_adjoint_identity_check(const DensityOperator& rho, const ComplexMatrix& p,
                                                   const Projector& pi) {
  if (p.rows() != rho.dim() || p.cols() != rho.dim()) throw DomainError("dephase_adjoint_identity_check: dimension mismatch");
  return {(p * dephase(rho.matrix(), pi)).trace().real(),
          (dephase(p, pi) * rho.matrix()).trace().real()};
}

/// -Tr[M log2 M] over the clipped spectrum, 0 log 0 = 0.
inline double von_neumann_entropy(const ComplexMatrix& m, const Tolerance& tol = {},
                                  double reference_scale = 0.0) {
  const HermitianEig e = psd_eig(m, tol, reference_scale, "von_neumann_entropy");
  double h = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double l = e.values(i);
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

/// Eve's conditional operators sqrt(rho) P_k sqrt(rho), one per outcome.
/// `rho` may be any PSD operator, including a projected (subnormalized) state.
inline CqState conditional_states(const ComplexMatrix& rho, const Povm& povm, const Tolerance& tol = {}) {
  require_square(rho, "conditional_states");
  if (rho.rows() != povm.dim()) throw DomainError("conditional_states: dimension mismatch");
  const ComplexMatrix root = psd_sqrt(rho, tol);
  std::vector<CqState::Block> blocks;
  blocks.reserve(povm.size());
  for (const auto& el : povm.elements()) {
    ComplexMatrix b = root * el.matrix * root;
    b = 0.5 * (b + b.adjoint());
    blocks.push_back({el.label, std::move(b)});
  }
  return CqState(std::move(blocks), tol);
}

inline CqState conditional_states(const DensityOperator& rho, const Povm& povm, const Tolerance& tol = {}) {
  return conditional_states(rho.matrix(), povm, tol);
}

/// H(Z | C E) = H(Z C E) - H(C E) for a cq state labelled by (z, c).
inline double conditional_entropy_cq(const CqState& state, const Tolerance& tol = {}) {
  const double scale = std::max(state.trace(), 0.0);
  double h_zce = 0.0;
  std::map<std::size_t, ComplexMatrix> by_announcement;
  for (const auto& b : state.blocks()) {
    h_zce += von_neumann_entropy(b.block, tol, scale);
    auto [it, fresh] = by_announcement.try_emplace(b.label.c, b.block);
    if (!fresh) it->second += b.block;
  }
  double h_ce = 0.0;
  for (const auto& [c, sigma] : by_announcement) h_ce += von_neumann_entropy(sigma, tol, scale);
  return h_zce - h_ce;
}

/// The key-rate objective f(rho) = H(Z|[E]) of the post-measurement cq state.
inline double objective_f(const ComplexMatrix& rho, const Povm& povm, const Tolerance& tol = {}) {
  return conditional_entropy_cq(conditional_states(rho, povm, tol), tol);
}

inline double objective_f(const DensityOperator& rho, const Povm& povm, const Tolerance& tol = {}) {
  return objective_f(rho.matrix(), povm, tol);
}

}  // namespace dimred
