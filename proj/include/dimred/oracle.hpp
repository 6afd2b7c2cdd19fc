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

// Brute-force checks of the inequalities behind the correction term, on
// explicit finite-dimensional instances, plus a seeded suite runner.
//
// Every check reports lhs, rhs and margin = rhs - lhs; it passes when
// margin >= -slack.

#include "dimred/correction.hpp"
#include "dimred/linalg.hpp"
#include "dimred/quantum.hpp"
#include "dimred/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dimred {

inline constexpr double kDefaultSlack = 1e-9;

struct InstanceSummary {
  std::size_t dim = 0;
  std::size_t rho_rank = 0;
  std::size_t pi_rank = 0;
  std::size_t z_size = 0;
  std::size_t c_size = 0;
};

struct Lemma3Witness {
  double r = 0.0;  // Tr(rho^Pi P)
  double s = 0.0;  // Tr(rho^Pibar P)
  double weight_bound = 0.0;
  double k_norm = 0.0;
  double lhs = 0.0;  // ||sqrt(rho) H sqrt(rho)||_1
  double rhs = 0.0;  // (r + s) sqrt(W) k_norm
};

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  InstanceSummary instance;
  std::optional<Lemma3Witness> witness;
};

namespace detail {

inline CheckResult make_result(std::string name, double lhs, double rhs, double slack) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = r.margin >= -slack;
  return r;
}

inline std::size_t rank_of(const ComplexMatrix& m) {
  return static_cast<std::size_t>(numerical_rank(m, 1e-10));
}

inline InstanceSummary summarize(const DensityOperator& rho, const Projector* pi, const Povm* povm) {
  InstanceSummary s;
  s.dim = static_cast<std::size_t>(rho.dim());
  s.rho_rank = rank_of(rho.matrix());
  if (pi) s.pi_rank = static_cast<std::size_t>(pi->rank());
  if (povm) {
    s.z_size = povm->z_size();
    s.c_size = povm->c_size();
  }
  return s;
}

inline void require_same_dim(const DensityOperator& rho, Eigen::Index d, const char* what) {
  if (rho.dim() != d) throw DomainError(std::string(what) + ": dimension mismatch");
}

}  // namespace detail

/// Tr(rho Pibar).
inline double outside_weight(const ComplexMatrix& rho, const Projector& pi) {
  return std::max(0.0, real_trace(pi.complement() * rho));
}

/// Trace-norm bound on the off-diagonal part of a single POVM element.
/// `weight_bound` defaults to Tr(rho Pibar).
inline CheckResult check_lemma3(const DensityOperator& rho, const ComplexMatrix& p, const Projector& pi,
                                const Tolerance& tol = {}, double slack = kDefaultSlack,
                                std::optional<double> weight_bound = std::nullopt) {
  detail::require_same_dim(rho, pi.dim(), "check_lemma3");
  if (p.rows() != pi.dim() || p.cols() != pi.dim()) throw DomainError("check_lemma3: dimension mismatch");
  if (!is_psd(p, tol) || spectral_norm(p) > 1.0 + kContractionSlack)
    throw DomainError("check_lemma3: P is not a valid POVM element (need 0 <= P <= 1)");

  const ComplexMatrix& x = rho.matrix();
  const double w_exact = outside_weight(x, pi);
  const double w = weight_bound.value_or(w_exact);
  if (w < w_exact) throw DomainError("check_lemma3: weight bound is below Tr(rho Pibar)");

  const BlockDecomposition bd = block_decompose(p, pi, tol);
  const double k = contraction_norm(bd, tol);
  const ComplexMatrix root = psd_sqrt(x, tol);
  const double lhs = trace_norm(root * bd.off_diag * root);

  const ComplexMatrix in = pi.matrix() * x * pi.matrix();
  const ComplexMatrix out = pi.complement() * x * pi.complement();
  const double t_in = real_trace(in);
  const double t_out = real_trace(out);
  // Conditional probabilities are undefined (and pure rounding noise) when
  // the corresponding block carries no weight.
  const double floor = tol.rank_cutoff * rho.trace();
  const double r = t_in > floor ? real_trace(in * p) / t_in : 0.0;
  const double s = t_out > floor ? real_trace(out * p) / t_out : 0.0;
  const double rhs = (r + s) * std::sqrt(w) * k;

  CheckResult res = detail::make_result("lemma3", lhs, rhs, slack);
  res.instance = detail::summarize(rho, &pi, nullptr);
  res.witness = Lemma3Witness{r, s, w, k, lhs, rhs};
  return res;
}

/// Continuity of H(A|B) for subnormalized cq states. Inputs are swapped if
/// needed so that the first argument carries the larger trace.
inline CheckResult check_continuity(const CqState& rho_cq, const CqState& sigma_cq, std::size_t z_size,
                                    const Tolerance& tol = {}, double slack = kDefaultSlack) {
  if (z_size < 1) throw DomainError("check_continuity: |Z| must be at least 1");
  const CqState* rho = &rho_cq;
  const CqState* sigma = &sigma_cq;
  if (rho->trace() < sigma->trace()) std::swap(rho, sigma);

  std::map<KeyLabel, const ComplexMatrix*> sigma_blocks;
  for (const auto& b : sigma->blocks()) sigma_blocks[b.label] = &b.block;
  if (sigma_blocks.size() != rho->blocks().size() || rho->dim() != sigma->dim())
    throw DomainError("check_continuity: cq states have different labels");

  double eps = 0.0;
  for (const auto& b : rho->blocks()) {
    auto it = sigma_blocks.find(b.label);
    if (it == sigma_blocks.end()) throw DomainError("check_continuity: cq states have different labels");
    eps += trace_norm(b.block - *it->second);
  }
  eps *= 0.5;

  const double lhs = conditional_entropy_cq(*sigma, tol) - conditional_entropy_cq(*rho, tol);
  const double rhs =
      eps * std::log2(static_cast<double>(z_size)) + (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
  CheckResult res = detail::make_result("lemma1", lhs, rhs, slack);
  res.instance.dim = static_cast<std::size_t>(rho->dim());
  res.instance.z_size = z_size;
  return res;
}

/// Cq state with blocks sqrt(rho) Xi(P_k) sqrt(rho), i.e. the measurement
/// applied to the dephased joint state.
inline CqState dephased_conditional_states(const ComplexMatrix& rho, const Povm& povm, const Projector& pi,
                                           const Tolerance& tol = {}) {
  const ComplexMatrix root = psd_sqrt(rho, tol);
  std::vector<CqState::Block> blocks;
  for (const auto& el : povm.elements()) {
    ComplexMatrix b = root * dephase(el.matrix, pi) * root;
    blocks.push_back({el.label, 0.5 * (b + b.adjoint())});
  }
  return CqState(std::move(blocks), tol);
}

/// f(Pi rho Pi) <= H(Z|[E]) evaluated on the dephased state.
inline CheckResult check_dephasing_lemma(const DensityOperator& rho, const Povm& povm, const Projector& pi,
                                         const Tolerance& tol = {}, double slack = kDefaultSlack) {
  detail::require_same_dim(rho, pi.dim(), "check_dephasing_lemma");
  if (povm.dim() != pi.dim()) throw DomainError("check_dephasing_lemma: dimension mismatch");
  const ComplexMatrix projected = pi.matrix() * rho.matrix() * pi.matrix();
  const double lhs = objective_f(ComplexMatrix(0.5 * (projected + projected.adjoint())), povm, tol);
  const double rhs = conditional_entropy_cq(dephased_conditional_states(rho.matrix(), povm, pi, tol), tol);
  CheckResult res = detail::make_result("lemma2", lhs, rhs, slack);
  res.instance = detail::summarize(rho, &pi, &povm);
  return res;
}

/// 1/2 ||Phi(rho) - Phi(Xi(rho))||_1 <= c sqrt(W) with W = Tr(rho Pibar).
inline CheckResult check_trace_distance_bound(const DensityOperator& rho, const Povm& povm, const Projector& pi,
                                              const Tolerance& tol = {}, double slack = kDefaultSlack) {
  detail::require_same_dim(rho, pi.dim(), "check_trace_distance_bound");
  if (povm.dim() != pi.dim()) throw DomainError("check_trace_distance_bound: dimension mismatch");
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  double lhs = 0.0;
  for (const auto& el : povm.elements())
    lhs += trace_norm(root * (el.matrix - dephase(el.matrix, pi)) * root);
  lhs *= 0.5;
  const double c = compute_c(povm, pi, tol).c;
  const double rhs = c * std::sqrt(outside_weight(rho.matrix(), pi));
  CheckResult res = detail::make_result("trace_distance", lhs, rhs, slack);
  res.instance = detail::summarize(rho, &pi, &povm);
  return res;
}

/// f(Pi rho Pi) - f(rho) <= Delta(W).
inline CheckResult check_ucdup(const DensityOperator& rho, const Povm& povm, const Projector& pi,
                               double weight_bound, const Tolerance& tol = {}, double slack = kDefaultSlack) {
  detail::require_same_dim(rho, pi.dim(), "check_ucdup");
  if (povm.dim() != pi.dim()) throw DomainError("check_ucdup: dimension mismatch");
  if (weight_bound < outside_weight(rho.matrix(), pi))
    throw DomainError("check_ucdup: weight bound is below Tr(rho Pibar)");
  const ComplexMatrix projected = pi.matrix() * rho.matrix() * pi.matrix();
  const double lhs = objective_f(ComplexMatrix(0.5 * (projected + projected.adjoint())), povm, tol) -
                     objective_f(rho, povm, tol);
  // c may exceed 1 by rounding.
  const double c = std::min(compute_c(povm, pi, tol).c, 1.0);
  const double rhs = delta({std::min(weight_bound, 1.0), c, povm.z_size()});
  CheckResult res = detail::make_result("ucdup", lhs, rhs, slack);
  res.instance = detail::summarize(rho, &pi, &povm);
  return res;
}

/// Eve's marginal Tr_AB[(P (x) 1) |psi><psi|] for the purification
/// |psi> = sum_i sqrt(lambda_i) |e_i>_AB |i>_E, built explicitly.
inline ComplexMatrix purified_conditional_state(const ComplexMatrix& rho, const ComplexMatrix& p,
                                                const Tolerance& tol = {}) {
  const HermitianEig e = psd_eig(rho, tol, 0.0, "purified_conditional_state");
  const Eigen::Index d = rho.rows();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    ComplexVector basis_e = ComplexVector::Zero(d);
    basis_e(i) = 1.0;
    psi += std::sqrt(e.values(i)) * kron(e.vectors.col(i), basis_e);
  }
  const ComplexMatrix joint = kron(p, ComplexMatrix::Identity(d, d)) * (psi * psi.adjoint());
  ComplexMatrix eve = ComplexMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) eve += joint.block(a * d, a * d, d, d);
  return 0.5 * (eve + eve.adjoint());
}

/// Spectra of the explicit purification marginal and of sqrt(rho) P sqrt(rho)
/// agree. lhs is the largest eigenvalue discrepancy; rhs is 0.
inline CheckResult check_purification_identity(const DensityOperator& rho, const ComplexMatrix& p,
                                               const Tolerance& tol = {}, double slack = kDefaultSlack) {
  if (p.rows() != rho.dim() || p.cols() != rho.dim())
    throw DomainError("check_purification_identity: dimension mismatch");
  const ComplexMatrix eve = purified_conditional_state(rho.matrix(), p, tol);
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  ComplexMatrix direct = root * p * root;
  direct = 0.5 * (direct + direct.adjoint());
  const RealVector a = hermitian_eig(eve, tol).values;
  const RealVector b = hermitian_eig(direct, tol).values;
  const double diff = (a - b).cwiseAbs().maxCoeff();
  CheckResult res = detail::make_result("purification", diff, 0.0, slack);
  res.instance = detail::summarize(rho, nullptr, nullptr);
  return res;
}

/// ||sqrt(A)^g B sqrt(D)^g||_inf <= 1 for a PSD P.
inline CheckResult check_contraction(const ComplexMatrix& p, const Projector& pi, const Tolerance& tol = {},
                                     double slack = kDefaultSlack) {
  const double k = contraction_norm(block_decompose(p, pi, tol), tol);
  CheckResult res = detail::make_result("contraction", k, 1.0, slack);
  res.instance.dim = static_cast<std::size_t>(p.rows());
  res.instance.rho_rank = detail::rank_of(p);
  res.instance.pi_rank = static_cast<std::size_t>(pi.rank());
  return res;
}

// ---------------------------------------------------------------------------
// Suite runner

inline constexpr std::array<std::string_view, 7> kSuiteNames = {
    "lemma1", "lemma2", "lemma3", "trace_distance", "ucdup", "purification", "contraction"};

struct SuiteConfig {
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8};
  std::size_t trials = 1000;  // per check and per dimension
  std::uint64_t base_seed = 42;
  double numerical_slack = kDefaultSlack;
  Tolerance tolerance{};
  std::vector<std::string> suites{kSuiteNames.begin(), kSuiteNames.end()};

  void validate() const {
    if (trials < 1) throw DomainError("SuiteConfig: trials must be at least 1");
    if (dims.empty()) throw DomainError("SuiteConfig: dims is empty");
    for (std::size_t d : dims)
      if (d < 2) throw DomainError("SuiteConfig: every dimension must be at least 2");
    if (!(numerical_slack > 0.0)) throw DomainError("SuiteConfig: numerical_slack must be positive");
    tolerance.validate();
    if (suites.empty()) throw DomainError("SuiteConfig: no suites selected");
    for (const auto& s : suites)
      if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end())
        throw DomainError("SuiteConfig: unknown suite '" + s + "'");
  }
};

struct SuiteSummary {
  std::string name;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double min_margin = 0.0;
  double max_ratio = 0.0;  // max lhs / rhs over trials with rhs > 0
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckResult> results;
  std::vector<SuiteSummary> summaries;
  std::size_t total_failures = 0;
};

/// seed = base ^ splitmix64((check << 32) | trial). `check` is the index in
/// kSuiteNames, so a suite's seeds do not depend on which others run.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t check, std::size_t trial) {
  return base ^ mix_seed((static_cast<std::uint64_t>(check) << 32) | static_cast<std::uint64_t>(trial));
}

namespace detail {

inline Eigen::Index proper_rank(Eigen::Index dim, Rng& rng) { return uniform_index(1, dim - 1, rng); }

// Half of the elements have some eigenvalues zeroed so that rank-deficient
// blocks (where ||K|| tends to reach 1) are exercised.
inline ComplexMatrix sample_povm_element(Eigen::Index dim, Rng& rng) {
  ComplexMatrix p = random_povm_element(dim, rng);
  if (uniform_index(0, 1, rng) == 1) {
    const HermitianEig e = hermitian_eig(p);
    RealVector v = e.values.cwiseMax(0.0);
    const Eigen::Index keep = uniform_index(1, dim, rng);
    for (Eigen::Index i = keep; i < dim; ++i) v(i) = 0.0;
    p = from_spectrum(e, v);
    p = 0.5 * (p + p.adjoint());
  }
  return p;
}

struct ProtocolInstance {
  DensityOperator rho;
  Povm povm;
  Projector pi;
};

inline ProtocolInstance sample_protocol(Eigen::Index dim, std::size_t trial, Rng& rng) {
  const std::size_t z_size = trial % 2 == 0 ? 2 : 4;
  const std::size_t c_size = static_cast<std::size_t>(uniform_index(1, 2, rng));
  DensityOperator rho = random_density(dim, uniform_index(1, dim, rng), rng);
  Povm povm = random_povm(dim, z_size * c_size, z_size, c_size, rng);
  Projector pi = random_projector(dim, proper_rank(dim, rng), rng);
  return {std::move(rho), std::move(povm), std::move(pi)};
}

inline CqState random_cq(Eigen::Index dim, std::size_t z_size, std::size_t c_size, double total, Rng& rng) {
  std::vector<CqState::Block> blocks;
  std::vector<double> weights;
  double wsum = 0.0;
  for (std::size_t c = 0; c < c_size; ++c)
    for (std::size_t z = 0; z < z_size; ++z) {
      const double w = uniform_real(0.0, 1.0, rng);
      weights.push_back(w);
      wsum += w;
      ComplexMatrix b = random_density(dim, uniform_index(1, dim, rng), rng).matrix();
      blocks.push_back({KeyLabel{z, c}, std::move(b)});
    }
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].block *= total * weights[i] / wsum;
  return CqState(std::move(blocks));
}

inline std::pair<CqState, CqState> sample_cq_pair(Eigen::Index dim, std::size_t trial, Rng& rng) {
  const std::size_t z_size = trial % 2 == 0 ? 2 : 4;
  const std::size_t c_size = static_cast<std::size_t>(uniform_index(1, 2, rng));
  const double t_rho = uniform_real(0.05, 1.0, rng);
  CqState rho = random_cq(dim, z_size, c_size, t_rho, rng);
  CqState tau = random_cq(dim, z_size, c_size, uniform_real(0.05, 1.0, rng), rng);
  // Mixing weight skewed toward 0 gives many nearby pairs.
  const double u = uniform_real(0.0, 1.0, rng);
  const double lambda = u * u * u;
  const double shrink = uniform_real(0.5, 1.0, rng);
  std::vector<CqState::Block> mixed;
  for (std::size_t i = 0; i < rho.blocks().size(); ++i)
    mixed.push_back({rho.blocks()[i].label,
                     shrink * ((1.0 - lambda) * rho.blocks()[i].block + lambda * tau.blocks()[i].block)});
  return {std::move(rho), CqState(std::move(mixed))};
}

inline CheckResult run_trial(std::size_t check, Eigen::Index dim, std::size_t trial, Rng& rng,
                             const SuiteConfig& cfg) {
  const Tolerance& tol = cfg.tolerance;
  const double slack = cfg.numerical_slack;
  switch (check) {
    case 0: {
      auto [rho, sigma] = sample_cq_pair(dim, trial, rng);
      std::size_t z_size = 0;
      for (const auto& b : rho.blocks()) z_size = std::max(z_size, b.label.z + 1);
      return check_continuity(rho, sigma, z_size, tol, slack);
    }
    case 1: {
      auto inst = sample_protocol(dim, trial, rng);
      return check_dephasing_lemma(inst.rho, inst.povm, inst.pi, tol, slack);
    }
    case 2: {
      DensityOperator rho = random_density(dim, uniform_index(1, dim, rng), rng);
      ComplexMatrix p = sample_povm_element(dim, rng);
      Projector pi = random_projector(dim, proper_rank(dim, rng), rng);
      return check_lemma3(rho, p, pi, tol, slack);
    }
    case 3: {
      auto inst = sample_protocol(dim, trial, rng);
      return check_trace_distance_bound(inst.rho, inst.povm, inst.pi, tol, slack);
    }
    case 4: {
      auto inst = sample_protocol(dim, trial, rng);
      return check_ucdup(inst.rho, inst.povm, inst.pi, outside_weight(inst.rho.matrix(), inst.pi), tol, slack);
    }
    case 5: {
      DensityOperator rho = random_density(dim, uniform_index(1, dim, rng), rng);
      return check_purification_identity(rho, sample_povm_element(dim, rng), tol, slack);
    }
    case 6: {
      ComplexMatrix p = random_psd(dim, uniform_index(1, dim, rng), rng);
      p *= uniform_real(0.1, 10.0, rng);
      Projector pi = random_projector(dim, proper_rank(dim, rng), rng);
      return check_contraction(p, pi, tol, slack);
    }
    default:
      throw DomainError("run_suite: unknown check index");
  }
}

}  // namespace detail

/// Runs the selected checks on `trials` random instances per dimension.
/// Results are ordered by (check, trial) and depend only on the config.
inline SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  SuiteReport report;
  report.config = config;
  for (std::size_t check = 0; check < kSuiteNames.size(); ++check) {
    const std::string name(kSuiteNames[check]);
    if (std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end()) continue;
    SuiteSummary summary;
    summary.name = name;
    summary.min_margin = std::numeric_limits<double>::infinity();
    std::size_t trial = 0;
    for (std::size_t dim : config.dims) {
      for (std::size_t i = 0; i < config.trials; ++i, ++trial) {
        const std::uint64_t seed = trial_seed(config.base_seed, check, trial);
        Rng rng(seed);
        CheckResult r = detail::run_trial(check, static_cast<Eigen::Index>(dim), trial, rng, config);
        r.seed = seed;
        r.trial = trial;
        ++summary.runs;
        if (!r.pass) ++summary.failures;
        summary.min_margin = std::min(summary.min_margin, r.margin);
        if (r.rhs > 0.0) summary.max_ratio = std::max(summary.max_ratio, r.lhs / r.rhs);
        report.results.push_back(std::move(r));
      }
    }
    report.total_failures += summary.failures;
    report.summaries.push_back(std::move(summary));
  }
  return report;
}

}  // namespace dimred
