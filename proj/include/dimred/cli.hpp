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

// Command-line front end: `c-estimate`, `delta`, `curve` and `verify`.
//
// Exit status: 0 success, 1 verification failures, 2 usage or parse error,
// 3 invalid operators, 4 I/O error.

#include "dimred/correction.hpp"
#include "dimred/oracle.hpp"
#include "dimred/problem_io.hpp"
#include "dimred/report.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace dimred::cli {

enum ExitCode : int { kOk = 0, kChecksFailed = 1, kUsage = 2, kInvalid = 3, kIo = 4 };

/// %.12g without locale dependence.
inline std::string format_g12(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return !in.bad();
}

inline bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  out.flush();
  return out.good();
}

struct Options {
  // c-estimate
  std::string problem_path;
  bool nested = false;
  std::vector<std::size_t> nested_dims;
  double convergence_tol = 1e-6;
  // delta
  double c = 0.0;
  double w = 0.0;
  std::size_t z_size = 2;
  // curve
  std::vector<double> c_list;
  double w_max = 0.2;
  std::size_t steps = 200;
  std::string out_path;
  // verify
  std::string suite = "all";
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8};
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  double slack = kDefaultSlack;
  std::string report_path;
  // shared
  Tolerance tol;
};

inline int cmd_c_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_file(o.problem_path, text)) {
    err << "error: cannot read problem file '" << o.problem_path << "'\n";
    return kIo;
  }
  ProblemFile pf;
  try {
    pf = parse_problem(text);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const Problem prob = build_problem(pf, o.tol);
    const ContractionReport rep = compute_c(prob.povm, prob.pi, o.tol);
    out << "rank_cutoff " << format_g12(o.tol.rank_cutoff) << "\n";
    out << "psd_clip " << format_g12(o.tol.psd_clip) << "\n";
    out << "dim " << prob.povm.dim() << " rank " << prob.pi.rank() << " |Z| " << prob.povm.z_size()
        << " |C| " << prob.povm.c_size() << "\n";
    for (const auto& e : rep.per_element)
      out << "element z=" << e.label.z << " c=" << e.label.c << " k_norm " << format_g12(e.k_norm) << "\n";
    out << "c " << format_g12(rep.c) << "\n";

    if (o.nested) {
      std::vector<std::size_t> dims = o.nested_dims;
      if (dims.empty() && prob.nested_dims) dims = *prob.nested_dims;
      if (dims.empty()) {
        err << "error: --nested needs nested_dims in the problem file or --nested-dims\n";
        return kUsage;
      }
      const NestedEstimate est = estimate_c_nested(prob.povm, prob.pi, dims, o.tol, o.convergence_tol);
      for (std::size_t i = 0; i < est.dims.size(); ++i)
        out << "nested " << est.dims[i] << " " << format_g12(est.estimates[i]) << "\n";
      out << "converged " << (est.converged ? "true" : "false") << " convergence_tol "
          << format_g12(o.convergence_tol) << "\n";
    }
  } catch (const DomainError& e) {
    err << "invalid problem: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

inline int cmd_delta(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    out << format_g12(delta({o.w, o.c, o.z_size})) << "\n";
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

inline std::string curve_csv(const std::vector<CurvePoint>& rows) {
  std::string csv = "W,c,delta\n";
  for (const auto& r : rows)
    csv += format_g12(r.w) + "," + format_g12(r.c) + "," + format_g12(r.delta) + "\n";
  return csv;
}

inline int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<CurvePoint> rows;
  try {
    if (!(o.w_max >= 0.0 && o.w_max <= 1.0)) throw DomainError("--w-max must lie in [0, 1]");
    rows = delta_curve(o.c_list, o.z_size, uniform_grid(o.w_max, o.steps));
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!write_file(o.out_path, curve_csv(rows))) {
    err << "error: cannot write '" << o.out_path << "'\n";
    return kIo;
  }
  out << "wrote " << rows.size() << " rows to " << o.out_path << "\n";
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  cfg.dims = o.dims;
  cfg.trials = o.trials;
  cfg.base_seed = o.seed;
  cfg.numerical_slack = o.slack;
  cfg.tolerance = o.tol;
  if (o.suite != "all") cfg.suites = {o.suite};
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const SuiteReport report = run_suite(cfg);
  out << "seed " << cfg.base_seed << " slack " << format_g12(cfg.numerical_slack) << " rank_cutoff "
      << format_g12(cfg.tolerance.rank_cutoff) << " psd_clip " << format_g12(cfg.tolerance.psd_clip) << "\n";
  for (const auto& s : report.summaries)
    out << (s.failures == 0 ? "PASS " : "FAIL ") << s.name << " runs " << s.runs << " failures " << s.failures
        << " min_margin " << format_g12(s.min_margin) << " max_lhs_over_rhs " << format_g12(s.max_ratio) << "\n";
  if (!o.report_path.empty() && !write_file(o.report_path, serialize_report(report))) {
    err << "error: cannot write report '" << o.report_path << "'\n";
    return kIo;
  }
  return report.total_failures == 0 ? kOk : kChecksFailed;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Dimension-reduction correction terms for key-rate bounds"};
  app.require_subcommand(1);
  auto add_tol = [&o](CLI::App* sub) {
    sub->add_option("--rank-cutoff", o.tol.rank_cutoff, "relative support cutoff")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--psd-clip", o.tol.psd_clip, "relative PSD clip")->check(CLI::Range(0.0, 1.0));
  };

  auto* est = app.add_subcommand("c-estimate", "compute the contraction constant c of a problem file");
  est->add_option("problem", o.problem_path, "problem file (JSON)")->required();
  est->add_flag("--nested", o.nested, "also estimate c on nested coordinate subspaces");
  est->add_option("--nested-dims", o.nested_dims, "nested dimensions (overrides the file)")->delimiter(',');
  est->add_option("--convergence-tol", o.convergence_tol, "convergence threshold")
      ->check(CLI::PositiveNumber);
  add_tol(est);

  auto* del = app.add_subcommand("delta", "evaluate the correction term");
  del->add_option("--c", o.c, "contraction constant")->required()->check(CLI::Range(0.0, 1.0));
  del->add_option("--w", o.w, "weight bound W")->required()->check(CLI::Range(0.0, 1.0));
  del->add_option("--zsize", o.z_size, "|Z|")->required()->check(CLI::PositiveNumber);

  auto* cur = app.add_subcommand("curve", "write Delta(W) curves as CSV");
  cur->add_option("--c-list", o.c_list, "comma-separated c values")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  cur->add_option("--zsize", o.z_size, "|Z|")->required()->check(CLI::PositiveNumber);
  cur->add_option("--w-max", o.w_max, "largest W")->check(CLI::Range(0.0, 1.0));
  cur->add_option("--steps", o.steps, "number of W intervals")->check(CLI::PositiveNumber);
  cur->add_option("--out", o.out_path, "output CSV path")->required();

  auto* ver = app.add_subcommand("verify", "run the randomized inequality checks");
  ver->add_option("--suite", o.suite, "check name or 'all'");
  ver->add_option("--dims", o.dims, "comma-separated dimensions")->delimiter(',');
  ver->add_option("--trials", o.trials, "trials per check and dimension")->check(CLI::PositiveNumber);
  ver->add_option("--seed", o.seed, "base seed");
  ver->add_option("--slack", o.slack, "absolute numerical slack")->check(CLI::PositiveNumber);
  ver->add_option("--report", o.report_path, "report path (JSON)");
  add_tol(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    o.tol.validate();
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  if (*est) return cmd_c_estimate(o, out, err);
  if (*del) return cmd_delta(o, out, err);
  if (*cur) return cmd_curve(o, out, err);
  return cmd_verify(o, out, err);
}

}  // namespace dimred::cli
