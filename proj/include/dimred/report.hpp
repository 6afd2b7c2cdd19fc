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

// JSON serialization of verification reports. Output depends only on the
// report contents, so identical configs give byte-identical files.

#include "dimred/oracle.hpp"

#include <json.hpp>

#include <string>

namespace dimred {

inline nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["check"] = r.name;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["dim"] = r.instance.dim;
  j["rho_rank"] = r.instance.rho_rank;
  j["pi_rank"] = r.instance.pi_rank;
  j["z_size"] = r.instance.z_size;
  j["c_size"] = r.instance.c_size;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"r", w.r}, {"s", w.s}, {"weight_bound", w.weight_bound}, {"k_norm", w.k_norm}};
  }
  return j;
}

inline nlohmann::ordered_json to_json(const SuiteReport& report) {
  nlohmann::ordered_json j;
  const auto& cfg = report.config;
  j["config"] = {{"dims", cfg.dims},
                 {"trials", cfg.trials},
                 {"seed", cfg.base_seed},
                 {"slack", cfg.numerical_slack},
                 {"rank_cutoff", cfg.tolerance.rank_cutoff},
                 {"psd_clip", cfg.tolerance.psd_clip},
                 {"suites", cfg.suites}};
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({{"check", s.name},
                         {"runs", s.runs},
                         {"failures", s.failures},
                         {"min_margin", s.min_margin},
                         {"max_lhs_over_rhs", s.max_ratio}});
  }
  j["summary"] = std::move(summaries);
  j["total_failures"] = report.total_failures;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& r : report.results) results.push_back(to_json(r));
  j["results"] = std::move(results);
  return j;
}

inline std::string serialize_report(const SuiteReport& report) { return to_json(report).dump(1) + "\n"; }

}  // namespace dimred
