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

// JSON problem files:
//
//   {
//     "dim": 2,
//     "projector": {"indices": [0]}            or {"matrix": M},
//     "povm": [{"z": 0, "c": 0, "matrix": M}, ...],
//     "nested_dims": [8, 16]                   (optional)
//   }
//
// where M is a list of rows and each entry is [re, im].
//
// Loading is two-staged: parse_problem checks structure (ParseError), and
// build_problem checks the operators themselves (DomainError).

#include "dimred/linalg.hpp"
#include "dimred/quantum.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dimred {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemElement {
  std::size_t z = 0;
  std::size_t c = 0;
  ComplexMatrix matrix;
};

struct ProblemFile {
  std::size_t dim = 0;
  std::variant<std::vector<std::size_t>, ComplexMatrix> projector;
  std::vector<ProblemElement> povm;
  std::optional<std::vector<std::size_t>> nested_dims;
};

struct Problem {
  Povm povm;
  Projector pi;
  std::optional<std::vector<std::size_t>> nested_dims;
};

namespace detail {

using nlohmann::json;

inline ComplexMatrix parse_matrix(const json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array() || j.size() != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = j[r];
    const std::string rw = where + ", row " + std::to_string(r);
    if (!row.is_array() || row.size() != dim)
      throw ParseError(rw + ": expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(rw + ", column " + std::to_string(c) + ": entry must be [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::size_t parse_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ParseError(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline std::vector<std::size_t> parse_count_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_count(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");

  ProblemFile pf;
  if (!doc.contains("dim")) throw ParseError("missing field 'dim'");
  pf.dim = detail::parse_count(doc["dim"], "dim");
  if (pf.dim < 1) throw ParseError("dim: must be at least 1");

  if (!doc.contains("projector") || !doc["projector"].is_object())
    throw ParseError("missing object field 'projector'");
  const json& pj = doc["projector"];
  if (pj.contains("indices") == pj.contains("matrix"))
    throw ParseError("projector: exactly one of 'indices' or 'matrix' is required");
  if (pj.contains("indices"))
    pf.projector = detail::parse_count_list(pj["indices"], "projector.indices");
  else
    pf.projector = detail::parse_matrix(pj["matrix"], pf.dim, "projector.matrix");

  if (!doc.contains("povm") || !doc["povm"].is_array() || doc["povm"].empty())
    throw ParseError("missing non-empty list field 'povm'");
  const json& pv = doc["povm"];
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const std::string where = "povm[" + std::to_string(i) + "]";
    const json& e = pv[i];
    if (!e.is_object()) throw ParseError(where + ": expected an object");
    for (const char* key : {"z", "c", "matrix"})
      if (!e.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    ProblemElement el;
    el.z = detail::parse_count(e["z"], where + ".z");
    el.c = detail::parse_count(e["c"], where + ".c");
    el.matrix = detail::parse_matrix(e["matrix"], pf.dim, where + ".matrix");
    pf.povm.push_back(std::move(el));
  }

  if (doc.contains("nested_dims")) pf.nested_dims = detail::parse_count_list(doc["nested_dims"], "nested_dims");
  return pf;
}

/// Canonical serialization; doubles are written with round-trip precision.
inline std::string serialize_problem(const ProblemFile& pf) {
  using detail::json;
  json doc = json::object();
  doc["dim"] = pf.dim;
  if (const auto* idx = std::get_if<std::vector<std::size_t>>(&pf.projector))
    doc["projector"] = {{"indices", *idx}};
  else
    doc["projector"] = {{"matrix", detail::matrix_to_json(std::get<ComplexMatrix>(pf.projector))}};
  json povm = json::array();
  for (const auto& el : pf.povm)
    povm.push_back({{"z", el.z}, {"c", el.c}, {"matrix", detail::matrix_to_json(el.matrix)}});
  doc["povm"] = std::move(povm);
  if (pf.nested_dims) doc["nested_dims"] = *pf.nested_dims;
  return doc.dump(2) + "\n";
}

/// Validates operators and label structure. |Z| and |C| are 1 + the largest
/// label present; a skipped z index is rejected because it would change
/// log2|Z| in the correction.
inline Problem build_problem(const ProblemFile& pf, const Tolerance& tol = {}) {
  const auto dim = static_cast<Eigen::Index>(pf.dim);
  std::size_t z_size = 0, c_size = 0;
  std::vector<bool> z_used;
  for (const auto& el : pf.povm) {
    z_size = std::max(z_size, el.z + 1);
    c_size = std::max(c_size, el.c + 1);
  }
  z_used.assign(z_size, false);
  for (const auto& el : pf.povm) z_used[el.z] = true;
  for (std::size_t z = 0; z < z_size; ++z)
    if (!z_used[z]) throw DomainError("povm: key symbol z=" + std::to_string(z) + " is skipped");

  std::vector<Povm::Element> elements;
  for (const auto& el : pf.povm) elements.push_back({KeyLabel{el.z, el.c}, el.matrix});
  Povm povm(std::move(elements), z_size, c_size, tol);

  std::optional<Projector> pi;
  if (const auto* idx = std::get_if<std::vector<std::size_t>>(&pf.projector)) {
    std::vector<Eigen::Index> ii(idx->begin(), idx->end());
    pi = Projector::from_indices(dim, ii);
  } else {
    pi = Projector::from_matrix(std::get<ComplexMatrix>(pf.projector));
  }
  return {std::move(povm), std::move(*pi), pf.nested_dims};
}

}  // namespace dimred
