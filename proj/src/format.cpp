// Copyright 2026 The ksapprox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ksa/format.hpp"

#include <charconv>
#include <cmath>

namespace ksa {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::kParse, "matrix must be a non-empty array of rows");
  ComplexMatrix m(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != j.size()) throw Error(ErrorCode::kParse, "matrix rows must be square");
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& z = row[k];
      if (!z.is_array() || z.size() != 2) throw Error(ErrorCode::kParse, "entries must be [re, im] pairs");
      m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

nlohmann::json povm_to_json(const Povm& p) {
  nlohmann::json out;
  out["pointers"] = p.pointers.n_pointers();
  out["levels"] = p.pointers.levels();
  out["outcomes"] = nlohmann::json::array();
  out["elements"] = nlohmann::json::object();
  out["kraus"] = nlohmann::json::object();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string label = p.label(i);
    out["outcomes"].push_back(label);
    out["elements"][label] = matrix_to_json(p.elements[i]);
    out["kraus"][label] = matrix_to_json(p.kraus[i]);
  }
  return out;
}

}  // namespace ksa
