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

#pragma once

#include <string>

#include "json.hpp"

#include "ksa/measmodel.hpp"

namespace ksa {

/// Shortest round-trippable decimal, locale independent.
std::string format_double(double v);

/// Row-major array of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// {"pointers": n, "levels": k, "outcomes": [...], "elements": {label: matrix}, "kraus": {...}}
nlohmann::json povm_to_json(const Povm& p);

}  // namespace ksa
