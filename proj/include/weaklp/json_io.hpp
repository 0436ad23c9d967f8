// Copyright 2026 The weaklp authors
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

#ifndef WEAKLP_JSON_IO_HPP_
#define WEAKLP_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "weaklp/core.hpp"
#include "weaklp/embeddings.hpp"
#include "weaklp/harness.hpp"

namespace weaklp {

// Wire formats:
//   AtomicVector  {"atoms": [..]}
//   DyadicStep    {"k": int, "level": int, "values": [..]}
//   LevelStack    {"k": int, "N": int, "levels": [[..], ..]}
//   BlockLayout   {"N": int, "m": [..]}          (offsets are derived)
// Parsers throw std::invalid_argument naming the offending field.

nlohmann::json to_json(const AtomicVector& a);
nlohmann::json to_json(const DyadicStep& f);
nlohmann::json to_json(const LevelStack& x);
nlohmann::json to_json(const BlockLayout& layout);
nlohmann::json to_json(const SuiteReport& report);
nlohmann::json to_json(const ChainReport& report);

AtomicVector atomic_from_json(const nlohmann::json& j);
DyadicStep step_from_json(const nlohmann::json& j);
LevelStack stack_from_json(const nlohmann::json& j);
BlockLayout layout_from_json(const nlohmann::json& j);

/// True if the value looks like an AtomicVector rather than a DyadicStep.
bool is_atomic_json(const nlohmann::json& j);

/// SuiteReport as CSV, one record per row.
std::string report_csv(const SuiteReport& report);

}  // namespace weaklp

#endif  // WEAKLP_JSON_IO_HPP_
