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

#include "weaklp/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace weaklp {

namespace {

using nlohmann::json;

json array_to_json(const Eigen::ArrayXd& v) {
  json out = json::array();
  for (std::int64_t i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::ArrayXd array_from_json(const json& j, const char* field) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("field '") + field +
                                "' must be an array of numbers");
  }
  Eigen::ArrayXd out(j.size());
  std::int64_t i = 0;
  for (const auto& entry : j) {
    if (!entry.is_number()) {
      throw std::invalid_argument(std::string("field '") + field +
                                  "' must contain only numbers");
    }
    out(i++) = entry.get<double>();
  }
  return out;
}

const json& require(const json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("missing field '") + field + "'");
  }
  return *it;
}

int require_int(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) {
    throw std::invalid_argument(std::string("field '") + field +
                                "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

json to_json(const AtomicVector& a) {
  return json{{"atoms", array_to_json(a.atoms)}};
}

json to_json(const DyadicStep& f) {
  return json{
      {"k", f.k}, {"level", f.level}, {"values", array_to_json(f.values)}};
}

json to_json(const LevelStack& x) {
  json levels = json::array();
  for (const auto& level : x.levels) levels.push_back(array_to_json(level));
  return json{{"k", x.k}, {"N", x.N}, {"levels", levels}};
}

json to_json(const BlockLayout& layout) {
  return json{{"N", layout.N}, {"m", layout.m}};
}

json to_json(const SuiteReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back(json{{"trial", r.trial},
                           {"p", r.p},
                           {"digest", r.digest},
                           {"measured", r.measured},
                           {"bound", r.bound},
                           {"margin", r.margin},
                           {"pass", r.pass}});
  }
  return json{{"suite", report.suite},
              {"p", report.p_values.front()},
              {"p_values", report.p_values},
              {"seed", report.seed},
              {"trials", report.trials},
              {"pass", report.pass},
              {"max_ratio", report.max_ratio},
              {"min_margin", report.min_margin},
              {"records", std::move(records)},
              {"wall_ms", report.wall_ms}};
}

json to_json(const ChainReport& report) {
  json links = json::array();
  for (const auto& link : report.links) {
    links.push_back(json{{"name", link.name},
                         {"bound", link.bound},
                         {"constants", link.constants},
                         {"half_constants", link.half_constants},
                         {"max_full", link.max_full},
                         {"max_half", link.max_half},
                         {"uniform", link.uniform},
                         {"pass", link.pass}});
  }
  return json{{"p", report.p},
              {"seed", report.seed},
              {"sizes", report.sizes},
              {"half_sizes", report.half_sizes},
              {"links", std::move(links)},
              {"pass", report.pass}};
}

AtomicVector atomic_from_json(const json& j) {
  return AtomicVector{array_from_json(require(j, "atoms"), "atoms")};
}

DyadicStep step_from_json(const json& j) {
  DyadicStep f;
  f.k = require_int(j, "k");
  f.level = require_int(j, "level");
  f.values = array_from_json(require(j, "values"), "values");
  if (f.k < 1 || f.level < 0 || f.values.size() != cell_count(f.k, f.level)) {
    throw std::invalid_argument(
        "field 'values' must hold exactly k*2^level entries");
  }
  return f;
}

LevelStack stack_from_json(const json& j) {
  LevelStack x;
  x.k = require_int(j, "k");
  x.N = require_int(j, "N");
  const json& levels = require(j, "levels");
  if (!levels.is_array() ||
      levels.size() != static_cast<std::size_t>(x.N) + 1) {
    throw std::invalid_argument("field 'levels' must hold N+1 arrays");
  }
  for (const auto& level : levels) {
    x.levels.push_back(array_from_json(level, "levels"));
  }
  for (int n = 0; n <= x.N; ++n) {
    if (x.levels[n].size() != cell_count(x.k, n)) {
      throw std::invalid_argument("field 'levels' has a level of wrong size");
    }
  }
  return x;
}

BlockLayout layout_from_json(const json& j) {
  const int N = require_int(j, "N");
  BlockLayout layout = build_layout(N);
  if (j.contains("m")) {
    const json& m = j.at("m");
    if (!m.is_array() || m.size() != static_cast<std::size_t>(N) + 1) {
      throw std::invalid_argument("field 'm' must hold N+1 integers");
    }
    std::int64_t offset = 0;
    std::int64_t capacity = 0;
    for (int n = 0; n <= N; ++n) {
      layout.m[n] = m[n].get<std::int64_t>();
      if (layout.m[n] < 1 || (n > 0 && layout.m[n] < layout.m[n - 1] + 1) ||
          (n > 0 && layout.m[n] < capacity)) {
        throw std::invalid_argument(
            "field 'm' violates the block-size recurrence");
      }
      layout.offsets[n] = offset;
      const std::int64_t span = (std::int64_t{1} << n) * layout.m[n];
      offset += span;
      capacity += span;
    }
    layout.total_length = offset;
  }
  return layout;
}

bool is_atomic_json(const json& j) { return j.is_object() && j.contains("atoms"); }

std::string report_csv(const SuiteReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,p,digest,measured,bound,margin,pass\n";
  for (const auto& r : report.records) {
    os << r.trial << "," << r.p << "," << r.digest << "," << r.measured << ","
       << r.bound << "," << r.margin << "," << (r.pass ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace weaklp
