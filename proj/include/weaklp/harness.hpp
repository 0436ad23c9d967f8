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

#ifndef WEAKLP_HARNESS_HPP_
#define WEAKLP_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "weaklp/core.hpp"
#include "weaklp/embeddings.hpp"

namespace weaklp {

enum class Distribution { kUniform, kHeavyTail, kSparse };

struct SizeCaps {
  int max_atoms = 12;
  int max_level = 8;
  int max_k = 4;
};

struct TrialConfig {
  std::string suite;
  std::vector<double> p_values = {2.0};
  int trials = 100;
  std::uint64_t seed = 0;
  SizeCaps caps;
};

/// One trial of an inequality suite.  `margin` already folds in the
/// suite's slack, so the trial passes iff margin >= 0.
struct TrialRecord {
  int trial = 0;
  double p = 2.0;
  std::string digest;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = true;
};

struct SuiteReport {
  std::string suite;
  std::vector<double> p_values;
  std::uint64_t seed = 0;
  int trials = 0;
  bool pass = true;
  double max_ratio = 0.0;   // suite-specific headline ratio, see run_suite
  double min_margin = 0.0;
  std::vector<TrialRecord> records;
  double wall_ms = 0.0;
};

/// Deterministic generators: same arguments, same output.
AtomicVector gen_atoms(std::uint64_t seed, int length, Distribution dist);
DyadicStep gen_step(std::uint64_t seed, int k, int level, Distribution dist);
LevelStack gen_stack(std::uint64_t seed, int k, int N, Distribution dist);

/// Literal enumeration of sup_B (sum over B of |a|) / |B|^{1/q} over all
/// nonempty subsets.  Throws std::invalid_argument for length > 20.
double oracle_norm(const AtomicVector& a, const Params& params);

const std::vector<std::string>& suite_names();

/// Runs a named inequality suite.  Trials cycle through
/// config.p_values; a failing trial is recorded, never re-rolled.
/// Throws std::invalid_argument listing the valid names for an unknown
/// suite.
SuiteReport run_suite(const TrialConfig& config);

/// One link of the embedding chain, measured at every requested size.
struct ChainLink {
  std::string name;
  double bound = 0.0;
  std::vector<double> constants;       // per entry of sizes
  std::vector<double> half_constants;  // per entry of halved sizes
  double max_full = 0.0;
  double max_half = 0.0;
  bool uniform = true;  // max_full <= max_half + slack
  bool pass = true;
};

struct ChainReport {
  double p = 2.0;
  std::uint64_t seed = 0;
  std::vector<int> sizes;
  std::vector<int> half_sizes;
  std::vector<ChainLink> links;
  bool pass = true;
};

/// Measures the sampled constant of every link of the embedding chain at
/// each truncation size and at each halved size.  Probes are generated
/// at a size-independent base resolution so a healthy implementation
/// shows no growth across sizes.  The block-embedding and
/// block-projection links are evaluated at size min(N, 5) to keep the
/// flat index space at desk scale.
ChainReport chain_report(double p, const std::vector<int>& sizes,
                         std::uint64_t seed = 0, int trials = 32);

}  // namespace weaklp

#endif  // WEAKLP_HARNESS_HPP_
