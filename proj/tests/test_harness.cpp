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

#include <doctest.h>

#include <cmath>
#include <string>

#include "weaklp/harness.hpp"
#include "weaklp/json_io.hpp"

using namespace weaklp;

TEST_CASE("generators are deterministic") {
  for (auto dist : {Distribution::kUniform, Distribution::kHeavyTail,
                    Distribution::kSparse}) {
    const auto a = gen_atoms(42, 9, dist);
    const auto b = gen_atoms(42, 9, dist);
    CHECK((a.atoms == b.atoms).all());

    const auto f = gen_step(7, 2, 3, dist);
    const auto g = gen_step(7, 2, 3, dist);
    CHECK(f.k == 2);
    CHECK(f.level == 3);
    CHECK(f.values.size() == 16);
    CHECK((f.values == g.values).all());

    const auto x = gen_stack(11, 3, 2, dist);
    const auto y = gen_stack(11, 3, 2, dist);
    REQUIRE(x.levels.size() == 3);
    for (int n = 0; n <= 2; ++n) {
      CHECK(x.levels[n].size() == cell_count(3, n));
      CHECK((x.levels[n] == y.levels[n]).all());
    }
  }

  CHECK(gen_atoms(1, 0, Distribution::kUniform).atoms.size() == 0);
  const auto sparse = gen_atoms(5, 10, Distribution::kSparse);
  CHECK((sparse.atoms != 0.0).count() <= 2);
  CHECK_THROWS_AS(gen_atoms(1, -1, Distribution::kUniform),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_step(1, 0, 1, Distribution::kUniform),
                  std::invalid_argument);
}

TEST_CASE("oracle_norm") {
  const Params P = make_params(2.0);
  AtomicVector f;
  f.atoms.resize(3);
  f.atoms << 3, 1, 1;
  CHECK(oracle_norm(f, P) == doctest::Approx(3.0).epsilon(1e-12));

  AtomicVector ones;
  ones.atoms = Eigen::ArrayXd::Ones(4);
  CHECK(oracle_norm(ones, P) == doctest::Approx(2.0).epsilon(1e-12));

  AtomicVector single;
  single.atoms = Eigen::ArrayXd::Constant(1, -7.0);
  CHECK(oracle_norm(single, P) == doctest::Approx(7.0).epsilon(1e-15));

  AtomicVector big;
  big.atoms = Eigen::ArrayXd::Ones(21);
  CHECK_THROWS_AS(oracle_norm(big, P), std::invalid_argument);
}

TEST_CASE("run_suite rejects bad configuration") {
  TrialConfig config;
  config.suite = "no_such_suite";
  CHECK_THROWS_WITH_AS(run_suite(config),
                       doctest::Contains("norm_oracle"),
                       std::invalid_argument);

  config.suite = "sandwich";
  config.trials = 0;
  CHECK_THROWS_AS(run_suite(config), std::invalid_argument);

  config.trials = 1;
  config.p_values = {1.0};
  CHECK_THROWS_AS(run_suite(config), std::invalid_argument);
}

TEST_CASE("every suite passes a short run") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    TrialConfig config;
    config.suite = name;
    config.p_values = {1.5, 2.0, 3.0};
    config.trials = 60;
    config.seed = 2026;
    const auto report = run_suite(config);
    CHECK(report.records.size() == 60);
    CHECK(report.min_margin >= 0.0);
    CHECK(report.pass);
  }
}

TEST_CASE("suite reports are deterministic modulo timing") {
  TrialConfig config;
  config.suite = "t_embed";
  config.trials = 25;
  config.seed = 99;
  auto a = run_suite(config);
  auto b = run_suite(config);
  a.wall_ms = b.wall_ms = 0.0;
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(report_csv(a) == report_csv(b));
}

TEST_CASE("chain_report") {
  const auto a = chain_report(2.0, {2, 4}, 7, 8);
  const auto b = chain_report(2.0, {2, 4}, 7, 8);
  CHECK(to_json(a).dump() == to_json(b).dump());  // byte-identical

  REQUIRE(a.links.size() == 5);
  CHECK(a.half_sizes == std::vector<int>{1, 2});
  for (const auto& link : a.links) {
    CAPTURE(link.name);
    CHECK(link.uniform);
    CHECK(link.pass);
    CHECK(link.max_full <= link.bound + 1e-9);
  }
  CHECK(a.pass);

  CHECK_THROWS_AS(chain_report(2.0, {}, 0, 4), std::invalid_argument);
}
