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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "weaklp/core.hpp"
#include "weaklp/harness.hpp"

using namespace weaklp;

namespace {

AtomicVector atoms(std::initializer_list<double> vals) {
  AtomicVector out;
  out.atoms.resize(static_cast<std::int64_t>(vals.size()));
  std::int64_t i = 0;
  for (double v : vals) out.atoms(i++) = v;
  return out;
}

DyadicStep step(int k, int level, std::initializer_list<double> vals) {
  DyadicStep out;
  out.k = k;
  out.level = level;
  out.values.resize(static_cast<std::int64_t>(vals.size()));
  std::int64_t i = 0;
  for (double v : vals) out.values(i++) = v;
  return out;
}

}  // namespace

TEST_CASE("make_params") {
  CHECK(make_params(2.0).q == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(make_params(3.0).q == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(std::fabs(1.0 / make_params(1.7).p + 1.0 / make_params(1.7).q - 1.0) <
        1e-15);
  CHECK_THROWS_AS(make_params(1.0), std::domain_error);
  CHECK_THROWS_AS(make_params(0.5), std::domain_error);
  CHECK_THROWS_AS(make_params(std::numeric_limits<double>::infinity()),
                  std::domain_error);
  CHECK_THROWS_AS(make_params(std::nan("")), std::domain_error);
}

TEST_CASE("rearrange") {
  const auto prof = rearrange(atoms({1, 3, 2}));
  REQUIRE(prof.pieces.size() == 3);
  CHECK(prof.pieces[0].value == 3);
  CHECK(prof.pieces[1].value == 2);
  CHECK(prof.pieces[2].value == 1);
  CHECK(prof.pieces[0].mass == 1);

  const auto merged = merge_pieces(rearrange(atoms({-2, 2})));
  REQUIRE(merged.pieces.size() == 1);
  CHECK(merged.pieces[0].value == 2);
  CHECK(merged.pieces[0].mass == 2);

  const auto sprof = rearrange(step(1, 1, {0, 5}));
  REQUIRE(sprof.pieces.size() == 2);
  CHECK(sprof.pieces[0].value == 5);
  CHECK(sprof.pieces[0].mass == 0.5);
  CHECK(sprof.pieces[1].value == 0);
}

TEST_CASE("weak_norm") {
  const Params P = make_params(2.0);
  CHECK(weak_norm(atoms({3, 1, 1}), P) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(weak_norm(atoms({0, 0, 0}), P) == 0.0);
  CHECK(weak_norm(AtomicVector{}, P) == 0.0);
  // indicator of [0, 1/2] on [0, 1]
  CHECK(weak_norm(step(1, 1, {1, 0}), P) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("quasi_norm") {
  const Params P = make_params(2.0);
  AtomicVector extremal;
  extremal.atoms.resize(100);
  for (int j = 1; j <= 100; ++j) extremal.atoms(j - 1) = std::pow(j, -0.5);
  CHECK(quasi_norm(extremal, P) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quasi_norm(atoms({3, 1, 1}), P) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(quasi_norm(step(1, 1, {1, 0}), P) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("lq1_norm") {
  CHECK(lq1_norm(atoms({1, 1}), make_params(2.0)) ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lq1_norm(atoms({1}), make_params(3.0)) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(lq1_norm(atoms({0, 0}), make_params(2.0)) == 0.0);
  CHECK(lq1_norm(atoms({3, 1, 1}), make_params(2.0)) ==
        doctest::Approx(4 + 2 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("pairing") {
  CHECK(pairing(atoms({1, 2}), atoms({3, 4})) == 11.0);
  CHECK(pairing(step(1, 1, {1, 1}), step(1, 1, {1, 1})) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pairing(atoms({1, 0}), atoms({0, 1})) == 0.0);
  CHECK_THROWS_AS(pairing(atoms({1}), atoms({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(pairing(step(1, 1, {1, 1}), step(2, 0, {1, 1})),
                  std::invalid_argument);
}

TEST_CASE("cond_expect") {
  const auto half = cond_expect(step(1, 1, {2, 4}), 0);
  CHECK(half.level == 0);
  CHECK(half.values(0) == 3.0);

  const auto same = cond_expect(step(1, 1, {2, 4}), 1);
  CHECK(same.values(0) == 2.0);
  CHECK(same.values(1) == 4.0);

  const auto pairs = cond_expect(step(1, 2, {1, 3, 5, 7}), 1);
  CHECK(pairs.values(0) == 2.0);
  CHECK(pairs.values(1) == 6.0);

  CHECK_THROWS_AS(cond_expect(step(1, 1, {1, 2}), 2), std::invalid_argument);
}

TEST_CASE("rearrangement invariance is exact") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto f =
        gen_atoms(rng(), 1 + static_cast<int>(rng() % 20),
                  rep % 2 ? Distribution::kUniform : Distribution::kHeavyTail);
    AtomicVector g = f;
    std::shuffle(g.atoms.data(), g.atoms.data() + g.atoms.size(), rng);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      CHECK(weak_norm(f, P) == weak_norm(g, P));
      CHECK(quasi_norm(f, P) == quasi_norm(g, P));
      CHECK(lq1_norm(f, P) == lq1_norm(g, P));
    }
  }
}

TEST_CASE("norm axioms for the weak norm") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int len = 1 + static_cast<int>(rng() % 16);
    const auto f = gen_atoms(rng(), len, Distribution::kUniform);
    const auto g = gen_atoms(rng(), len, Distribution::kUniform);
    const double c = 3.0 * (static_cast<double>(rng() % 1000) / 500.0 - 1.0);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      AtomicVector cf{c * f.atoms};
      CHECK(std::fabs(weak_norm(cf, P) - std::fabs(c) * weak_norm(f, P)) <=
            1e-12 * std::max(1.0, weak_norm(f, P)));
      AtomicVector sum{f.atoms + g.atoms};
      CHECK(weak_norm(sum, P) <= weak_norm(f, P) + weak_norm(g, P) + 1e-12);
    }
  }
}

TEST_CASE("sandwich between quasi norm and weak norm") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const auto f = gen_atoms(rng(), 1 + static_cast<int>(rng() % 24),
                             Distribution::kHeavyTail);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      const double W = weak_norm(f, P);
      const double Q = quasi_norm(f, P);
      CHECK(Q <= W + 1e-12);
      CHECK(W <= P.q * Q + 1e-12);
    }
  }
}

TEST_CASE("pairing bounds") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int len = 1 + static_cast<int>(rng() % 16);
    const auto f = gen_atoms(rng(), len, Distribution::kUniform);
    const auto g = gen_atoms(rng(), len, Distribution::kUniform);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      CHECK(std::fabs(pairing(f, g)) <=
            quasi_norm(f, P) * lq1_norm(g, P) + 1e-9);
    }
  }
}

TEST_CASE("upper p-estimate for disjoint supports") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 100; ++rep) {
    const int lf = 1 + static_cast<int>(rng() % 12);
    const int lg = 1 + static_cast<int>(rng() % 12);
    const auto f = gen_atoms(rng(), lf, Distribution::kHeavyTail);
    const auto g = gen_atoms(rng(), lg, Distribution::kHeavyTail);
    AtomicVector sum{Eigen::ArrayXd::Zero(lf + lg)};
    sum.atoms.head(lf) = f.atoms;
    sum.atoms.tail(lg) = g.atoms;
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      CHECK(std::pow(weak_norm(sum, P), p) <=
            std::pow(weak_norm(f, P), p) + std::pow(weak_norm(g, P), p) +
                1e-9);
    }
  }
}

TEST_CASE("conditional expectation contracts the weak norm") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 60; ++rep) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int level = 1 + static_cast<int>(rng() % 5);
    const auto f = gen_step(rng(), k, level, Distribution::kHeavyTail);
    const int n = static_cast<int>(rng() % (level + 1));
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      CHECK(weak_norm(cond_expect(f, n), P) <= weak_norm(f, P) + 1e-12);
    }
  }
}

TEST_CASE("merging pieces changes no norm") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 60; ++rep) {
    const auto f = gen_atoms(rng(), 1 + static_cast<int>(rng() % 10),
                             Distribution::kSparse);
    const auto prof = rearrange(f);
    const auto merged = merge_pieces(prof);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      CHECK(weak_norm(prof, P) == doctest::Approx(weak_norm(merged, P)));
      CHECK(quasi_norm(prof, P) == quasi_norm(merged, P));
      CHECK(lq1_norm(prof, P) ==
            doctest::Approx(lq1_norm(merged, P)).epsilon(1e-13));
    }
  }
}

TEST_CASE("weak norm agrees with subset enumeration") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = gen_atoms(rng(), 1 + static_cast<int>(rng() % 12),
                             Distribution::kHeavyTail);
    for (double p : {1.5, 2.0, 3.0}) {
      const Params P = make_params(p);
      const double o = oracle_norm(f, P);
      CHECK(std::fabs(weak_norm(f, P) - o) <= 1e-9 * std::max(1.0, o));
    }
  }
}
