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

#include "weaklp/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace weaklp {

namespace {

constexpr double kTight = 1e-12;  // algebraic identities
constexpr double kLoose = 1e-9;   // norm inequalities with cancellation

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double u01() { return (engine() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * u01() - 1.0; }
  int range(int lo, int hi) {  // inclusive, small spans
    return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(
                                     hi - lo + 1));
  }
};

const char* dist_name(Distribution d) {
  switch (d) {
    case Distribution::kUniform: return "uniform";
    case Distribution::kHeavyTail: return "heavy_tail";
    case Distribution::kSparse: return "sparse";
  }
  return "?";
}

Distribution dist_cycle(int t) {
  switch (t % 3) {
    case 0: return Distribution::kUniform;
    case 1: return Distribution::kHeavyTail;
    default: return Distribution::kSparse;
  }
}

Eigen::ArrayXd fill_values(Rng& rng, std::int64_t length, Distribution dist) {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(length);
  switch (dist) {
    case Distribution::kUniform:
      for (std::int64_t i = 0; i < length; ++i) v(i) = rng.symmetric();
      break;
    case Distribution::kHeavyTail:
      for (std::int64_t i = 0; i < length; ++i) {
        const double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
        const double u = std::max(rng.u01(), 1e-12);
        v(i) = sign * std::min(100.0, std::pow(u, -0.7));
      }
      break;
    case Distribution::kSparse: {
      const auto nnz = std::min<std::int64_t>(
          length, static_cast<std::int64_t>(rng.engine() % 3));
      for (std::int64_t s = 0; s < nnz; ++s) {
        const auto pos = static_cast<std::int64_t>(
            rng.engine() % static_cast<std::uint64_t>(length));
        v(pos) = rng.symmetric();
      }
      break;
    }
  }
  return v;
}

/// Represents a step at a finer dyadic level; values repeat.
DyadicStep refine(const DyadicStep& f, int level) {
  if (level < f.level) {
    throw std::invalid_argument("refine: target level coarser than source");
  }
  if (level == f.level) return f;
  const std::int64_t rep = std::int64_t{1} << (level - f.level);
  DyadicStep out;
  out.k = f.k;
  out.level = level;
  out.values.resize(f.values.size() * rep);
  for (std::int64_t j = 0; j < f.values.size(); ++j) {
    out.values.segment(j * rep, rep) = f.values(j);
  }
  return out;
}

LevelStack canonical_u(int k, int N, const Params& params) {
  LevelStack u;
  u.k = k;
  u.N = N;
  u.levels.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    u.levels[n] = Eigen::ArrayXd::Constant(
        cell_count(k, n),
        std::pow(static_cast<double>(cell_count(k, n)), -1.0 / params.p));
  }
  return u;
}

double stack_max_diff(const LevelStack& a, const LevelStack& b) {
  double d = 0.0;
  for (int n = 0; n <= a.N; ++n) {
    d = std::max(d, (a.levels[n] - b.levels[n]).abs().maxCoeff());
  }
  return d;
}

double guarded_ratio(double num, double den) {
  return den > 0.0 ? num / den : (num > 0.0 ? num / kTight : 0.0);
}

struct Outcome {
  std::string digest;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double ratio = 0.0;
};

std::string digest_of(std::uint64_t seed, std::initializer_list<
                          std::pair<const char*, std::int64_t>> fields,
                      const char* dist = nullptr) {
  std::ostringstream os;
  os << "seed=0x" << std::hex << seed << std::dec;
  for (const auto& [name, value] : fields) os << ";" << name << "=" << value;
  if (dist) os << ";dist=" << dist;
  return os.str();
}

// ---------------------------------------------------------------------
// Suites.  Every margin folds in the suite's slack: pass iff margin >= 0.
// ---------------------------------------------------------------------

Outcome suite_norm_oracle(Rng& rng, const Params& P, const SizeCaps& caps,
                          int trial) {
  const int len = rng.range(1, std::min(caps.max_atoms, 12));
  const Distribution dist = dist_cycle(trial);
  const std::uint64_t s = rng.engine();
  const AtomicVector a = gen_atoms(s, len, dist);
  const double w = weak_norm(a, P);
  const double o = oracle_norm(a, P);
  Outcome out;
  out.digest = digest_of(s, {{"len", len}}, dist_name(dist));
  out.measured = std::fabs(w - o) / std::max(1.0, o);
  out.bound = 0.0;
  out.margin = kLoose - out.measured;
  out.ratio = o > 0.0 ? w / o : 1.0;
  return out;
}

Outcome suite_sandwich(Rng& rng, const Params& P, const SizeCaps& caps,
                       int trial) {
  const Distribution dist = dist_cycle(trial);
  const std::uint64_t s = rng.engine();
  Outcome out;
  double W, Q;
  if (trial % 2 == 0) {
    const int len = rng.range(1, std::max(2, 4 * caps.max_atoms));
    const AtomicVector f = gen_atoms(s, len, dist);
    W = weak_norm(f, P);
    Q = quasi_norm(f, P);
    out.digest = digest_of(s, {{"len", len}, {"kind", 0}}, dist_name(dist));
  } else {
    const int k = rng.range(1, caps.max_k);
    const int level = rng.range(0, std::min(caps.max_level, 6));
    const DyadicStep f = gen_step(s, k, level, dist);
    W = weak_norm(f, P);
    Q = quasi_norm(f, P);
    out.digest =
        digest_of(s, {{"k", k}, {"level", level}, {"kind", 1}},
                  dist_name(dist));
  }
  out.measured = W;
  out.bound = P.q * Q;
  out.margin = std::min(W - Q + kTight, P.q * Q - W + kTight);
  out.ratio = Q > 0.0 ? W / Q : 1.0;
  return out;
}

Outcome suite_p_estimate(Rng& rng, const Params& P, const SizeCaps& caps,
                         int trial) {
  const Distribution dist = dist_cycle(trial);
  const int lf = rng.range(1, std::max(2, 2 * caps.max_atoms));
  const int lg = rng.range(1, std::max(2, 2 * caps.max_atoms));
  const std::uint64_t sf = rng.engine();
  const std::uint64_t sg = rng.engine();
  const AtomicVector f = gen_atoms(sf, lf, dist);
  const AtomicVector g = gen_atoms(sg, lg, dist);
  AtomicVector sum{Eigen::ArrayXd::Zero(lf + lg)};
  sum.atoms.head(lf) = f.atoms;
  sum.atoms.tail(lg) = g.atoms;
  Outcome out;
  out.digest = digest_of(sf, {{"lf", lf}, {"lg", lg}}, dist_name(dist));
  out.measured = std::pow(weak_norm(sum, P), P.p);
  out.bound = std::pow(weak_norm(f, P), P.p) + std::pow(weak_norm(g, P), P.p);
  out.margin = out.bound - out.measured + kLoose;
  out.ratio = guarded_ratio(out.measured, out.bound);
  return out;
}

Outcome suite_pairing(Rng& rng, const Params& P, const SizeCaps& caps,
                      int trial) {
  const Distribution dist = dist_cycle(trial);
  const int len = rng.range(1, std::max(2, 2 * caps.max_atoms));
  const std::uint64_t sf = rng.engine();
  const std::uint64_t sg = rng.engine();
  const AtomicVector f = gen_atoms(sf, len, dist);
  const AtomicVector g = gen_atoms(sg, len, Distribution::kUniform);

  const double pair = pairing(f, g);
  const double holder = quasi_norm(f, P) * lq1_norm(g, P);

  // Lower bound via signed top-j indicators.
  std::vector<int> order(len);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return std::fabs(f.atoms(lhs)) > std::fabs(f.atoms(rhs));
  });
  AtomicVector b{Eigen::ArrayXd::Zero(len)};
  double best = 0.0;
  for (int j = 0; j < len; ++j) {
    const double v = f.atoms(order[j]);
    b.atoms(order[j]) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 1.0);
    const double denom = lq1_norm(b, P);
    best = std::max(best, pairing(f, b) / denom);
  }
  const double target = weak_norm(f, P) / P.q;

  Outcome out;
  out.digest = digest_of(sf, {{"len", len}}, dist_name(dist));
  out.measured = std::fabs(pair);
  out.bound = holder;
  out.margin = std::min(holder - std::fabs(pair) + kLoose,
                        best - target + kLoose);
  out.ratio = guarded_ratio(std::fabs(pair), holder);
  return out;
}

Outcome suite_boundf(Rng& rng, const Params& P, const SizeCaps& caps,
                     int trial) {
  const Distribution dist = dist_cycle(trial);
  const int k = rng.range(1, caps.max_k);
  const int level = rng.range(0, caps.max_level);
  const std::uint64_t s = rng.engine();
  const DyadicStep f = gen_step(s, k, level, dist);
  const double W = weak_norm(f, P);
  const LevelStack x = t_embed(f, P);
  double worst = 0.0;
  for (int n = 0; n <= x.N; ++n) {
    worst = std::max(worst, quasi_norm(AtomicVector{x.levels[n]}, P));
  }
  Outcome out;
  out.digest = digest_of(s, {{"k", k}, {"level", level}}, dist_name(dist));
  out.measured = worst;
  out.bound = W;
  out.margin = W - worst + kLoose;
  out.ratio = guarded_ratio(worst, W);
  return out;
}

Outcome suite_t_embed(Rng& rng, const Params& P, const SizeCaps& caps,
                      int trial) {
  const Distribution dist = dist_cycle(trial);
  const int k_options[] = {1, 2, 4};
  const int k = std::min(k_options[rng.range(0, 2)], caps.max_k);
  const int level = rng.range(0, caps.max_level);
  const std::uint64_t s = rng.engine();
  const DyadicStep f = gen_step(s, k, level, dist);
  const double W = weak_norm(f, P);
  const LevelStack x = t_embed(f, P);
  const double S = stack_norm(x, P);
  const double viol = yk_check(x, P).max_violation;
  const DyadicStep back = yk_reconstruct(x, P);
  const double err = (back.values - f.values).abs().maxCoeff();

  Outcome out;
  out.digest = digest_of(s, {{"k", k}, {"level", level}}, dist_name(dist));
  out.measured = S;
  out.bound = P.q * W;
  out.margin = std::min({P.q * W - S + kLoose, S - W / P.q + kLoose,
                         kTight - viol, kTight - err});
  out.ratio = guarded_ratio(S, W);
  return out;
}

Outcome suite_phi(Rng& rng, const Params& P, const SizeCaps& caps,
                  int trial) {
  const int k_options[] = {1, 2, 4};
  const int k = std::min(k_options[rng.range(0, 2)], caps.max_k);
  const int N = rng.range(1, std::min(caps.max_level, 6));
  const std::uint64_t s = rng.engine();
  (void)trial;

  // z has vanishing finest-level sum; x = z + a*u.
  LevelStack x = gen_stack(s, k, N, Distribution::kUniform);
  x.levels[N] -= x.levels[N].mean();
  const double a = 2.0 * rng.symmetric();
  const LevelStack u = canonical_u(k, N, P);
  for (int n = 0; n <= N; ++n) x.levels[n] += a * u.levels[n];

  const double S = stack_norm(x, P);
  const double phi = phi_eval(x, P);
  const double m_value = kTight - std::fabs(phi - a);
  const double m_norm = S - std::fabs(a) + kLoose;

  const int n0 = rng.range(0, N - 1);
  const int j0 = rng.range(1, static_cast<int>(cell_count(k, n0)));
  const double parent = phi_nj_eval(x, n0, j0, P);
  const double child_sum = phi_nj_eval(x, n0 + 1, 2 * j0 - 1, P) +
                           phi_nj_eval(x, n0 + 1, 2 * j0, P);
  const double m_additive = -std::fabs(child_sum - parent);  // bitwise

  const double cell_root =
      std::pow(static_cast<double>(cell_count(k, n0)), 1.0 / P.q);
  const double m_functional = S / cell_root - std::fabs(parent) + kLoose;

  double level_sum = 0.0;
  for (int j = 1; j <= cell_count(k, n0); ++j) {
    level_sum += phi_nj_eval(x, n0, j, P);
  }
  const double m_partition = kTight - std::fabs(level_sum - phi);

  const LevelStack shifted = shift_snj(block_restrict(x, n0, j0), n0, j0);
  const double m_shift =
      -std::fabs(phi_nj_eval(shifted, n0, 1, P) - parent);  // bitwise

  // Exactly antisymmetric finest level: pairwise sums cancel to 0.0.
  LevelStack anti = gen_stack(mix(s, 1), k, N, Distribution::kUniform);
  for (std::int64_t i = 0; i < anti.levels[N].size(); i += 2) {
    anti.levels[N](i + 1) = -anti.levels[N](i);
  }
  const double m_kernel = -std::fabs(phi_eval(anti, P));

  Outcome out;
  out.digest = digest_of(s, {{"k", k}, {"N", N}, {"n", n0}, {"j", j0}});
  out.measured = std::fabs(parent) * cell_root;
  out.bound = S;
  out.margin = std::min({m_value, m_norm, m_additive, m_functional,
                         m_partition, m_shift, m_kernel});
  out.ratio = guarded_ratio(out.measured, S);
  return out;
}

Outcome suite_lemma_bound(Rng& rng, const Params& P, const SizeCaps& caps,
                          int trial) {
  const Distribution dist = dist_cycle(trial);
  (void)caps;
  const int i = rng.range(1, 8);
  const int blocks = rng.range(4, 32);
  const std::uint64_t sb = rng.engine();
  const std::uint64_t sc = rng.engine();
  const AtomicVector b = gen_atoms(sb, i, Distribution::kUniform);
  AtomicVector c = gen_atoms(sc, i * blocks, dist);
  const double cn = weak_norm(c, P);
  if (cn > 1.0) c.atoms /= cn;  // into the unit ball

  AtomicVector strided{Eigen::ArrayXd::Zero(blocks)};
  for (int l = 0; l < blocks; ++l) {
    for (int j = 0; j < i; ++j) {
      strided.atoms(l) += b.atoms(j) * c.atoms(l * i + j);
    }
  }
  std::vector<double> bmag(b.atoms.data(), b.atoms.data() + i);
  for (double& v : bmag) v = std::fabs(v);
  std::sort(bmag.begin(), bmag.end(), std::greater<double>());
  double rhs = 0.0;
  for (int j = 1; j <= i; ++j) {
    rhs += bmag[j - 1] *
           (std::pow(j, 1.0 / P.q) - std::pow(j - 1.0, 1.0 / P.q));
  }
  Outcome out;
  out.digest = digest_of(sb, {{"i", i}, {"blocks", blocks}}, dist_name(dist));
  out.measured = weak_norm(strided, P);
  out.bound = P.q * P.q * rhs;
  out.margin = out.bound - out.measured + kLoose;
  out.ratio = guarded_ratio(out.measured, out.bound);
  return out;
}

Outcome suite_lemma_compare(Rng& rng, const Params& P, const SizeCaps& caps,
                            int trial) {
  const int k_options[] = {1, 2, 4};
  const int k = std::min(k_options[rng.range(0, 2)], caps.max_k);
  const int N = rng.range(1, std::min(caps.max_level, 6));
  const int n = rng.range(0, N);
  const std::uint64_t sa = rng.engine();
  const std::uint64_t sx = rng.engine();
  (void)trial;

  const DyadicStep a = gen_step(sa, k, n, Distribution::kUniform);
  LevelStack x = gen_stack(sx, k, N, Distribution::kUniform);
  const double S = stack_norm(x, P);
  if (S > 1.0) {
    for (auto& level : x.levels) level /= S;
  }
  double action = 0.0;
  for (int j = 1; j <= cell_count(k, n); ++j) {
    action += a.values(j - 1) * phi_nj_eval(x, n, j, P);
  }
  Outcome out;
  out.digest = digest_of(sa, {{"k", k}, {"N", N}, {"n", n}});
  out.measured = std::fabs(action);
  out.bound = P.q * std::pow(static_cast<double>(k), -1.0 / P.q) *
              lq1_norm(a, P);
  out.margin = out.bound - out.measured + kLoose;
  out.ratio = guarded_ratio(out.measured, out.bound);
  return out;
}

Outcome suite_p_project(Rng& rng, const Params& P, const SizeCaps& caps,
                        int trial) {
  const Distribution dist = dist_cycle(trial);
  const int k_options[] = {1, 2, 4};
  const int k = std::min(k_options[rng.range(0, 2)], caps.max_k);
  const int N = rng.range(0, caps.max_level);
  const std::uint64_t s = rng.engine();
  const LevelStack x = gen_stack(s, k, N, dist);
  const LevelStack y = p_project(x, P);
  const double S = stack_norm(x, P);
  const double Sy = stack_norm(y, P);

  const double m_bound = P.q * P.q * S - Sy + kLoose;
  const double m_idem = -stack_max_diff(p_project(y, P), y);  // bitwise
  const double m_member = kTight - yk_check(y, P).max_violation;

  // Identity on Y_k, with a member built independently via t_embed.
  const DyadicStep f =
      gen_step(mix(s, 2), k, std::min(N, 6), Distribution::kUniform);
  const LevelStack yk = t_embed(f, P);
  const double m_fix = kTight - stack_max_diff(p_project(yk, P), yk);

  Outcome out;
  out.digest = digest_of(s, {{"k", k}, {"N", N}}, dist_name(dist));
  out.measured = Sy;
  out.bound = P.q * P.q * S;
  out.margin = std::min({m_bound, m_idem, m_member, m_fix});
  out.ratio = guarded_ratio(Sy, S);
  return out;
}

Outcome suite_r_embed(Rng& rng, const Params& P, const SizeCaps& caps,
                      int trial) {
  const Distribution dist = dist_cycle(trial);
  const int N = rng.range(1, std::min(caps.max_level, 5));
  const std::uint64_t s = rng.engine();
  const LevelStack x = gen_stack(s, 1, N, dist);
  const BlockLayout layout = build_layout(N);
  const double S = stack_norm(x, P);
  const double W = weak_norm(r_embed(x, layout, P), P);
  Outcome out;
  out.digest = digest_of(s, {{"N", N}}, dist_name(dist));
  out.measured = W;
  out.bound = std::pow(2.0, 1.0 + 1.0 / P.p) * S;
  out.margin = std::min(W - S + kLoose, out.bound - W + kLoose);
  out.ratio = guarded_ratio(W, S);
  return out;
}

Outcome suite_parts(Rng& rng, const Params& P, const SizeCaps& caps,
                    int trial) {
  const Distribution dist = dist_cycle(trial);
  const int N = rng.range(1, std::min(caps.max_level, 5));
  const std::uint64_t s = rng.engine();
  const LevelStack x = gen_stack(s, 1, N, dist);
  const BlockLayout layout = build_layout(N);
  const double S = stack_norm(x, P);
  const SplitDiagnostic d = r_split(x, layout, P);

  double m_capacity = 0.0;
  std::int64_t capacity = 0;
  for (int l = 0; l <= N; ++l) {
    if (l > 0) {
      m_capacity = std::min(
          m_capacity, static_cast<double>(layout.m[l] - capacity));
    }
    capacity += (std::int64_t{1} << l) * layout.m[l];
  }

  Outcome out;
  out.digest = digest_of(s, {{"N", N}}, dist_name(dist));
  out.measured = d.norm_Ac;
  out.bound = P.q * std::pow(2.0, 1.0 / P.p) * S;
  const double quasi_bound = std::pow(2.0, 1.0 / P.p) * S;
  out.margin = std::min({d.norm_Ac - d.norm_A + kLoose,
                         d.quasi_Ac - d.quasi_A + kLoose,
                         quasi_bound - d.quasi_Ac + kLoose,
                         out.bound - d.norm_Ac + kLoose, m_capacity});
  out.ratio = guarded_ratio(d.norm_Ac, S);
  return out;
}

Outcome suite_w_project(Rng& rng, const Params& P, const SizeCaps& caps,
                        int trial) {
  const Distribution dist = dist_cycle(trial);
  const int N = rng.range(0, std::min(caps.max_level, 5));
  const BlockLayout layout = build_layout(N);
  const std::uint64_t s = rng.engine();
  const AtomicVector a =
      gen_atoms(s, static_cast<int>(layout.total_length), dist);
  const AtomicVector projected = w_project(a, layout);
  const double m_idem =
      -(w_project(projected, layout).atoms - projected.atoms)
           .abs()
           .maxCoeff();  // bitwise

  double m_constant = 0.0;
  for (int n = 0; n <= N; ++n) {
    for (int j = 1; j <= (1 << n); ++j) {
      const auto seg =
          projected.atoms.segment(layout.block_offset(n, j), layout.m[n]);
      m_constant = std::min(m_constant, -(seg - seg(0)).abs().maxCoeff());
    }
  }
  const double Wa = weak_norm(a, P);
  const double Wp = weak_norm(projected, P);
  Outcome out;
  out.digest = digest_of(s, {{"N", N}}, dist_name(dist));
  out.measured = Wp;
  out.bound = Wa;
  out.margin = std::min({Wa - Wp + kTight, m_idem, m_constant});
  out.ratio = guarded_ratio(Wp, Wa);
  return out;
}

Outcome suite_tower(Rng& rng, const Params& P, const SizeCaps& caps,
                    int trial) {
  const Distribution dist = dist_cycle(trial);
  (void)caps;
  const int k = rng.range(1, 6);
  const int level = rng.range(0, 4);
  const int support = rng.range(1, k);  // compact support inside [0, support]
  const std::uint64_t s = rng.engine();
  DyadicStep f = gen_step(s, k, level, dist);
  const std::int64_t keep = cell_count(support, level);
  f.values.tail(f.values.size() - keep).setZero();

  const std::vector<DyadicStep> tower = restrict_tower(f);
  const DyadicStep limit = tower_limit(tower);
  const double m_identity = -(limit.values - f.values).abs().maxCoeff();

  const double W = weak_norm(f, P);
  double max_component = 0.0;
  for (const auto& component : tower) {
    max_component = std::max(max_component, weak_norm(component, P));
  }
  Outcome out;
  out.digest =
      digest_of(s, {{"k", k}, {"level", level}, {"support", support}},
                dist_name(dist));
  out.measured = max_component;
  out.bound = W;
  out.margin = std::min(m_identity, kTight - std::fabs(max_component - W));
  out.ratio = guarded_ratio(max_component, W);
  return out;
}

using SuiteFn = Outcome (*)(Rng&, const Params&, const SizeCaps&, int);

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table = {
      {"norm_oracle", suite_norm_oracle}, {"sandwich", suite_sandwich},
      {"p_estimate", suite_p_estimate},   {"pairing", suite_pairing},
      {"boundf", suite_boundf},           {"t_embed", suite_t_embed},
      {"phi", suite_phi},                 {"lemma_bound", suite_lemma_bound},
      {"lemma_compare", suite_lemma_compare},
      {"p_project", suite_p_project},     {"r_embed", suite_r_embed},
      {"parts", suite_parts},             {"w_project", suite_w_project},
      {"tower", suite_tower},
  };
  return table;
}

}  // namespace

AtomicVector gen_atoms(std::uint64_t seed, int length, Distribution dist) {
  if (length < 0) throw std::invalid_argument("gen_atoms: negative length");
  Rng rng(mix(seed, 0xa70));
  return AtomicVector{fill_values(rng, length, dist)};
}

DyadicStep gen_step(std::uint64_t seed, int k, int level, Distribution dist) {
  if (k < 1 || level < 0) throw std::invalid_argument("gen_step: bad shape");
  Rng rng(mix(seed, 0x57e9));
  DyadicStep f;
  f.k = k;
  f.level = level;
  f.values = fill_values(rng, cell_count(k, level), dist);
  return f;
}

LevelStack gen_stack(std::uint64_t seed, int k, int N, Distribution dist) {
  if (k < 1 || N < 0) throw std::invalid_argument("gen_stack: bad shape");
  LevelStack x;
  x.k = k;
  x.N = N;
  x.levels.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    Rng rng(mix(seed, 0x57ac + n));
    x.levels[n] = fill_values(rng, cell_count(k, n), dist);
  }
  return x;
}

double oracle_norm(const AtomicVector& a, const Params& params) {
  const auto n = static_cast<int>(a.atoms.size());
  if (n > 20) {
    throw std::invalid_argument("oracle_norm: refusing length > 20");
  }
  if (n == 0) return 0.0;
  const std::size_t masks = std::size_t{1} << n;
  std::vector<double> sums(masks, 0.0);
  double best = 0.0;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    const int low = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + std::fabs(a.atoms(low));
    const int size = std::popcount(mask);
    best = std::max(best, sums[mask] / std::pow(size, 1.0 / params.q));
  }
  return best;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suite_table()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const TrialConfig& config) {
  const auto it = suite_table().find(config.suite);
  if (it == suite_table().end()) {
    std::string msg = "unknown suite '" + config.suite + "'; valid suites:";
    for (const auto& name : suite_names()) msg += " " + name;
    throw std::invalid_argument(msg);
  }
  if (config.trials < 1) {
    throw std::invalid_argument("run_suite: trials must be >= 1");
  }
  for (double p : config.p_values) {
    if (!(p > 1.0)) throw std::invalid_argument("run_suite: every p must be > 1");
  }
  const auto start = std::chrono::steady_clock::now();

  SuiteReport report;
  report.suite = config.suite;
  report.p_values = config.p_values;
  report.seed = config.seed;
  report.trials = config.trials;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.records.reserve(config.trials);

  for (int t = 0; t < config.trials; ++t) {
    const double p = config.p_values[t % config.p_values.size()];
    const Params P = make_params(p);
    Rng rng(mix(config.seed, static_cast<std::uint64_t>(t)));
    const Outcome outcome = it->second(rng, P, config.caps, t);

    TrialRecord record;
    record.trial = t;
    record.p = p;
    record.digest = outcome.digest;
    record.measured = outcome.measured;
    record.bound = outcome.bound;
    record.margin = outcome.margin;
    record.pass = outcome.margin >= 0.0;
    report.pass = report.pass && record.pass;
    report.min_margin = std::min(report.min_margin, record.margin);
    report.max_ratio = std::max(report.max_ratio, outcome.ratio);
    report.records.push_back(std::move(record));
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

// ---------------------------------------------------------------------
// Chain report.  Probes live at a size-independent base resolution, so
// the per-trial link ratios do not depend on the truncation size; any
// growth across sizes is a genuine defect.
// ---------------------------------------------------------------------

namespace {

constexpr int kBlockSizeCap = 5;  // keeps the flat index space < ~127k

double link_t_embed(std::uint64_t seed, const Params& P, int N) {
  const DyadicStep base = gen_step(seed, 1, 1, Distribution::kUniform);
  const DyadicStep f = refine(base, std::max(N, 1));
  const double W = weak_norm(f, P);
  if (W == 0.0) return 0.0;
  const double S = stack_norm(t_embed(f, P), P);
  return std::max(S / W, W / S);
}

double link_p_project(std::uint64_t seed, const Params& P, int N) {
  Rng rng(mix(seed, 0x99));
  const double coarse = 2.0 * rng.symmetric();
  const double scale = 0.5 + rng.u01();
  LevelStack x;
  x.k = 1;
  x.N = std::max(N, 1);
  x.levels.resize(x.N + 1);
  for (int n = 0; n <= x.N; ++n) {
    x.levels[n] = Eigen::ArrayXd::Zero(cell_count(1, n));
  }
  x.levels[0](0) = coarse;
  x.levels[x.N] = Eigen::ArrayXd::Constant(
      cell_count(1, x.N),
      scale * std::pow(static_cast<double>(cell_count(1, x.N)), -1.0 / P.p));
  return stack_norm(p_project(x, P), P) / stack_norm(x, P);
}

LevelStack coarse_probe(std::uint64_t seed, int N) {
  LevelStack x;
  x.k = 1;
  x.N = N;
  x.levels.resize(N + 1);
  Rng rng(mix(seed, 0x17));
  x.levels[0] = fill_values(rng, 1, Distribution::kUniform);
  for (int n = 1; n <= N; ++n) {
    x.levels[n] = n == 1 ? fill_values(rng, 2, Distribution::kUniform)
                         : Eigen::ArrayXd::Zero(cell_count(1, n));
  }
  return x;
}

double link_r_embed(std::uint64_t seed, const Params& P, int N) {
  const int n_eff = std::max(1, std::min(N, kBlockSizeCap));
  const LevelStack x = coarse_probe(seed, n_eff);
  const double S = stack_norm(x, P);
  if (S == 0.0) return 0.0;
  return weak_norm(r_embed(x, build_layout(n_eff), P), P) / S;
}

double link_w_project(std::uint64_t seed, const Params& P, int N) {
  const int n_eff = std::max(1, std::min(N, kBlockSizeCap));
  const BlockLayout layout = build_layout(n_eff);
  Rng rng(mix(seed, 0x3b));
  AtomicVector a{Eigen::ArrayXd::Zero(layout.total_length)};
  a.atoms.head(5) = fill_values(rng, 5, Distribution::kUniform);  // m0 + 2*m1
  const double W = weak_norm(a, P);
  if (W == 0.0) return 0.0;
  return weak_norm(w_project(a, layout), P) / W;
}

double link_tower(std::uint64_t seed, const Params& P, int N) {
  const int K = std::max(N, 1);
  Rng rng(mix(seed, 0x70));
  DyadicStep f;
  f.k = K;
  f.level = 2;
  f.values = Eigen::ArrayXd::Zero(cell_count(K, 2));
  f.values.head(4) = fill_values(rng, 4, Distribution::kUniform);
  const double W = weak_norm(f, P);
  if (W == 0.0) return 0.0;
  double best = 0.0;
  for (const auto& component : restrict_tower(f)) {
    best = std::max(best, weak_norm(component, P));
  }
  return best / W;
}

}  // namespace

ChainReport chain_report(double p, const std::vector<int>& sizes,
                         std::uint64_t seed, int trials) {
  const Params P = make_params(p);
  if (sizes.empty()) {
    throw std::invalid_argument("chain_report: empty size list");
  }
  ChainReport report;
  report.p = p;
  report.seed = seed;
  report.sizes = sizes;
  for (int n : sizes) report.half_sizes.push_back(std::max(1, n / 2));

  struct LinkSpec {
    const char* name;
    double bound;
    double (*measure)(std::uint64_t, const Params&, int);
  };
  const LinkSpec specs[] = {
      {"t_embed", P.q, link_t_embed},
      {"p_project", P.q * P.q, link_p_project},
      {"r_embed", std::pow(2.0, 1.0 + 1.0 / P.p), link_r_embed},
      {"w_project", 1.0, link_w_project},
      {"tower", 1.0, link_tower},
  };

  for (const auto& spec : specs) {
    ChainLink link;
    link.name = spec.name;
    link.bound = spec.bound;
    auto measure_at = [&](int N) {
      double best = 0.0;
      for (int t = 0; t < trials; ++t) {
        best = std::max(best, spec.measure(mix(seed, t), P, N));
      }
      return best;
    };
    for (int N : report.sizes) link.constants.push_back(measure_at(N));
    for (int N : report.half_sizes) {
      link.half_constants.push_back(measure_at(N));
    }
    link.max_full =
        *std::max_element(link.constants.begin(), link.constants.end());
    link.max_half = *std::max_element(link.half_constants.begin(),
                                      link.half_constants.end());
    link.uniform = link.max_full <= link.max_half + kLoose;
    link.pass = link.uniform && link.max_full <= link.bound + kLoose &&
                link.max_half <= link.bound + kLoose;
    report.pass = report.pass && link.pass;
    report.links.push_back(std::move(link));
  }
  return report;
}

}  // namespace weaklp
