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

#include "weaklp/embeddings.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weaklp {

namespace {

void check_stack(const LevelStack& x) {
  if (x.k < 1 || x.N < 0 ||
      x.levels.size() != static_cast<std::size_t>(x.N) + 1) {
    throw std::invalid_argument("LevelStack: bad shape");
  }
  for (int n = 0; n <= x.N; ++n) {
    if (x.levels[n].size() != cell_count(x.k, n)) {
      throw std::invalid_argument("LevelStack: level " + std::to_string(n) +
                                  " has wrong length");
    }
  }
}

void check_nj(const LevelStack& x, int n, int j) {
  if (n < 0 || n > x.N || j < 1 || j > cell_count(x.k, n)) {
    throw std::invalid_argument("(n, j) = (" + std::to_string(n) + ", " +
                                std::to_string(j) + ") out of range");
  }
}

double phi_coef(const LevelStack& x, const Params& params) {
  return std::pow(static_cast<double>(cell_count(x.k, x.N)), -1.0 / params.q);
}

}  // namespace

LevelStack t_embed(const DyadicStep& f, const Params& params) {
  const int N = f.level;
  LevelStack x;
  x.k = f.k;
  x.N = N;
  x.levels.resize(N + 1);

  // Cell integrals, cascaded pairwise from the finest level.
  std::vector<Eigen::ArrayXd> integral(N + 1);
  integral[N] = f.values * std::ldexp(1.0, -N);
  for (int n = N - 1; n >= 0; --n) {
    const std::int64_t cells = cell_count(f.k, n);
    integral[n].resize(cells);
    for (std::int64_t j = 0; j < cells; ++j) {
      integral[n](j) = integral[n + 1](2 * j) + integral[n + 1](2 * j + 1);
    }
  }
  for (int n = 0; n <= N; ++n) {
    x.levels[n] = std::pow(2.0, n / params.q) * integral[n];
  }
  return x;
}

double stack_norm(const LevelStack& x, const Params& params) {
  check_stack(x);
  double best = 0.0;
  for (const auto& level : x.levels) {
    best = std::max(best, weak_norm(AtomicVector{level}, params));
  }
  return best;
}

YkMembership yk_check(const LevelStack& x, const Params& params) {
  check_stack(x);
  const double scale = std::pow(2.0, -1.0 / params.q);
  YkMembership out;
  for (int n = 0; n < x.N; ++n) {
    const std::int64_t cells = cell_count(x.k, n);
    for (std::int64_t j = 0; j < cells; ++j) {
      const double expect =
          scale * (x.levels[n + 1](2 * j) + x.levels[n + 1](2 * j + 1));
      const double v = std::fabs(x.levels[n](j) - expect);
      if (v > out.max_violation) {
        out.max_violation = v;
        out.worst_level = n;
        out.worst_index = static_cast<int>(j) + 1;
      }
    }
  }
  return out;
}

DyadicStep yk_reconstruct(const LevelStack& x, const Params& params,
                          double tol) {
  const YkMembership membership = yk_check(x, params);
  if (membership.max_violation > tol) {
    throw std::runtime_error(
        "yk_reconstruct: consistency violation " +
        std::to_string(membership.max_violation) + " at (n, j) = (" +
        std::to_string(membership.worst_level) + ", " +
        std::to_string(membership.worst_index) + ")");
  }
  DyadicStep f;
  f.k = x.k;
  f.level = x.N;
  f.values = std::pow(2.0, x.N / params.p) * x.levels[x.N];
  return f;
}

double phi_eval(const LevelStack& x, const Params& params) {
  check_stack(x);
  const Eigen::ArrayXd scaled = phi_coef(x, params) * x.levels[x.N];
  const std::int64_t block = std::int64_t{1} << x.N;
  double total = 0.0;
  for (int j = 0; j < x.k; ++j) {
    total += detail::tree_sum(scaled.data() + j * block, block);
  }
  return total;
}

double phi_nj_eval(const LevelStack& x, int n, int j, const Params& params) {
  check_stack(x);
  check_nj(x, n, j);
  const Eigen::ArrayXd scaled = phi_coef(x, params) * x.levels[x.N];
  const std::int64_t block = std::int64_t{1} << (x.N - n);
  return detail::tree_sum(scaled.data() + (j - 1) * block, block);
}

LevelStack shift_snj(const LevelStack& x, int n, int j) {
  check_stack(x);
  check_nj(x, n, j);
  LevelStack z;
  z.k = x.k;
  z.N = x.N;
  z.levels.resize(x.N + 1);
  for (int m = 0; m < n; ++m) {
    z.levels[m] = Eigen::ArrayXd::Zero(cell_count(x.k, m));
  }
  for (int m = n; m <= x.N; ++m) {
    const std::int64_t len = cell_count(x.k, m);
    const std::int64_t shift =
        static_cast<std::int64_t>(j - 1) << (m - n);
    z.levels[m].resize(len);
    for (std::int64_t i = 0; i < len; ++i) {
      z.levels[m](i) = x.levels[m]((i + shift) % len);
    }
  }
  return z;
}

LevelStack block_restrict(const LevelStack& x, int n, int j) {
  check_stack(x);
  check_nj(x, n, j);
  LevelStack z;
  z.k = x.k;
  z.N = x.N;
  z.levels.resize(x.N + 1);
  for (int m = 0; m < n; ++m) {
    z.levels[m] = Eigen::ArrayXd::Zero(cell_count(x.k, m));
  }
  for (int m = n; m <= x.N; ++m) {
    const std::int64_t len = cell_count(x.k, m);
    const std::int64_t block = std::int64_t{1} << (m - n);
    const std::int64_t lo = static_cast<std::int64_t>(j - 1) * block;
    z.levels[m] = Eigen::ArrayXd::Zero(len);
    z.levels[m].segment(lo, block) = x.levels[m].segment(lo, block);
  }
  return z;
}

LevelStack p_project(const LevelStack& x, const Params& params) {
  check_stack(x);
  LevelStack y;
  y.k = x.k;
  y.N = x.N;
  y.levels.resize(x.N + 1);
  y.levels[x.N] = x.levels[x.N];

  std::vector<Eigen::ArrayXd> sums(x.N + 1);
  sums[x.N] = x.levels[x.N];
  for (int n = x.N - 1; n >= 0; --n) {
    const std::int64_t cells = cell_count(x.k, n);
    sums[n].resize(cells);
    for (std::int64_t j = 0; j < cells; ++j) {
      sums[n](j) = sums[n + 1](2 * j) + sums[n + 1](2 * j + 1);
    }
    y.levels[n] = std::pow(2.0, (n - x.N) / params.q) * sums[n];
  }
  return y;
}

BlockLayout build_layout(int N) {
  if (N < 0) throw std::invalid_argument("build_layout: N must be >= 0");
  BlockLayout layout;
  layout.N = N;
  layout.m.resize(N + 1);
  layout.offsets.resize(N + 1);
  std::int64_t capacity = 0;  // sum_{j<n} 2^j m_j
  std::int64_t offset = 0;
  for (int n = 0; n <= N; ++n) {
    layout.m[n] = (n == 0) ? 1 : std::max(layout.m[n - 1] + 1, capacity);
    layout.offsets[n] = offset;
    const std::int64_t level_span = (std::int64_t{1} << n) * layout.m[n];
    capacity += level_span;
    offset += level_span;
  }
  layout.total_length = offset;
  return layout;
}

AtomicVector r_embed(const LevelStack& x, const BlockLayout& layout,
                     const Params& params) {
  check_stack(x);
  if (x.k != 1) {
    throw std::invalid_argument("r_embed: only k = 1 is supported");
  }
  if (layout.N != x.N) {
    throw std::invalid_argument("r_embed: layout.N does not match stack N");
  }
  AtomicVector out;
  out.atoms = Eigen::ArrayXd::Zero(layout.total_length);
  for (int n = 0; n <= x.N; ++n) {
    const double scale = std::pow(static_cast<double>(layout.m[n]),
                                  -1.0 / params.p);
    const std::int64_t blocks = std::int64_t{1} << n;
    for (std::int64_t j = 0; j < blocks; ++j) {
      out.atoms.segment(layout.block_offset(n, static_cast<int>(j) + 1),
                        layout.m[n]) = scale * x.levels[n](j);
    }
  }
  return out;
}

SplitDiagnostic r_split(const LevelStack& x, const BlockLayout& layout,
                        const Params& params) {
  const AtomicVector embedded = r_embed(x, layout, params);

  // suffix_max[n] = max over levels l > n of |x_l(i)| / m_l^{1/p}.
  std::vector<double> suffix_max(x.N + 2, 0.0);
  for (int n = x.N; n >= 0; --n) {
    const double scale = std::pow(static_cast<double>(layout.m[n]),
                                  -1.0 / params.p);
    suffix_max[n] = std::max(suffix_max[n + 1],
                             scale * x.levels[n].abs().maxCoeff());
  }

  SplitDiagnostic out;
  AtomicVector part_a{Eigen::ArrayXd::Zero(layout.total_length)};
  AtomicVector part_ac{Eigen::ArrayXd::Zero(layout.total_length)};
  for (int n = 0; n <= x.N; ++n) {
    const double scale = std::pow(static_cast<double>(layout.m[n]),
                                  -1.0 / params.p);
    const std::int64_t blocks = std::int64_t{1} << n;
    for (std::int64_t j = 0; j < blocks; ++j) {
      const std::int64_t lo = layout.block_offset(n, static_cast<int>(j) + 1);
      const bool dominated =
          std::fabs(scale * x.levels[n](j)) < suffix_max[n + 1];
      auto& part = dominated ? part_a : part_ac;
      part.atoms.segment(lo, layout.m[n]) =
          embedded.atoms.segment(lo, layout.m[n]);
      if (dominated) {
        out.a_set.emplace_back(n, static_cast<int>(j) + 1);
      }
    }
  }
  out.norm_A = weak_norm(part_a, params);
  out.norm_Ac = weak_norm(part_ac, params);
  out.quasi_A = quasi_norm(part_a, params);
  out.quasi_Ac = quasi_norm(part_ac, params);
  return out;
}

AtomicVector w_project(const AtomicVector& a, const BlockLayout& layout) {
  if (a.atoms.size() != layout.total_length) {
    throw std::invalid_argument("w_project: length does not match layout");
  }
  AtomicVector out;
  out.atoms.resize(layout.total_length);
  for (int n = 0; n <= layout.N; ++n) {
    const std::int64_t blocks = std::int64_t{1} << n;
    for (std::int64_t j = 0; j < blocks; ++j) {
      const std::int64_t lo = layout.block_offset(n, static_cast<int>(j) + 1);
      const auto seg = a.atoms.segment(lo, layout.m[n]);
      // A constant block is its own average; keeps the projection an
      // exact fixed point on block-constant inputs.
      double mean;
      if ((seg == seg(0)).all()) {
        mean = seg(0);
      } else {
        mean = detail::tree_sum(seg.data(), layout.m[n]) /
               static_cast<double>(layout.m[n]);
      }
      out.atoms.segment(lo, layout.m[n]) = mean;
    }
  }
  return out;
}

std::vector<DyadicStep> restrict_tower(const DyadicStep& f) {
  if (f.k < 1) throw std::invalid_argument("restrict_tower: k must be >= 1");
  std::vector<DyadicStep> tower;
  tower.reserve(f.k);
  for (int cut = 1; cut <= f.k; ++cut) {
    DyadicStep component;
    component.k = cut;
    component.level = f.level;
    component.values = f.values.head(cell_count(cut, f.level));
    tower.push_back(std::move(component));
  }
  return tower;
}

DyadicStep tower_limit(const std::vector<DyadicStep>& tower) {
  if (tower.empty()) {
    throw std::invalid_argument("tower_limit: empty tower");
  }
  for (const auto& component : tower) {
    if (component.level != tower.front().level) {
      throw std::invalid_argument("tower_limit: inconsistent levels");
    }
  }
  return tower.back();
}

}  // namespace weaklp
