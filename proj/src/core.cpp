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

#include "weaklp/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weaklp {

Params make_params(double p) {
  if (!std::isfinite(p) || p <= 1.0) {
    throw std::domain_error("make_params: p must be finite and > 1");
  }
  return Params{p, p / (p - 1.0)};
}

namespace {

std::vector<double> sorted_abs_desc(const Eigen::ArrayXd& v) {
  std::vector<double> a(v.data(), v.data() + v.size());
  for (double& x : a) x = std::fabs(x);
  std::sort(a.begin(), a.end(), std::greater<double>());
  return a;
}

}  // namespace

RearrangementProfile rearrange(const AtomicVector& f) {
  RearrangementProfile out;
  out.measure = Measure::kCounting;
  const auto a = sorted_abs_desc(f.atoms);
  out.pieces.reserve(a.size());
  for (double v : a) out.pieces.push_back({v, 1.0});
  out.total_mass = static_cast<double>(a.size());
  return out;
}

RearrangementProfile rearrange(const DyadicStep& f) {
  RearrangementProfile out;
  out.measure = Measure::kLebesgue;
  const double mass = std::ldexp(1.0, -f.level);
  const auto a = sorted_abs_desc(f.values);
  out.pieces.reserve(a.size());
  for (double v : a) out.pieces.push_back({v, mass});
  out.total_mass = mass * static_cast<double>(a.size());
  return out;
}

RearrangementProfile merge_pieces(const RearrangementProfile& profile) {
  RearrangementProfile out;
  out.measure = profile.measure;
  out.total_mass = profile.total_mass;
  for (const auto& piece : profile.pieces) {
    if (!out.pieces.empty() && out.pieces.back().value == piece.value) {
      out.pieces.back().mass += piece.mass;
    } else {
      out.pieces.push_back(piece);
    }
  }
  return out;
}

double weak_norm(const RearrangementProfile& f, const Params& params) {
  const double inv_q = 1.0 / params.q;
  double best = 0.0;
  if (f.measure == Measure::kCounting) {
    // Prefixes of the rearrangement dominate every other set of the same
    // cardinality; scan all integer prefixes.
    double sum = 0.0;
    std::int64_t j = 0;
    for (const auto& piece : f.pieces) {
      const auto m = static_cast<std::int64_t>(std::llround(piece.mass));
      for (std::int64_t r = 0; r < m; ++r) {
        ++j;
        sum += piece.value;
        best = std::max(best, sum / std::pow(static_cast<double>(j), inv_q));
      }
    }
    return best;
  }
  // Lebesgue: G(t) = (int_0^t f*) / t^{1/q}, candidates at piece
  // boundaries and at the interior critical point of each piece.
  double acc = 0.0;  // integral of f* over [0, t0)
  double t0 = 0.0;
  for (const auto& piece : f.pieces) {
    const double v = piece.value;
    const double t1 = t0 + piece.mass;
    if (v > 0.0) {
      const double t_star = (acc - v * t0) / (v * (params.q - 1.0));
      if (t_star > t0 && t_star < t1) {
        best = std::max(best,
                        (acc + v * (t_star - t0)) / std::pow(t_star, inv_q));
      }
    }
    acc += v * piece.mass;
    if (t1 > 0.0) {
      best = std::max(best, acc / std::pow(t1, inv_q));
    }
    t0 = t1;
  }
  return best;
}

double quasi_norm(const RearrangementProfile& f, const Params& params) {
  // Within a constant piece t^{1/p} f*(t) is maximal at the right
  // endpoint, for both measures.
  const double inv_p = 1.0 / params.p;
  double best = 0.0;
  double t = 0.0;
  for (const auto& piece : f.pieces) {
    t += piece.mass;
    best = std::max(best, piece.value * std::pow(t, inv_p));
  }
  return best;
}

double lq1_norm(const RearrangementProfile& f, const Params& params) {
  const double inv_q = 1.0 / params.q;
  double total = 0.0;
  double t0 = 0.0;
  double root0 = 0.0;
  for (const auto& piece : f.pieces) {
    const double t1 = t0 + piece.mass;
    const double root1 = std::pow(t1, inv_q);
    total += piece.value * params.q * (root1 - root0);
    t0 = t1;
    root0 = root1;
  }
  return total;
}

double weak_norm(const AtomicVector& f, const Params& params) {
  return weak_norm(rearrange(f), params);
}
double weak_norm(const DyadicStep& f, const Params& params) {
  return weak_norm(rearrange(f), params);
}
double quasi_norm(const AtomicVector& f, const Params& params) {
  return quasi_norm(rearrange(f), params);
}
double quasi_norm(const DyadicStep& f, const Params& params) {
  return quasi_norm(rearrange(f), params);
}
double lq1_norm(const AtomicVector& f, const Params& params) {
  return lq1_norm(rearrange(f), params);
}
double lq1_norm(const DyadicStep& f, const Params& params) {
  return lq1_norm(rearrange(f), params);
}

double pairing(const AtomicVector& f, const AtomicVector& g) {
  if (f.atoms.size() != g.atoms.size()) {
    throw std::invalid_argument("pairing: atomic lengths differ");
  }
  return (f.atoms * g.atoms).sum();
}

double pairing(const DyadicStep& f, const DyadicStep& g) {
  if (f.k != g.k || f.level != g.level) {
    throw std::invalid_argument("pairing: step shapes differ");
  }
  return (f.values * g.values).sum() * std::ldexp(1.0, -f.level);
}

DyadicStep cond_expect(const DyadicStep& f, int n) {
  if (n < 0 || n > f.level) {
    throw std::invalid_argument("cond_expect: target level out of range");
  }
  if (n == f.level) return f;
  const std::int64_t stride = std::int64_t{1} << (f.level - n);
  const std::int64_t cells = cell_count(f.k, n);
  DyadicStep out;
  out.k = f.k;
  out.level = n;
  out.values.resize(cells);
  for (std::int64_t j = 0; j < cells; ++j) {
    out.values(j) = detail::tree_sum(f.values.data() + j * stride, stride) /
                    static_cast<double>(stride);
  }
  return out;
}

namespace detail {

double tree_sum(const double* a, std::int64_t len) {
  if (len == 1) return a[0];
  const std::int64_t half = len / 2;
  return tree_sum(a, half) + tree_sum(a + half, len - half);
}

}  // namespace detail

}  // namespace weaklp
