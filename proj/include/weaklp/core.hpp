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

#ifndef WEAKLP_CORE_HPP_
#define WEAKLP_CORE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace weaklp {

/// Conjugate exponent pair (p, q) with 1/p + 1/q = 1 and p, q > 1.
struct Params {
  double p;
  double q;
};

/// Builds the exponent pair from p.  Throws std::domain_error for p <= 1
/// or non-finite p.
Params make_params(double p);

/// Finite real sequence under counting measure; every atom has mass 1.
struct AtomicVector {
  Eigen::ArrayXd atoms;
};

/// Step function on [0, k], constant on the level-m dyadic partition.
/// values(j) is the value on [(j-1)/2^m, j/2^m); exactly k*2^m entries.
struct DyadicStep {
  int k = 1;
  int level = 0;
  Eigen::ArrayXd values;
};

/// Number of cells of a level-`level` partition of [0, k].
inline std::int64_t cell_count(int k, int level) {
  return static_cast<std::int64_t>(k) << level;
}

enum class Measure { kCounting, kLebesgue };

/// Decreasing rearrangement of |f| stored as (value, mass) pieces with
/// values nonincreasing.  Counting-measure profiles carry integer masses.
struct RearrangementProfile {
  struct Piece {
    double value;
    double mass;
  };
  Measure measure = Measure::kCounting;
  std::vector<Piece> pieces;
  double total_mass = 0.0;
};

RearrangementProfile rearrange(const AtomicVector& f);
RearrangementProfile rearrange(const DyadicStep& f);

/// Merges adjacent equal-value pieces.  Norms are unaffected.
RearrangementProfile merge_pieces(const RearrangementProfile& profile);

/// sup_B (integral of |f| over B) / mu(B)^{1/q}.  Counting measure: max
/// over prefixes of the decreasing rearrangement.  Lebesgue: max of
/// G(t) = (int_0^t f*) / t^{1/q} over piece boundaries and interior
/// critical points.  Empty or zero profile gives 0.
double weak_norm(const RearrangementProfile& f, const Params& params);

/// sup_t t^{1/p} f*(t).
double quasi_norm(const RearrangementProfile& f, const Params& params);

/// int_0^inf t^{-1/p} f*(t) dt, in closed form over the pieces.
double lq1_norm(const RearrangementProfile& f, const Params& params);

double weak_norm(const AtomicVector& f, const Params& params);
double weak_norm(const DyadicStep& f, const Params& params);
double quasi_norm(const AtomicVector& f, const Params& params);
double quasi_norm(const DyadicStep& f, const Params& params);
double lq1_norm(const AtomicVector& f, const Params& params);
double lq1_norm(const DyadicStep& f, const Params& params);

/// Duality pairing.  Atomic: dot product.  Steps: integral of the
/// product.  Throws std::invalid_argument on shape mismatch.
double pairing(const AtomicVector& f, const AtomicVector& g);
double pairing(const DyadicStep& f, const DyadicStep& g);

/// Conditional expectation onto the level-n dyadic partition, n <= f.level.
/// Preserves the total integral.  Throws std::invalid_argument if
/// n > f.level or n < 0.
DyadicStep cond_expect(const DyadicStep& f, int n);

namespace detail {
/// Pairwise (tree) sum of a[0..len).  Splitting at the midpoint keeps
/// sums of dyadic-aligned blocks bit-for-bit additive across levels.
double tree_sum(const double* a, std::int64_t len);
}  // namespace detail

}  // namespace weaklp

#endif  // WEAKLP_CORE_HPP_
