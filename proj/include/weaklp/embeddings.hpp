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

#ifndef WEAKLP_EMBEDDINGS_HPP_
#define WEAKLP_EMBEDDINGS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "weaklp/core.hpp"

namespace weaklp {

/// Truncated element of the l^inf direct sum of weak-l^p(k*2^n) for
/// n = 0..N: level n holds k*2^n entries.
struct LevelStack {
  int k = 1;
  int N = 0;
  std::vector<Eigen::ArrayXd> levels;
};

/// Result of the dyadic-consistency check: how far the stack is from the
/// subspace where x_n(j) = 2^{-1/q}(x_{n+1}(2j-1) + x_{n+1}(2j)).
struct YkMembership {
  double max_violation = 0.0;
  int worst_level = -1;  // coarse level n of the worst pair, -1 if none
  int worst_index = -1;  // 1-based j of the worst pair
};

/// The truncated summing functional: Phi(x) = (k*2^N)^{-1/q} sum_j x_N(j).
/// Annihilates stacks whose finest level sums to zero and sends the
/// canonical element u (u_n(j) = (k*2^n)^{-1/p}) to 1.
struct TruncFunctional {
  int k = 1;
  int N = 0;
};

/// Disjoint contiguous blocks B_{n,j} of size m_n (2^n of them per level),
/// laid out in (n, j) lexicographic order.
struct BlockLayout {
  int N = 0;
  std::vector<std::int64_t> m;        // m_0..m_N
  std::vector<std::int64_t> offsets;  // start of the first block of each level
  std::int64_t total_length = 0;

  std::int64_t block_offset(int n, int j) const {  // j is 1-based
    return offsets[n] + static_cast<std::int64_t>(j - 1) * m[n];
  }
};

/// Index set A of block coefficients strictly dominated by some deeper
/// level, and the weak and quasi norms of the two halves of the
/// embedded vector.  The dominated half rearranges below the other, so
/// norm_A <= norm_Ac; the undominated half satisfies the sharp bounds
/// quasi_Ac <= 2^{1/p} * stack_norm(x) and norm_Ac <= q * quasi_Ac.
struct SplitDiagnostic {
  std::vector<std::pair<int, int>> a_set;  // (n, j) with j 1-based
  double norm_A = 0.0;
  double norm_Ac = 0.0;
  double quasi_A = 0.0;
  double quasi_Ac = 0.0;
};

/// Dyadic averaging embedding: x_n(j) = 2^{n/q} * (integral of f over the
/// j-th level-n cell), for n = 0..f.level.  Integrals are cascaded
/// pairwise sums, so the output satisfies the Y_k recursion to roundoff.
LevelStack t_embed(const DyadicStep& f, const Params& params);

/// max over levels of the (counting-measure) weak norm.
double stack_norm(const LevelStack& x, const Params& params);

YkMembership yk_check(const LevelStack& x, const Params& params);

/// Finest-level reconstruction f with t_embed(f) = x for x in Y_k.
/// Throws std::runtime_error naming the offending (n, j) if the
/// consistency violation exceeds `tol`.
DyadicStep yk_reconstruct(const LevelStack& x, const Params& params,
                          double tol = 1e-9);

double phi_eval(const LevelStack& x, const Params& params);

/// Phi restricted to the support block of the (n, j) dyadic cell:
/// (k*2^N)^{-1/q} times the sum of x_N over ((j-1)*2^{N-n}, j*2^{N-n}].
/// Sums are taken pairwise over the scaled finest level, so
/// phi_nj_eval(x, n+1, 2j-1) + phi_nj_eval(x, n+1, 2j) reproduces
/// phi_nj_eval(x, n, j) bit-for-bit.
double phi_nj_eval(const LevelStack& x, int n, int j, const Params& params);

/// Cyclic shift sending the (n, j) block onto the (n, 1) block; levels
/// below n are zeroed.
LevelStack shift_snj(const LevelStack& x, int n, int j);

/// Multiplication by the characteristic function of the (n, j) support
/// block: levels below n are zeroed, levels m >= n keep only the indices
/// in ((j-1)*2^{m-n}, j*2^{m-n}].
LevelStack block_restrict(const LevelStack& x, int n, int j);

/// Projection onto Y_k: the finest level is kept and every coarser level
/// is rebuilt as 2^{(n-N)/q} times the block sums of x_N.  Idempotent.
LevelStack p_project(const LevelStack& x, const Params& params);

/// Minimal block sizes m_0 = 1, m_n = max(m_{n-1}+1, sum_{j<n} 2^j m_j).
BlockLayout build_layout(int N);

/// Block embedding into a flat sequence: value x_n(j) / m_n^{1/p} on
/// B_{n,j}.  Requires k = 1 and layout.N = x.N.
AtomicVector r_embed(const LevelStack& x, const BlockLayout& layout,
                     const Params& params);

SplitDiagnostic r_split(const LevelStack& x, const BlockLayout& layout,
                        const Params& params);

/// Conditional expectation onto the block-constant subspace: each B_{n,j}
/// is replaced by its average.  Idempotent.
AtomicVector w_project(const AtomicVector& a, const BlockLayout& layout);

/// (f restricted to [0,1], f restricted to [0,2], ..., f).
std::vector<DyadicStep> restrict_tower(const DyadicStep& f);

/// Finite surrogate for the ultrafilter limit: the last component.
DyadicStep tower_limit(const std::vector<DyadicStep>& tower);

}  // namespace weaklp

#endif  // WEAKLP_EMBEDDINGS_HPP_
