#pragma once

#include <optional>
#include <vector>

#include "pdark/rational.hpp"
#include "pdark/util.hpp"

namespace pdark {

// ---------------------------------------------------------------------------
// Multiple-Choice Knapsack: pick exactly one item per class, total cost <= B,
// total value >= D.

struct MckpItem {
  long long cost = 0;
  long long value = 0;
};

struct MckpInstance {
  std::vector<std::vector<MckpItem>> classes;
  long long budget = 0;
  long long target = 0;

  void validate() const;
  // Drops same-cost lower-value and same-value higher-cost items per class;
  // afterwards costs and values are strictly increasing together.
  MckpInstance normalized() const;
  int var_c() const;  // number of distinct costs
  int var_d() const;  // number of distinct values
};

// One item index per class, in class order.
using MckpSelection = std::vector<int>;

struct MckpResult {
  bool yes = false;                       // max value >= target
  std::optional<MckpSelection> selection;  // best feasible selection, if any
  long long best_value = 0;               // value of `selection`
};

// Budget-indexed DP, O(B |N|).
MckpResult mckp_solve_budget_dp(const MckpInstance& inst);

enum class MckpAxis { Costs, Values };

// Multiplicity-tuple DP over the var_c-1 (resp. var_d-1) non-maximal costs
// (values); XP in the chosen axis.
MckpResult mckp_solve_xp(const MckpInstance& inst, MckpAxis axis);

// m nested loops; capacity-guarded cross product.
MckpResult mckp_solve_xp_m(const MckpInstance& inst);

// ---------------------------------------------------------------------------
// Penalty Sum: |S| = k and sum a_i - Q * prod b_i >= D.

struct PenaltySumInstance {
  std::vector<Rational> a;  // a_i >= 0
  std::vector<Rational> b;  // b_i strictly in (0,1)
  int k = 0;
  BigInt q = 0;
  Rational target;  // D; may be nonpositive (Construction 2.2 emits such values)

  void validate() const;
  Rational objective(const std::vector<int>& subset) const;
};

struct PenaltySumResult {
  bool yes = false;
  std::optional<std::vector<int>> subset;  // lexicographically smallest witness
  std::optional<Rational> best;            // exact objective of `subset`
};

// (c,A)-feasible DP on the common-denominator scaled instance; the per-cell
// minimum product is kept as an exact rational. Capacity-guarded on the
// scaled table range.
PenaltySumResult penalty_sum_solve(const PenaltySumInstance& inst);

// Enumeration over all C(m,k) subsets; ground truth.
PenaltySumResult penalty_sum_brute_force(const PenaltySumInstance& inst);

// ---------------------------------------------------------------------------
// Subset Product: |S| = k and prod v_i = M.

struct SubsetProductInstance {
  std::vector<BigInt> values;  // v_i >= 1
  BigInt m = 0;
  int k = 0;

  void validate() const;
};

struct SubsetProductResult {
  bool yes = false;
  std::optional<std::vector<int>> subset;
};

SubsetProductResult subset_product_brute_force(const SubsetProductInstance& inst);

// Construction 2.2: H = 5 ceil(log2 Q), A = ceil(max ln v)+1,
// a_i = ceil_H(A - ln v_i), b_i = 1/v_i, Q = M, D = floor_H(kA - ln Q - 1).
// Pads v_i *= 2, M *= 2^k until k < M. Rounded values are exact: the H-bit
// floors/ceilings are fixed by narrowing rational enclosures of ln.
PenaltySumInstance reduce_subset_product_to_penalty_sum(const SubsetProductInstance& inst);

// ---------------------------------------------------------------------------
// Exact logarithm enclosures (used by the reduction; exposed for tests).

struct RationalInterval {
  Rational lo, hi;
};

// Encloses ln(v) for an integer v >= 1 with hi - lo <= 2^-precision_bits.
RationalInterval ln_enclosure(const BigInt& v, unsigned precision_bits);

// floor(x * 2^H) / ceil(x * 2^H) for x = base - ln(v); exact for integer v
// (ln v is irrational unless v = 1, so narrowing terminates).
BigInt floor_h_minus_ln(const Rational& base, const BigInt& v, unsigned h);
BigInt ceil_h_minus_ln(const Rational& base, const BigInt& v, unsigned h);

// Smallest integer z with e^z >= v (i.e. ceil(ln v)).
BigInt ceil_ln(const BigInt& v);

}  // namespace pdark
