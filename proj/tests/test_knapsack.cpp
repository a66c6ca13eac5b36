#include "doctest.h"

#include <set>

#include "pdark/knapsack.hpp"
#include "pdark/util.hpp"

using namespace pdark;

namespace {

MckpInstance random_mckp(Rng& rng, int max_classes, int max_items, long long max_cost,
                         long long max_value) {
  MckpInstance inst;
  int m = rand_int(rng, 1, max_classes);
  for (int i = 0; i < m; ++i) {
    std::vector<MckpItem> cls;
    int sz = rand_int(rng, 1, max_items);
    for (int j = 0; j < sz; ++j)
      cls.push_back({rand_int(rng, 0, static_cast<int>(max_cost)),
                     rand_int(rng, 0, static_cast<int>(max_value))});
    inst.classes.push_back(cls);
  }
  inst.budget = rand_int(rng, 0, static_cast<int>(max_cost) * m);
  inst.target = rand_int(rng, 0, static_cast<int>(max_value) * m);
  return inst;
}

long long mckp_oracle_best(const MckpInstance& inst) {
  // Cross-class product enumeration, independent of the solver DPs.
  long long best = -1;
  std::vector<int> cur(inst.classes.size(), 0);
  while (true) {
    long long cost = 0, value = 0;
    for (size_t i = 0; i < inst.classes.size(); ++i) {
      cost += inst.classes[i][cur[i]].cost;
      value += inst.classes[i][cur[i]].value;
    }
    if (cost <= inst.budget) best = std::max(best, value);
    int i = static_cast<int>(inst.classes.size()) - 1;
    while (i >= 0 && cur[i] + 1 == static_cast<int>(inst.classes[i].size())) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return best;
}

void check_result(const MckpInstance& inst, const MckpResult& res, long long oracle_best) {
  if (oracle_best < 0) {
    CHECK_FALSE(res.selection.has_value());
    CHECK_FALSE(res.yes);
    return;
  }
  REQUIRE(res.selection.has_value());
  CHECK(res.best_value == oracle_best);
  CHECK(res.yes == (oracle_best >= inst.target));
  long long cost = 0, value = 0;
  for (size_t i = 0; i < inst.classes.size(); ++i) {
    cost += inst.classes[i][(*res.selection)[i]].cost;
    value += inst.classes[i][(*res.selection)[i]].value;
  }
  CHECK(cost <= inst.budget);
  CHECK(value == res.best_value);
}

}  // namespace

TEST_CASE("mckp single class basics") {
  MckpInstance inst;
  inst.classes = {{{1, 5}}};
  inst.budget = 1;
  inst.target = 5;
  CHECK(mckp_solve_budget_dp(inst).yes);
  CHECK(mckp_solve_xp(inst, MckpAxis::Costs).yes);
  CHECK(mckp_solve_xp(inst, MckpAxis::Values).yes);
  CHECK(mckp_solve_xp_m(inst).yes);

  inst.budget = 0;  // budget below every item cost: no selection at all
  auto res = mckp_solve_budget_dp(inst);
  CHECK_FALSE(res.yes);
  CHECK_FALSE(res.selection.has_value());
  CHECK_THROWS_AS(mckp_solve_budget_dp(MckpInstance{{{}}, 1, 1}), input_error);
}

TEST_CASE("the three mckp solvers agree with enumeration on random instances") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    MckpInstance inst = random_mckp(rng, 4, 3, 5, 7);
    long long oracle = mckp_oracle_best(inst);
    check_result(inst, mckp_solve_budget_dp(inst), oracle);
    check_result(inst, mckp_solve_xp(inst, MckpAxis::Costs), oracle);
    check_result(inst, mckp_solve_xp(inst, MckpAxis::Values), oracle);
    check_result(inst, mckp_solve_xp_m(inst), oracle);
  }
}

TEST_CASE("var_c = 1 instances reduce to best value per class") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    MckpInstance inst = random_mckp(rng, 4, 3, 0, 9);  // all costs zero
    CHECK(inst.var_c() == 1);
    long long oracle = mckp_oracle_best(inst);
    check_result(inst, mckp_solve_xp(inst, MckpAxis::Costs), oracle);
  }
}

TEST_CASE("normalization removes same-cost and same-value duplicates only") {
  MckpInstance inst;
  inst.classes = {{{1, 5}, {1, 3}, {2, 5}, {2, 8}, {3, 1}}};
  MckpInstance norm = inst.normalized();
  // (1,3) loses to (1,5); (2,5) shares the value 5; (3,1) survives though dominated.
  REQUIRE(norm.classes[0].size() == 3);
  CHECK(norm.classes[0][0].cost == 1);
  CHECK(norm.classes[0][0].value == 5);
  CHECK(norm.classes[0][1].cost == 2);
  CHECK(norm.classes[0][1].value == 8);
  CHECK(norm.classes[0][2].cost == 3);
  CHECK(norm.classes[0][2].value == 1);
}

TEST_CASE("normalization never changes the answer") {
  Rng rng(77);
  for (int trial = 0; trial < 120; ++trial) {
    MckpInstance inst = random_mckp(rng, 3, 4, 4, 5);
    long long before = mckp_oracle_best(inst);
    long long after = mckp_oracle_best(inst.normalized());
    CHECK(before == after);
  }
}

TEST_CASE("penalty sum single tuple arithmetic") {
  PenaltySumInstance inst;
  inst.a = {Rational(5)};
  inst.b = {Rational(1, 2)};
  inst.k = 1;
  inst.q = 2;
  inst.target = Rational(3);
  auto res = penalty_sum_solve(inst);
  CHECK(res.yes);  // 5 - 2*(1/2) = 4 >= 3
  REQUIRE(res.best.has_value());
  CHECK(*res.best == Rational(4));

  inst.target = Rational(6);  // D greater than sum of a: penalty term positive
  CHECK_FALSE(penalty_sum_solve(inst).yes);
  CHECK_FALSE(penalty_sum_brute_force(inst).yes);
}

TEST_CASE("penalty sum dp equals subset enumeration on random instances") {
  Rng rng(9);
  for (int trial = 0; trial < 150; ++trial) {
    PenaltySumInstance inst;
    int m = rand_int(rng, 1, 8);
    for (int i = 0; i < m; ++i) {
      inst.a.push_back(Rational(rand_int(rng, 0, 6), rand_int(rng, 1, 3)));
      inst.b.push_back(Rational(rand_int(rng, 1, 5), 6));
    }
    inst.k = rand_int(rng, 0, m + 1);
    inst.q = rand_int(rng, 0, 5);
    inst.target = Rational(rand_int(rng, -4, 8), rand_int(rng, 1, 2));
    auto dp = penalty_sum_solve(inst);
    auto bf = penalty_sum_brute_force(inst);
    CHECK(dp.yes == bf.yes);
    if (dp.yes) {
      REQUIRE(dp.subset.has_value());
      CHECK(static_cast<int>(dp.subset->size()) == inst.k);
      CHECK(inst.objective(*dp.subset) >= inst.target);
      CHECK(*dp.best == inst.objective(*dp.subset));
    }
  }
}

TEST_CASE("penalty sum validates b strictly inside (0,1)") {
  PenaltySumInstance inst;
  inst.a = {Rational(1)};
  inst.b = {Rational(1)};
  inst.k = 1;
  CHECK_THROWS_AS(penalty_sum_solve(inst), input_error);
}

TEST_CASE("ln enclosures are tight and correctly ordered") {
  for (long long v : {2, 3, 6, 10, 12, 1000}) {
    RationalInterval i = ln_enclosure(BigInt(v), 80);
    CHECK(i.lo <= i.hi);
    double mid = std::log(static_cast<double>(v));
    CHECK(i.lo.to_double() <= mid + 1e-12);
    CHECK(i.hi.to_double() >= mid - 1e-12);
    Rational width = i.hi - i.lo;
    CHECK(width <= Rational(BigInt(1), boost::multiprecision::pow(BigInt(2), 80)));
  }
  CHECK(ln_enclosure(BigInt(1), 10).hi == Rational(0));
  CHECK(ceil_ln(BigInt(1)) == 0);
  CHECK(ceil_ln(BigInt(2)) == 1);   // ln 2 ~ 0.69
  CHECK(ceil_ln(BigInt(3)) == 2);   // ln 3 ~ 1.09
  CHECK(ceil_ln(BigInt(12)) == 3);  // ln 12 ~ 2.48
  CHECK(ceil_ln(BigInt(21)) == 4);  // ln 21 ~ 3.04
}

TEST_CASE("rounded values satisfy the floor/ceiling bounds") {
  // x - delta < floor_H(x) <= x <= ceil_H(x) < x + delta for delta = 2^-H.
  unsigned h = 20;
  BigInt two_h = boost::multiprecision::pow(BigInt(2), h);
  Rational delta(BigInt(1), two_h);
  for (long long v : {2, 3, 5, 7, 11}) {
    Rational base(10);
    Rational fl(floor_h_minus_ln(base, BigInt(v), h), two_h);
    Rational ce(ceil_h_minus_ln(base, BigInt(v), h), two_h);
    RationalInterval i = ln_enclosure(BigInt(v), h + 40);
    Rational x_hi = base - i.lo;
    Rational x_lo = base - i.hi;
    CHECK(fl <= x_hi);
    CHECK(fl > x_lo - delta);
    CHECK(ce >= x_lo);
    CHECK(ce < x_hi + delta);
    CHECK(fl <= ce);
  }
}

TEST_CASE("subset product reduces to penalty sum equivalently") {
  // v = {2,3,6}, M=6, k=2: yes via {2,3}.
  SubsetProductInstance yes_inst{{BigInt(2), BigInt(3), BigInt(6)}, BigInt(6), 2};
  CHECK(subset_product_brute_force(yes_inst).yes);
  PenaltySumInstance ps = reduce_subset_product_to_penalty_sum(yes_inst);
  auto res = penalty_sum_brute_force(ps);
  CHECK(res.yes);

  // v = {2,2}, M=5, k=2: no on both sides.
  SubsetProductInstance no_inst{{BigInt(2), BigInt(2)}, BigInt(5), 2};
  CHECK_FALSE(subset_product_brute_force(no_inst).yes);
  CHECK_FALSE(penalty_sum_brute_force(reduce_subset_product_to_penalty_sum(no_inst)).yes);

  // v = {M}, k=1: yes on both sides.
  SubsetProductInstance single{{BigInt(9)}, BigInt(9), 1};
  CHECK(subset_product_brute_force(single).yes);
  CHECK(penalty_sum_brute_force(reduce_subset_product_to_penalty_sum(single)).yes);
}

TEST_CASE("subset product reduction equivalence on exhaustive small instances") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    SubsetProductInstance inst;
    int m = rand_int(rng, 1, 7);
    for (int i = 0; i < m; ++i) inst.values.push_back(BigInt(rand_int(rng, 1, 12)));
    inst.k = rand_int(rng, 0, m);
    // Half the trials use a product of a random subset as target (yes-leaning).
    if (rng() & 1) {
      BigInt prod = 1;
      for (int i = 0; i < m; ++i)
        if (rng() & 1) prod *= inst.values[i];
      inst.m = std::max(BigInt(2), prod);
    } else {
      inst.m = rand_int(rng, 2, 100);
    }
    if (inst.k == 0 && inst.m < 2) continue;
    bool lhs = subset_product_brute_force(inst).yes;
    PenaltySumInstance ps = reduce_subset_product_to_penalty_sum(inst);
    bool rhs = penalty_sum_brute_force(ps).yes;
    CHECK(lhs == rhs);
  }
}
