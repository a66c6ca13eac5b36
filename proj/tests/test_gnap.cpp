#include "doctest.h"

#include <set>

#include "build_helpers.hpp"
#include "pdark/gnap.hpp"
#include "pdark/util.hpp"

using namespace pdark;
using namespace pdark::testutil;

namespace {

// Fig. 1.2: two-level tree with four taxa and the printed project tables.
GnapInstance example_instance_fig12(long long budget, Rational target) {
  GnapInstance inst;
  inst.tree = tree_from_edges({
      {"r", "a", 80},
      {"r", "v", 100},
      {"v", "b", 50},
      {"v", "c", 30},
      {"v", "d", 70},
  });
  auto taxon = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  inst.projects[taxon("a")] = {{0, Rational(0)},
                               {1, Rational(3, 10)},
                               {2, Rational(1, 2)},
                               {5, Rational(4, 5)},
                               {10, Rational(9, 10)}};
  inst.projects[taxon("b")] = {
      {0, Rational(0)}, {1, Rational(1, 5)}, {3, Rational(1, 2)}, {10, Rational(3, 4)}};
  inst.projects[taxon("c")] = {{0, Rational(0)},
                               {1, Rational(1, 10)},
                               {2, Rational(3, 10)},
                               {3, Rational(1, 2)},
                               {7, Rational(4, 5)}};
  inst.projects[taxon("d")] = {{0, Rational(0)},
                               {1, Rational(1, 5)},
                               {2, Rational(2, 5)},
                               {5, Rational(3, 5)},
                               {7, Rational(9, 10)}};
  inst.budget = budget;
  inst.target = target;
  return inst;
}

GnapInstance random_instance(Rng& rng, int max_taxa, int max_list, int max_weight,
                             int max_den) {
  int n = rand_int(rng, 1, max_taxa);
  std::vector<EdgeSpec> edges;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  int internals = n >= 3 ? rand_int(rng, 0, 1) : 0;
  if (internals == 1) {
    edges.push_back({"r", "m", static_cast<Weight>(rand_int(rng, 1, max_weight))});
    edges.push_back({"m", names[0], static_cast<Weight>(rand_int(rng, 1, max_weight))});
    edges.push_back({"m", names[1], static_cast<Weight>(rand_int(rng, 1, max_weight))});
    for (int i = 2; i < n; ++i)
      edges.push_back({"r", names[i], static_cast<Weight>(rand_int(rng, 1, max_weight))});
  } else {
    for (int i = 0; i < n; ++i)
      edges.push_back({"r", names[i], static_cast<Weight>(rand_int(rng, 1, max_weight))});
    if (n == 1)
      edges.push_back({"r", "pad", static_cast<Weight>(rand_int(rng, 1, max_weight))});
  }
  GnapInstance inst;
  inst.tree = tree_from_edges(edges);
  for (int x : inst.tree.taxa()) {
    int len = rand_int(rng, 1, max_list);
    std::set<long long> costs;
    std::set<std::string> probs;
    std::vector<GnapProject> list;
    int guard = 0;
    while (static_cast<int>(list.size()) < len && ++guard < 100) {
      GnapProject p{rand_int(rng, 0, 6), Rational(rand_int(rng, 0, max_den), max_den)};
      if (!costs.insert(p.cost).second) continue;
      if (!probs.insert(p.prob.str()).second) continue;
      list.push_back(p);
    }
    inst.projects[x] = list;
  }
  inst = inst.normalized();
  inst.budget = rand_int(rng, 0, 8);
  inst.target = Rational(rand_int(rng, 0, 2 * max_weight), rand_int(rng, 1, 2));
  return inst;
}

}  // namespace

TEST_CASE("the four-taxon example spend is feasible with value 160") {
  GnapInstance inst = example_instance_fig12(8, Rational(160));
  GnapResult res = gnap_brute_force(inst);
  CHECK(res.yes);
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->value >= Rational(160));
  CHECK(res.solution->cost <= 8);
  // The printed spend (2,1,0,5) itself evaluates to exactly 160.
  auto taxon = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  std::map<int, int> printed{{taxon("a"), 2}, {taxon("b"), 1}, {taxon("c"), 0}, {taxon("d"), 3}};
  CHECK(gnap_solution_value(inst, printed) == Rational(160));
}

TEST_CASE("forced assignments and zero budgets") {
  GnapInstance inst;
  inst.tree = tree_from_edges({{"r", "a", 3}, {"r", "b", 4}});
  inst.projects[*inst.tree.g.vertex_by_label("a")] = {{0, Rational(0)}};
  inst.projects[*inst.tree.g.vertex_by_label("b")] = {{0, Rational(0)}};
  inst.budget = 5;
  inst.target = Rational(0);
  GnapResult res = gnap_brute_force(inst);
  CHECK(res.yes);  // value 0, target 0
  CHECK(res.solution->value == Rational(0));
  inst.target = Rational(1);
  CHECK_FALSE(gnap_brute_force(inst).yes);
  CHECK_FALSE(gnap_dp_varc_varw(inst).yes);
  CHECK_FALSE(gnap_dp_budget_varw(inst).yes);
}

TEST_CASE("var_c = var_w = 1 forces a single assignment") {
  GnapInstance inst;
  inst.tree = tree_from_edges({{"r", "a", 2}, {"r", "b", 5}});
  for (int x : inst.tree.taxa()) inst.projects[x] = {{1, Rational(1, 2)}};
  inst.budget = 2;
  inst.target = Rational(3);
  GnapResult dp = gnap_dp_varc_varw(inst);
  GnapResult bf = gnap_brute_force(inst);
  CHECK(dp.yes == bf.yes);
  CHECK(dp.solution->value == bf.solution->value);
}

TEST_CASE("dp solvers match brute force on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 140; ++trial) {
    GnapInstance inst = random_instance(rng, 5, 3, 8, 8);
    GnapResult bf = gnap_brute_force(inst);
    GnapResult dp1 = gnap_dp_varc_varw(inst);
    GnapResult dp2 = gnap_dp_budget_varw(inst);
    REQUIRE(bf.solution.has_value() == dp1.solution.has_value());
    REQUIRE(bf.solution.has_value() == dp2.solution.has_value());
    if (bf.solution) {
      CHECK(dp1.solution->value == bf.solution->value);
      CHECK(dp2.solution->value == bf.solution->value);
      CHECK(dp1.solution->cost <= inst.budget);
      CHECK(gnap_solution_value(inst, dp1.solution->choice) == dp1.solution->value);
    }
    CHECK(dp1.yes == bf.yes);
    CHECK(dp2.yes == bf.yes);
  }
}

TEST_CASE("star solver agrees with brute force") {
  Rng rng(7);
  int stars = 0;
  for (int trial = 0; trial < 140; ++trial) {
    GnapInstance inst = random_instance(rng, 5, 3, 8, 8);
    if (!inst.tree.is_star()) continue;
    ++stars;
    GnapResult bf = gnap_brute_force(inst);
    GnapResult star = gnap_star_solve(inst);
    CHECK(star.yes == bf.yes);
    if (bf.solution) CHECK(star.solution->value == bf.solution->value);
  }
  CHECK(stars >= 40);
  // Common-denominator arithmetic: w = 3/4 with lambda = 5 scales to value 15.
  GnapInstance tiny;
  tiny.tree = tree_from_edges({{"r", "a", 5}, {"r", "b", 1}});
  tiny.projects[*tiny.tree.g.vertex_by_label("a")] = {{0, Rational(0)}, {2, Rational(3, 4)}};
  tiny.projects[*tiny.tree.g.vertex_by_label("b")] = {{0, Rational(0)}};
  tiny.budget = 2;
  tiny.target = Rational(15, 4);
  CHECK(gnap_star_solve(tiny).yes);
  tiny.target = Rational(15, 4) + Rational(1, 100);
  CHECK_FALSE(gnap_star_solve(tiny).yes);
}

TEST_CASE("nap01 dp equals brute force on 0/1 instances") {
  Rng rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    GnapInstance inst = random_instance(rng, 6, 2, 6, 1);  // probabilities in {0,1}
    GnapResult bf = gnap_brute_force(inst);
    GnapResult dp = nap01_dp(inst);
    CHECK(dp.yes == bf.yes);
  }
}

TEST_CASE("nap01 chain: saving one taxon pays for the whole path") {
  GnapInstance inst;
  inst.tree = tree_from_edges({{"r", "m", 2}, {"m", "a", 3}, {"m", "b", 1}},
                              /*allow_unary=*/true);
  inst.projects[*inst.tree.g.vertex_by_label("a")] = {{0, Rational(0)}, {3, Rational(1)}};
  inst.projects[*inst.tree.g.vertex_by_label("b")] = {{0, Rational(0)}};
  inst.budget = 3;
  inst.target = Rational(5);  // path r->m->a
  GnapResult dp = nap01_dp(inst);
  CHECK(dp.yes);
  CHECK(dp.solution->cost == 3);
  inst.target = Rational(0);
  CHECK(nap01_dp(inst).yes);  // D = 0 costs nothing
  CHECK(nap01_dp(inst, Nap01Axis::MaxWeight).yes);
  inst.projects[*inst.tree.g.vertex_by_label("a")] = {{0, Rational(0)}, {3, Rational(1, 2)}};
  CHECK_THROWS_AS(nap01_dp(inst), input_error);
}

TEST_CASE("unit-cost ultrametric height-2 greedy equals brute force") {
  Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    int groups = rand_int(rng, 1, 3);
    int p = rand_int(rng, 2, 6);
    std::vector<EdgeSpec> edges;
    GnapInstance inst;
    int id = 0;
    for (int gi = 0; gi < groups; ++gi) {
      int d1 = rand_int(rng, 1, p - 1);
      std::string mid = "m" + std::to_string(gi);
      int leaves = rand_int(rng, 2, 3);
      edges.push_back({"r", mid, static_cast<Weight>(d1)});
      for (int l = 0; l < leaves; ++l)
        edges.push_back({mid, "x" + std::to_string(id++), static_cast<Weight>(p - d1)});
    }
    edges.push_back({"r", "x" + std::to_string(id++), static_cast<Weight>(p)});
    inst.tree = tree_from_edges(edges);
    if (!inst.tree.is_ultrametric()) continue;
    for (int x : inst.tree.taxa())
      inst.projects[x] = {{0, Rational(0)}, {1, Rational(rand_int(rng, 1, 6), 6)}};
    inst.budget = rand_int(rng, 0, id);
    inst.target = Rational(rand_int(rng, 0, 3 * p), 2);
    GnapResult greedy = unitcost_ultrametric_h2_greedy(inst);
    GnapResult bf = gnap_brute_force(inst);
    CHECK(greedy.yes == bf.yes);
    CHECK(greedy.solution->value == bf.solution->value);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("penalty sum to unit-cost nap generator preserves the answer") {
  Rng rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    PenaltySumInstance ps;
    int m = rand_int(rng, 1, 6);
    for (int i = 0; i < m; ++i) {
      ps.a.push_back(Rational(rand_int(rng, 1, 6), rand_int(rng, 1, 3)));
      ps.b.push_back(Rational(rand_int(rng, 1, 5), 6));
    }
    ps.k = rand_int(rng, 0, m);
    ps.q = rand_int(rng, 1, 4);
    ps.target = Rational(rand_int(rng, 0, 8), rand_int(rng, 1, 2));
    bool lhs = penalty_sum_brute_force(ps).yes;
    GnapInstance nap = gen_unitcost_nap_from_penalty_sum(ps);
    bool rhs = gnap_brute_force(nap).yes;
    CHECK(lhs == rhs);
    CHECK(nap.tree.height() == 2);
    CHECK(nap.tree.g.out_degree(nap.tree.root) == 1);
  }
}

TEST_CASE("generator trivial corners") {
  PenaltySumInstance ps;
  ps.a = {Rational(5)};
  ps.b = {Rational(1, 2)};
  ps.k = 0;
  ps.q = 2;
  ps.target = Rational(3);  // k=0 and D>0: no on both sides
  CHECK_FALSE(penalty_sum_brute_force(ps).yes);
  CHECK_FALSE(gnap_brute_force(gen_unitcost_nap_from_penalty_sum(ps)).yes);
  ps.k = 1;  // single-tuple yes maps to yes
  CHECK(penalty_sum_brute_force(ps).yes);
  CHECK(gnap_brute_force(gen_unitcost_nap_from_penalty_sum(ps)).yes);
}

TEST_CASE("dominated project normalization preserves the optimum") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    GnapInstance inst = random_instance(rng, 4, 3, 6, 6);
    GnapInstance raw = inst;
    for (auto& [x, list] : raw.projects)
      list.push_back({list[0].cost + 7, list[0].prob});  // dominated duplicate
    GnapInstance norm = raw.normalized();
    GnapResult a = gnap_brute_force(inst);
    GnapResult b = gnap_brute_force(norm);
    CHECK(a.yes == b.yes);
    if (a.solution && b.solution) CHECK(a.solution->value == b.solution->value);
  }
}

TEST_CASE("solver yes answers recompute above target via gnap_expected_pd") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    GnapInstance inst = random_instance(rng, 4, 3, 6, 4);
    for (GnapResult res : {gnap_dp_varc_varw(inst), gnap_dp_budget_varw(inst)}) {
      if (!res.solution) continue;
      std::map<int, Rational> survival;
      for (const auto& [x, j] : res.solution->choice)
        survival[x] = inst.projects.at(x)[j].prob;
      CHECK((gnap_expected_pd(inst.tree, survival) >= inst.target) == res.yes);
    }
  }
}
