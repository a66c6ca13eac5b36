#include "doctest.h"

#include <set>

#include "build_helpers.hpp"
#include "pdark/pdd.hpp"
#include "pdark/util.hpp"

using namespace pdark;
using namespace pdark::testutil;

namespace {

// Benguela ecosystem food-web (phytoplankton is the only source).
PddInstance benguela(int k, Weight d) {
  PddInstance inst;
  std::vector<EdgeSpec> edges;
  std::vector<std::string> names{"Phy", "Zoo", "Sd", "W", "Sl", "H", "T", "R", "V"};
  for (const auto& n : names) edges.push_back({"root", n, 1});
  inst.tree = tree_from_edges(edges);
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  const char* web[][2] = {{"Phy", "Zoo"}, {"Phy", "Sd"}, {"Zoo", "W"},  {"Zoo", "Sd"},
                          {"Zoo", "Sl"},  {"Zoo", "T"},  {"Sd", "H"},   {"Sd", "T"},
                          {"Sd", "R"},    {"Sd", "V"},   {"Sl", "H"},   {"Sl", "T"},
                          {"Sl", "V"},    {"Sl", "R"},   {"H", "V"},    {"H", "R"},
                          {"H", "T"},     {"T", "V"},    {"T", "R"}};
  for (auto& [u, v] : web) inst.web.edges.push_back({id(u), id(v)});
  inst.k = k;
  inst.target = d;
  return inst;
}

PddInstance random_instance(Rng& rng, int max_taxa, int max_weight, double edge_prob,
                            bool star_tree) {
  int n = rand_int(rng, 1, max_taxa);
  std::vector<EdgeSpec> edges;
  bool nest = !star_tree && n >= 3 && (rng() & 1);
  for (int i = 0; i < n; ++i) {
    std::string parent = nest && i < 2 ? "m" : "r";
    edges.push_back(
        {parent, "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, max_weight))});
  }
  if (nest) edges.push_back({"r", "m", static_cast<Weight>(rand_int(rng, 1, max_weight))});
  if (n == 1) edges.push_back({"r", "pad0", 1});
  PddInstance inst;
  inst.tree = tree_from_edges(edges);
  std::vector<int> taxa = inst.tree.taxa();
  for (size_t i = 0; i < taxa.size(); ++i)
    for (size_t j = i + 1; j < taxa.size(); ++j)
      if (std::uniform_real_distribution<>(0, 1)(rng) < edge_prob)
        inst.web.edges.push_back({taxa[i], taxa[j]});
  inst.k = rand_int(rng, 0, static_cast<int>(taxa.size()));
  inst.target = rand_int(rng, 0, 3 * max_weight);
  return inst;
}

void check_witness(const PddInstance& inst, const PddResult& res) {
  if (!res.yes) return;
  REQUIRE(res.witness.has_value());
  CHECK(static_cast<int>(res.witness->size()) <= std::max(inst.k, 0));
  CHECK(viability_check(inst, *res.witness));
  CHECK(pd_value(inst.tree, *res.witness) >= inst.target);
}

}  // namespace

TEST_CASE("benguela viability") {
  PddInstance inst = benguela(3, 0);
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  CHECK_FALSE(viability_check(inst, {id("W")}));
  CHECK(viability_check(inst, {id("W"), id("Zoo"), id("Phy")}));
  CHECK(viability_check(inst, {}));
  CHECK(viability_check(inst, inst.web.sources(inst.tree.taxa())));
}

TEST_CASE("benguela brute force with k=3 finds a viable triple") {
  PddInstance inst = benguela(3, 3);  // unit weights: any viable triple reaches 3
  PddResult res = pdd_brute_force(inst);
  CHECK(res.yes);
  check_witness(inst, res);
  CHECK(res.witness->size() == 3);
  // k = |X| saves everything.
  PddInstance all = benguela(9, 9);
  CHECK(pdd_brute_force(all).yes);
  // k = 0 only reaches D <= 0.
  PddInstance none = benguela(0, 1);
  CHECK_FALSE(pdd_brute_force(none).yes);
  none.target = 0;
  CHECK(pdd_brute_force(none).yes);
}

TEST_CASE("normalize_single_source preserves answers") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    PddInstance inst = random_instance(rng, 5, 3, 0.3, true);
    PddInstance norm = normalize_single_source(inst);
    CHECK(norm.web.sources(norm.tree.taxa()).size() == 1);
    CHECK(norm.target == 2 * inst.target + 1);
    CHECK(norm.k == inst.k + 1);
    CHECK(pdd_brute_force(inst).yes == pdd_brute_force(norm).yes);
  }
  PddInstance ex = benguela(2, 3);
  CHECK(normalize_single_source(ex).target == 7);
}

TEST_CASE("reduction rules preserve answers and fire as documented") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    PddInstance inst = random_instance(rng, 6, 3, 0.3, rng() & 1);
    bool before = pdd_brute_force(inst).yes;
    PddReduced red = apply_reduction_rules(inst);
    bool after = red.early_yes ? true : pdd_brute_force(*red.instance).yes;
    CHECK(before == after);
    if (red.early_yes) {
      CHECK(viability_check(inst, *red.early_yes));
      CHECK(pd_value(inst.tree, *red.early_yes) >= inst.target);
    }
  }
  // An unreachable taxon is removed by RR 1.
  PddInstance inst;
  inst.tree = tree_from_edges({{"r", "a", 2}, {"r", "b", 2}, {"r", "c", 2}});
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  inst.web.edges = {{id("a"), id("b")}, {id("b"), id("c")}};
  inst.k = 2;  // c needs a chain of 3
  inst.target = 2;
  PddReduced red = apply_reduction_rules(inst);
  REQUIRE(red.early_yes.has_value());  // heavy edge fires (max weight >= D)
  // Without the heavy edge: c disappears.
  inst.target = 5;
  red = apply_reduction_rules(inst);
  REQUIRE(red.instance.has_value());
  CHECK(red.instance->tree.taxa().size() == 2);
}

TEST_CASE("colored star dp corner cases") {
  PddInstance inst;
  inst.tree = tree_from_edges({{"r", "a", 2}, {"r", "b", 3}, {"r", "c", 1}});
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  inst.web.edges = {{id("a"), id("b")}, {id("a"), id("c")}};
  inst.k = 2;
  inst.target = 5;
  std::map<int, int> colors{{id("a"), 0}, {id("b"), 1}, {id("c"), 1}};
  PddResult res = spdd_colored_dp(inst, colors);
  CHECK(res.yes);  // {a,b} is colorful and viable with PD 5
  check_witness(inst, res);
  // All-same-color limits solutions to single taxa.
  std::map<int, int> mono{{id("a"), 0}, {id("b"), 0}, {id("c"), 0}};
  inst.target = 3;
  CHECK_FALSE(spdd_colored_dp(inst, mono).yes);
  inst.target = 2;
  CHECK(spdd_colored_dp(inst, mono).yes);  // {a} alone
}

TEST_CASE("spdd_solve_k equals brute force on random stars") {
  Rng rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    PddInstance inst = random_instance(rng, 7, 3, 0.35, true);
    if (inst.k > 3) inst.k = 3;
    PddResult bf = pdd_brute_force(inst);
    PddResult cc = spdd_solve_k(inst);
    CHECK(cc.yes == bf.yes);
    check_witness(inst, cc);
  }
  // k=1 star: the best single source decides.
  PddInstance one = benguela(1, 1);
  CHECK(spdd_solve_k(one).yes == pdd_brute_force(one).yes);
}

TEST_CASE("pdd_solve_k_height equals brute force on shallow trees") {
  Rng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    PddInstance inst = random_instance(rng, 5, 2, 0.3, false);
    if (inst.k > 2) inst.k = 2;
    PddResult bf = pdd_brute_force(inst);
    PddResult kh = pdd_solve_k_height(inst);
    CHECK(kh.yes == bf.yes);
    check_witness(inst, kh);
  }
}

TEST_CASE("pdd_solve_k_height on a star degenerates to the star solver") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    PddInstance inst = random_instance(rng, 5, 2, 0.3, true);
    if (inst.k > 2) inst.k = 2;
    CHECK(pdd_solve_k_height(inst).yes == spdd_solve_k(inst).yes);
  }
}

TEST_CASE("pdd colored D dp corner cases") {
  PddInstance inst;
  inst.tree = tree_from_edges({{"r", "a", 1}, {"r", "b", 1}});
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  inst.web.edges = {{id("a"), id("b")}};
  inst.k = 2;
  inst.target = 1;
  PddColoring coloring;
  coloring.edges.num_colors = 1;
  coloring.edges.edge_mask = {1, 1};
  coloring.k = 2;
  coloring.taxon_color = {{id("a"), 0}, {id("b"), 1}};
  PddResult res = pdd_colored_D_dp(inst, coloring);
  CHECK(res.yes);  // D=1 with a single covering edge
  check_witness(inst, res);
}

TEST_CASE("pdd_solve_D equals brute force on random instances") {
  Rng rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    PddInstance inst = random_instance(rng, 5, 1, 0.3, rng() & 1);
    inst.target = rand_int(rng, 0, 2);
    if (inst.k > 3) inst.k = 3;
    PddResult bf = pdd_brute_force(inst);
    PddResult cc = pdd_solve_D(inst);
    CHECK(cc.yes == bf.yes);
    check_witness(inst, cc);
  }
  // Heavy-edge short-circuit and D=0.
  PddInstance heavy = benguela(1, 1);
  CHECK(pdd_solve_D(heavy).yes);
  PddInstance zero = benguela(0, 0);
  CHECK(pdd_solve_D(zero).yes);
}

TEST_CASE("treewidth dp matches brute force on tree food-webs (|X| <= 8)") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rand_int(rng, 1, 8);
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
      edges.push_back({"r", "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    if (n == 1) edges.push_back({"r", "pad", 1});
    PddInstance inst;
    inst.tree = tree_from_edges(edges);
    std::vector<int> taxa = inst.tree.taxa();
    // Random oriented tree on the taxa (an out-tree from taxon 0 with random
    // edge flips keeps the underlying graph a tree).
    for (int i = 1; i < static_cast<int>(taxa.size()); ++i) {
      int p = rand_int(rng, 0, i - 1);
      if (rng() & 1)
        inst.web.edges.push_back({taxa[p], taxa[i]});
      else
        inst.web.edges.push_back({taxa[i], taxa[p]});
    }
    inst.k = rand_int(rng, 0, n);
    inst.target = rand_int(rng, 0, 8);
    PddResult bf = pdd_brute_force(inst);
    PddResult tw = spdd_treewidth_dp(inst);
    CHECK(tw.yes == bf.yes);
    check_witness(inst, tw);
  }
}

TEST_CASE("treewidth dp on edgeless webs reduces to greedy top-k sources") {
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    PddInstance inst = random_instance(rng, 6, 4, 0, true);
    PddResult bf = pdd_brute_force(inst);
    PddResult tw = spdd_treewidth_dp(inst);
    CHECK(tw.yes == bf.yes);
  }
}

TEST_CASE("treewidth dp matches brute force on width-2 webs") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    PddInstance inst = random_instance(rng, 6, 3, 0.35, true);
    PddResult bf = pdd_brute_force(inst);
    PddResult tw = spdd_treewidth_dp(inst);
    CHECK(tw.yes == bf.yes);
    check_witness(inst, tw);
  }
}

TEST_CASE("cluster solver agrees with brute force") {
  Rng rng(29);
  int ran = 0;
  for (int trial = 0; trial < 200 && ran < 60; ++trial) {
    // Build a web that is a disjoint union of out-stars plus a modulator.
    int n = rand_int(rng, 2, 7);
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
      edges.push_back({"r", "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    PddInstance inst;
    inst.tree = tree_from_edges(edges);
    std::vector<int> taxa = inst.tree.taxa();
    int mod_size = rand_int(rng, 0, std::min(2, n - 1));
    std::vector<int> modulator(taxa.begin(), taxa.begin() + mod_size);
    std::vector<int> free_taxa(taxa.begin() + mod_size, taxa.end());
    // Partition the free taxa into stars.
    size_t i = 0;
    while (i < free_taxa.size()) {
      size_t sz = 1 + rng() % std::min<size_t>(3, free_taxa.size() - i);
      for (size_t j = 1; j < sz; ++j)
        inst.web.edges.push_back({free_taxa[i], free_taxa[i + j]});
      i += sz;
    }
    // Modulator members eat random taxa and feed random free taxa.
    for (int y : modulator) {
      for (int x : free_taxa) {
        if (rng() % 4 == 0) inst.web.edges.push_back({y, x});
        if (rng() % 5 == 0) inst.web.edges.push_back({x, y});
      }
    }
    inst.k = rand_int(rng, 0, n);
    inst.target = rand_int(rng, 0, 10);
    try {
      PddResult cl = spdd_cluster_solver(inst, modulator);
      PddResult bf = pdd_brute_force(inst);
      CHECK(cl.yes == bf.yes);
      check_witness(inst, cl);
      ++ran;
    } catch (const input_error&) {
      // Randomly wired modulator edges can break the source-dominant shape.
    }
  }
  CHECK(ran >= 40);
}

TEST_CASE("cluster solver with modulator covering everything degenerates") {
  PddInstance inst = benguela(3, 3);
  std::vector<int> all = inst.tree.taxa();
  PddResult cl = spdd_cluster_solver(inst, all);
  CHECK(cl.yes == pdd_brute_force(inst).yes);
}

TEST_CASE("hitting set with tree profits solves small instances exactly") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    PhyloTree tree;
    int n = rand_int(rng, 1, 6);
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
      edges.push_back({"r", "u" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    if (n == 1) edges.push_back({"r", "pad", 1});
    tree = tree_from_edges(edges);
    HittingSetTreeProfitInstance inst;
    inst.tree = tree;
    std::vector<int> uni = tree.taxa();
    int fam = rand_int(rng, 0, 3);
    for (int f = 0; f < fam; ++f) {
      std::set<int> s;
      for (int x : uni)
        if (rng() & 1) s.insert(x);
      if (!s.empty()) inst.family.push_back(s);
    }
    inst.k = rand_int(rng, 0, n);
    inst.target = rand_int(rng, 0, 8);
    // Oracle: enumerate all subsets.
    bool oracle = false;
    for (std::uint64_t sub = 0; sub < (1u << uni.size()); ++sub) {
      std::vector<int> s;
      for (size_t i = 0; i < uni.size(); ++i)
        if (sub & (1u << i)) s.push_back(uni[i]);
      if (static_cast<int>(s.size()) > inst.k) continue;
      bool hits = true;
      for (const auto& w : inst.family) {
        bool hit = false;
        for (int x : s)
          if (w.count(x)) hit = true;
        if (!hit) hits = false;
      }
      if (hits && pd_value(tree, s) >= inst.target) oracle = true;
    }
    PddResult res = hitting_set_tree_profits(inst);
    CHECK(res.yes == oracle);
  }
}

TEST_CASE("cocluster solver agrees with brute force") {
  Rng rng(37);
  int ran = 0;
  for (int trial = 0; trial < 200 && ran < 60; ++trial) {
    // Build a co-cluster web: partition into independent sets; all cross
    // edges oriented by index; a small modulator wired arbitrarily.
    int n = rand_int(rng, 2, 7);
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
      edges.push_back({"r", "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    PddInstance inst;
    inst.tree = tree_from_edges(edges);
    std::vector<int> taxa = inst.tree.taxa();
    int mod_size = rand_int(rng, 0, std::min(2, n - 1));
    std::vector<int> modulator(taxa.begin(), taxa.begin() + mod_size);
    std::vector<int> free_taxa(taxa.begin() + mod_size, taxa.end());
    std::map<int, int> part;
    int sets = rand_int(rng, 1, 3);
    for (int x : free_taxa) part[x] = rand_int(rng, 0, sets - 1);
    for (size_t a = 0; a < free_taxa.size(); ++a)
      for (size_t b = a + 1; b < free_taxa.size(); ++b)
        if (part[free_taxa[a]] != part[free_taxa[b]])
          inst.web.edges.push_back({free_taxa[a], free_taxa[b]});
    for (int y : modulator)
      for (int x : free_taxa) {
        if (rng() % 4 == 0) inst.web.edges.push_back({y, x});
        if (rng() % 5 == 0) inst.web.edges.push_back({x, y});
      }
    inst.k = rand_int(rng, 0, n);
    inst.target = rand_int(rng, 0, 10);
    try {
      PddResult cc = spdd_cocluster_solver(inst, modulator);
      PddResult bf = pdd_brute_force(inst);
      CHECK(cc.yes == bf.yes);
      check_witness(inst, cc);
      ++ran;
    } catch (const input_error&) {
    }
  }
  CHECK(ran >= 40);
}

TEST_CASE("flow solver agrees with brute force on conforming instances") {
  Rng rng(41);
  int ran = 0;
  for (int trial = 0; trial < 300 && ran < 110; ++trial) {
    // Tree with a sources branch and a non-sources branch; web = isolated
    // edges from sources to non-sources.
    int pairs = rand_int(rng, 1, 3);
    int extra_sources = rand_int(rng, 0, 2);
    std::vector<EdgeSpec> edges;
    edges.push_back({"r", "S", static_cast<Weight>(rand_int(rng, 1, 3))});
    edges.push_back({"r", "N", static_cast<Weight>(rand_int(rng, 1, 3))});
    PddInstance inst;
    for (int i = 0; i < pairs + extra_sources; ++i)
      edges.push_back({"S", "s" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    for (int i = 0; i < pairs; ++i)
      edges.push_back({"N", "n" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 4))});
    if (pairs + extra_sources < 2) edges.push_back({"S", "sx", 1});
    if (pairs < 2) edges.push_back({"N", "nx", 1});
    inst.tree = tree_from_edges(edges);
    for (int i = 0; i < pairs; ++i)
      inst.web.edges.push_back({*inst.tree.g.vertex_by_label("s" + std::to_string(i)),
                                *inst.tree.g.vertex_by_label("n" + std::to_string(i))});
    inst.k = rand_int(rng, 0, 5);
    inst.target = rand_int(rng, 0, 12);
    try {
      PddResult fl = pdd_flow_solver(inst);
      PddResult bf = pdd_brute_force(inst);
      CHECK(fl.yes == bf.yes);
      check_witness(inst, fl);
      ++ran;
    } catch (const input_error&) {
    }
  }
  CHECK(ran >= 100);
}

TEST_CASE("flow figure: witness {x0,x5,x6,x9} corresponds to a feasible flow") {
  // The source-separating example: orange taxa x0..x3 are non-sources under
  // one branch, green taxa x4..x9 sources under the other; pairs x5->x0,
  // x4->x1 (reindexed), x6 and x9 free sources.
  PddInstance inst;
  inst.tree = tree_from_edges({
      {"r", "u1", 1}, {"r", "u2", 1}, {"r", "u3", 1},
      {"u1", "x0", 1}, {"u1", "v12", 1},
      {"v12", "x1", 1}, {"v12", "x2", 1}, {"v12", "x3", 1},
      {"u2", "x4", 1}, {"u2", "x5", 1}, {"u2", "x6", 1},
      {"u3", "v31", 1}, {"u3", "x9", 1},
      {"v31", "x7", 1}, {"v31", "x8", 1},
  });
  auto id = [&](const char* s) { return *inst.tree.g.vertex_by_label(s); };
  inst.web.edges = {{id("x5"), id("x0")}, {id("x7"), id("x2")},
                    {id("x4"), id("x1")}, {id("x8"), id("x3")}};
  inst.k = 4;
  inst.target = pd_value(inst.tree, {id("x0"), id("x5"), id("x6"), id("x9")});
  PddResult fl = pdd_flow_solver(inst);
  CHECK(fl.yes);
  check_witness(inst, fl);
}

TEST_CASE("outforest kbar solver agrees with brute force") {
  Rng rng(43);
  int ran = 0;
  for (int trial = 0; trial < 200 && ran < 110; ++trial) {
    int n = rand_int(rng, 1, 8);
    std::vector<EdgeSpec> edges;
    bool nest = n >= 3 && (rng() & 1);
    for (int i = 0; i < n; ++i) {
      std::string parent = nest && i < 2 ? "m" : "r";
      edges.push_back({parent, "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 3))});
    }
    if (nest) edges.push_back({"r", "m", static_cast<Weight>(rand_int(rng, 1, 3))});
    if (n == 1) edges.push_back({"r", "pad", 1});
    PddInstance inst;
    inst.tree = tree_from_edges(edges);
    std::vector<int> taxa = inst.tree.taxa();
    // Out-forest web: each taxon gets at most one prey among earlier taxa.
    for (size_t i = 1; i < taxa.size(); ++i)
      if (rng() % 3 != 0)
        inst.web.edges.push_back({taxa[rand_int(rng, 0, static_cast<int>(i) - 1)], taxa[i]});
    int kbar = rand_int(rng, 0, 4);
    inst.k = static_cast<int>(taxa.size()) - kbar;
    if (inst.k < 0) continue;
    Weight total = inst.tree.g.total_weight();
    inst.target = std::max<Weight>(0, total - rand_int(rng, 0, 6));
    PddResult bf = pdd_brute_force(inst, PddBruteAxis::KBar);
    PddResult of = pdd_kbar_outforest_solver(inst);
    CHECK(of.yes == bf.yes);
    check_witness(inst, of);
    ++ran;
  }
  CHECK(ran >= 100);
  // kbar = 0: everything must survive.
  PddInstance all;
  all.tree = tree_from_edges({{"r", "a", 2}, {"r", "b", 3}});
  all.k = 2;
  all.target = 5;
  CHECK(pdd_kbar_outforest_solver(all).yes);
  all.target = 6;
  CHECK_FALSE(pdd_kbar_outforest_solver(all).yes);
}

TEST_CASE("source-dominant solver: force the source, then greedy") {
  Rng rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rand_int(rng, 2, 7);
    std::vector<EdgeSpec> edges;
    bool nest = n >= 3 && (rng() & 1);
    for (int i = 0; i < n; ++i) {
      std::string parent = nest && i < 2 ? "m" : "r";
      edges.push_back({parent, "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, 5))});
    }
    if (nest) edges.push_back({"r", "m", static_cast<Weight>(rand_int(rng, 1, 5))});
    PddInstance inst;
    inst.tree = tree_from_edges(edges);
    std::vector<int> taxa = inst.tree.taxa();
    for (size_t i = 1; i < taxa.size(); ++i) inst.web.edges.push_back({taxa[0], taxa[i]});
    inst.k = rand_int(rng, 0, n);
    inst.target = rand_int(rng, 0, 12);
    PddResult sd = pdd_source_dominant_solve(inst);
    PddResult bf = pdd_brute_force(inst);
    CHECK(sd.yes == bf.yes);
    check_witness(inst, sd);
  }
  // k=1: only the source can be saved.
  PddInstance one;
  one.tree = tree_from_edges({{"r", "a", 2}, {"r", "b", 9}});
  one.web.edges = {{*one.tree.g.vertex_by_label("a"), *one.tree.g.vertex_by_label("b")}};
  one.k = 1;
  one.target = 2;
  CHECK(pdd_source_dominant_solve(one).yes);
  one.target = 3;
  CHECK_FALSE(pdd_source_dominant_solve(one).yes);
  one.k = 0;
  one.target = 1;
  CHECK_FALSE(pdd_source_dominant_solve(one).yes);
}
