#include "doctest.h"

#include <map>

#include "build_helpers.hpp"
#include "pdark/phylo.hpp"
#include "pdark/util.hpp"

using namespace pdark;
using namespace pdark::testutil;

TEST_CASE("pd_value reproduces the five-taxon example") {
  PhyloTree t = example_tree_fig21();
  CHECK(pd_value(t, taxa_from_labels(t.g, {"x2", "x3", "x5"})) == 24);
  CHECK(pd_value(t, {}) == 0);
  CHECK(pd_value(t, t.taxa()) == t.g.total_weight());
  CHECK_THROWS_AS(taxa_from_labels(t.g, {"nope"}), input_error);
}

TEST_CASE("pd_value on the coral tree with zero-weight edges") {
  PhyloTree t = coral_tree_fig11();
  CHECK(pd_value(t, taxa_from_labels(t.g, {"a", "c", "e"})) == 483);
  CHECK(pd_value(t, taxa_from_labels(t.g, {"a", "c"})) == 370);
}

TEST_CASE("pd_value is monotone under subset inclusion") {
  PhyloTree t = example_tree_fig21();
  auto taxa = t.taxa();
  int n = static_cast<int>(taxa.size());
  for (std::uint64_t sub = 0; sub < (1u << n); ++sub) {
    TaxonSet a;
    for (int i = 0; i < n; ++i)
      if (sub & (1u << i)) a.push_back(taxa[i]);
    Weight pa = pd_value(t, a);
    for (int i = 0; i < n; ++i) {
      if (sub & (1u << i)) continue;
      TaxonSet b = a;
      b.push_back(taxa[i]);
      std::sort(b.begin(), b.end());
      CHECK(pd_value(t, b) >= pa);
    }
  }
}

TEST_CASE("expected_pd reproduces the four-taxon example spend") {
  // Fig. 1.2: spending (2,1,0,5) on taxa (a,b,c,d) yields 160.
  PhyloTree t = tree_from_edges({
      {"r", "a", 80},
      {"r", "v", 100},
      {"v", "b", 50},
      {"v", "c", 30},
      {"v", "d", 70},
  });
  std::map<int, Rational> w;
  w[*t.g.vertex_by_label("a")] = Rational(1, 2);
  w[*t.g.vertex_by_label("b")] = Rational(1, 5);
  w[*t.g.vertex_by_label("c")] = Rational(0);
  w[*t.g.vertex_by_label("d")] = Rational(3, 5);
  CHECK(expected_pd(t, w) == Rational(160));

  // All probabilities 1: degenerates to pd_value on the full taxa set.
  for (auto& [k, v] : w) v = Rational(1);
  CHECK(expected_pd(t, w) == Rational(pd_value(t, t.taxa())));
  for (auto& [k, v] : w) v = Rational(0);
  CHECK(expected_pd(t, w) == Rational(0));
  w[*t.g.vertex_by_label("a")] = Rational(3, 2);
  CHECK_THROWS_AS(expected_pd(t, w), input_error);
}

TEST_CASE("appd equals pd on trees and counts every affected edge") {
  PhyloNetwork n = network_from_edges({
      {"r", "u", 2},
      {"r", "v", 3},
      {"u", "x", 1},
      {"u", "m", 1},
      {"v", "m", 1},
      {"v", "y", 4},
      {"m", "z", 2},
  });
  CHECK(appd_value(n, n.taxa()) == n.g.total_weight());
  // z sits below the reticulation m: both in-paths are affected.
  CHECK(appd_value(n, taxa_from_labels(n.g, {"z"})) == 2 + 3 + 1 + 1 + 2);

  PhyloTree t = example_tree_fig21();
  PhyloNetwork as_net;
  as_net.g = t.g;
  as_net.root = t.root;
  auto taxa = t.taxa();
  for (std::uint64_t sub = 0; sub < (1u << taxa.size()); ++sub) {
    TaxonSet a;
    for (size_t i = 0; i < taxa.size(); ++i)
      if (sub & (1u << i)) a.push_back(taxa[i]);
    CHECK(appd_value(as_net, a) == pd_value(t, a));
  }
}

TEST_CASE("netpd gamma recursion: unit inheritance matches appd") {
  PhyloNetwork n = network_from_edges(
      {
          {"r", "u", 2},
          {"r", "v", 3},
          {"u", "x", 1},
          {"u", "m", 1},
          {"v", "m", 1},
          {"v", "y", 4},
          {"m", "z", 2},
      },
      {{"u", "m", Rational(1)}, {"v", "m", Rational(1)}});
  auto taxa = n.taxa();
  for (std::uint64_t sub = 0; sub < (1u << taxa.size()); ++sub) {
    TaxonSet a;
    for (size_t i = 0; i < taxa.size(); ++i)
      if (sub & (1u << i)) a.push_back(taxa[i]);
    CHECK(netpd_value(n, a) == Rational(appd_value(n, a)));
  }
}

TEST_CASE("netpd leaf-gadget reproduces gamma = q at the top edge") {
  // p(x v2) = q/(2-q), p(v1 v2) = q/2 with q = 3/5; saving x* but not x-
  // gives gamma = q on the edge entering the gadget.
  Rational q(3, 5);
  PhyloNetwork n = network_from_edges(
      {
          {"r", "x", 7},
          {"r", "other", 1},
          {"x", "v1", 1},
          {"x", "v2", 1},
          {"v1", "v2", 1},
          {"v1", "xminus", 1},
          {"v2", "xstar", 5},
      },
      {{"x", "v2", q / (Rational(2) - q)}, {"v1", "v2", q / Rational(2)}});
  auto gamma = netpd_gamma(n, taxa_from_labels(n.g, {"xstar"}));
  int top = -1;  // the root edge entering the gadget (its head is internal)
  for (int e : n.g.out_edges(n.root))
    if (!n.g.is_leaf(n.g.edge(e).to)) top = e;
  REQUIRE(top >= 0);
  CHECK(gamma[top] == q);
  for (const Rational& g : gamma) {
    CHECK(g >= Rational(0));
    CHECK(g <= Rational(1));
  }
  CHECK(netpd_value(n, {}) == Rational(0));
  // Missing inheritance raises an input error.
  PhyloNetwork broken = n;
  broken.inheritance.clear();
  CHECK_THROWS_AS(netpd_value(broken, {}), input_error);
}

TEST_CASE("tree structure queries") {
  PhyloTree t = example_tree_fig21();
  CHECK(t.height() == 3);
  CHECK_FALSE(t.is_star());
  CHECK_FALSE(t.is_ultrametric());
  PhyloTree star = tree_from_edges({{"r", "a", 2}, {"r", "b", 2}, {"r", "c", 2}});
  CHECK(star.is_star());
  CHECK(star.is_ultrametric());
  CHECK(star.height() == 1);
}

TEST_CASE("max_pd_greedy is exact on small trees") {
  PhyloTree t = example_tree_fig21();
  auto taxa = t.taxa();
  MaxPdProfile prof = max_pd_greedy(t, static_cast<int>(taxa.size()));
  for (int k = 0; k <= static_cast<int>(taxa.size()); ++k) {
    Weight best = 0;
    for (std::uint64_t sub = 0; sub < (1u << taxa.size()); ++sub) {
      if (__builtin_popcountll(sub) > k) continue;
      TaxonSet a;
      for (size_t i = 0; i < taxa.size(); ++i)
        if (sub & (1u << i)) a.push_back(taxa[i]);
      best = std::max(best, pd_value(t, a));
    }
    CHECK(prof.best_pd[k] == best);
  }
  // Fig. 2.1 caption set attains 24, so the optimum for k=3 is at least 24.
  CHECK(prof.best_pd[3] >= 24);
}

TEST_CASE("network level counts reticulations per biconnected block") {
  PhyloNetwork n = network_from_edges({
      {"r", "u", 1},
      {"r", "v", 1},
      {"u", "m", 1},
      {"v", "m", 1},
      {"u", "x", 1},
      {"v", "y", 1},
      {"m", "z", 1},
  });
  CHECK(n.level() == 1);
  CHECK(n.num_reticulations() == 1);
  CHECK(n.reticulation_edge_count() == 1);
  PhyloTree t = example_tree_fig21();
  PhyloNetwork tn;
  tn.g = t.g;
  tn.root = t.root;
  CHECK(tn.level() == 0);
  CHECK(tn.is_tree());
}
