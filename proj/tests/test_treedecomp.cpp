#include "doctest.h"
#include "pdark/treedecomp.hpp"
#include "pdark/util.hpp"

using namespace pdark;

TEST_CASE("single edge has width 1") {
  UGraph g{2, {{0, 1}}};
  auto d = nice_tree_decomposition(g);
  CHECK(d.width == 1);
  d.validate(g);
}

TEST_CASE("trees have width 1") {
  UGraph g{6, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}}};
  auto d = nice_tree_decomposition(g);
  CHECK(d.width == 1);
  CHECK(exact_treewidth(g) == 1);
}

TEST_CASE("cycle on four vertices has width 2") {
  UGraph g{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  CHECK(exact_treewidth(g) == 2);
  auto d = nice_tree_decomposition(g);
  CHECK(d.width == 2);
  d.validate(g);
}

TEST_CASE("min-fill matches the exact width on small random graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rand_int(rng, 2, 7);
    UGraph g{n, {}};
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) g.edges.push_back({u, v});
    auto d = nice_tree_decomposition(g);
    d.validate(g);
    CHECK(d.width >= exact_treewidth(g));  // heuristic upper-bounds the optimum
  }
}

TEST_CASE("supplied decompositions are validated and nicified") {
  UGraph g{4, {{0, 1}, {1, 2}, {2, 3}}};
  RawDecomposition raw;
  raw.bags = {{0, 1}, {1, 2}, {2, 3}};
  raw.tree_edges = {{0, 1}, {1, 2}};
  auto d = nice_tree_decomposition(g, raw);
  CHECK(d.width == 1);
  d.validate(g);

  RawDecomposition missing_vertex;
  missing_vertex.bags = {{0, 1}, {1, 2}};
  missing_vertex.tree_edges = {{0, 1}};
  CHECK_THROWS_AS(nice_tree_decomposition(g, missing_vertex), validation_error);

  RawDecomposition missing_edge;
  missing_edge.bags = {{0, 1}, {1, 2}, {3}};
  missing_edge.tree_edges = {{0, 1}, {1, 2}};
  CHECK_THROWS_AS(nice_tree_decomposition(g, missing_edge), validation_error);

  RawDecomposition disconnected_vertex;
  disconnected_vertex.bags = {{0, 1}, {1, 2}, {2, 3}, {1}};
  disconnected_vertex.tree_edges = {{0, 1}, {1, 2}, {2, 3}};
  CHECK_THROWS_AS(nice_tree_decomposition(g, disconnected_vertex), validation_error);
}

TEST_CASE("disconnected graphs decompose componentwise") {
  UGraph g{5, {{0, 1}, {2, 3}}};
  auto d = nice_tree_decomposition(g);
  d.validate(g);
  CHECK(d.width == 1);
}
