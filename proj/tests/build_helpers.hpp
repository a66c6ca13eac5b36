#pragma once

// Small constructors shared by the test binaries.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pdark/phylo.hpp"

namespace pdark::testutil {

struct EdgeSpec {
  std::string from, to;
  Weight weight = 1;
};

inline PhyloDag dag_from_edges(const std::vector<EdgeSpec>& edges,
                               std::map<std::string, int>* names = nullptr) {
  PhyloDag g;
  std::map<std::string, int> ids;
  auto vid = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    int v = g.add_vertex(name);
    ids.emplace(name, v);
    return v;
  };
  for (const EdgeSpec& e : edges) g.add_edge(vid(e.from), vid(e.to), e.weight);
  if (names) *names = ids;
  // Internal vertices carry no taxon label.
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!g.is_leaf(v)) g.set_label(v, "");
  return g;
}

inline PhyloTree tree_from_edges(const std::vector<EdgeSpec>& edges,
                                 bool allow_unary = false,
                                 bool allow_zero = false) {
  PhyloTree t;
  t.g = dag_from_edges(edges);
  t.allow_unary = allow_unary;
  t.allow_zero_weights = allow_zero;
  auto r = t.g.find_root();
  if (!r) throw input_error("test tree has no unique root");
  t.root = *r;
  t.validate();
  return t;
}

inline PhyloNetwork network_from_edges(
    const std::vector<EdgeSpec>& edges,
    const std::vector<std::tuple<std::string, std::string, Rational>>& inheritance = {}) {
  PhyloNetwork n;
  std::map<std::string, int> names;
  n.g = dag_from_edges(edges, &names);
  auto r = n.g.find_root();
  if (!r) throw input_error("test network has no unique root");
  n.root = *r;
  for (const auto& [from, to, p] : inheritance) {
    bool found = false;
    for (int e = 0; e < n.g.num_edges(); ++e) {
      if (names.at(from) == n.g.edge(e).from && names.at(to) == n.g.edge(e).to) {
        n.inheritance[e] = p;
        found = true;
      }
    }
    if (!found) throw input_error("inheritance on unknown edge " + from + "->" + to);
  }
  n.validate();
  return n;
}

// Fig. 2.1: five taxa, PD({x2,x3,x5}) = 24.
inline PhyloTree example_tree_fig21() {
  return tree_from_edges({
      {"v0", "x1", 1},
      {"v0", "v2", 1},
      {"v2", "v3", 5},
      {"v2", "v4", 10},
      {"v3", "x2", 2},
      {"v3", "x3", 4},
      {"v4", "x4", 1},
      {"v4", "x5", 2},
  });
}

// Fig. 1.1 (Acropora corals); unlabeled edges have weight 0.
inline PhyloTree coral_tree_fig11() {
  return tree_from_edges(
      {
          {"r", "A", 150},
          {"r", "e", 113},
          {"A", "C", 154},
          {"A", "d", 0},
          {"C", "D", 0},
          {"C", "c", 66},
          {"D", "a", 0},
          {"D", "b", 0},
      },
      /*allow_unary=*/false, /*allow_zero=*/true);
}

}  // namespace pdark::testutil
