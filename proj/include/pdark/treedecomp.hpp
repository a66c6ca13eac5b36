#pragma once

#include <utility>
#include <vector>

#include "pdark/util.hpp"

namespace pdark {

// Undirected simple graph on vertices 0..n-1.
struct UGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

enum class NodeKind { Leaf, IntroduceVertex, IntroduceEdge, Forget, Join };

struct DecompNode {
  NodeKind kind = NodeKind::Leaf;
  std::vector<int> bag;         // sorted vertex ids
  int child1 = -1, child2 = -1;
  int vertex = -1;              // introduced/forgotten vertex
  int edge = -1;                // index into UGraph::edges for IntroduceEdge
};

// Rooted nice decomposition: root and leaf bags are empty, every edge is
// introduced exactly once (right before an endpoint is forgotten).
struct NiceTreeDecomposition {
  std::vector<DecompNode> nodes;  // children precede parents
  int root = -1;
  int width = 0;

  // Verifies the three tree-decomposition properties plus the nice-node shape
  // and that every edge is introduced exactly once. Throws validation_error.
  void validate(const UGraph& g) const;
};

// Raw decomposition (tree of bags) as accepted from callers.
struct RawDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<std::pair<int, int>> tree_edges;
};

// Builds a nice decomposition. Uses the supplied raw decomposition when given
// (validated first), otherwise runs the min-fill heuristic with lexicographic
// tie-breaking. Handles disconnected graphs.
NiceTreeDecomposition nice_tree_decomposition(const UGraph& g);
NiceTreeDecomposition nice_tree_decomposition(const UGraph& g, const RawDecomposition& supplied);

// Exhaustive minimum-width search, for oracle tests on tiny graphs.
int exact_treewidth(const UGraph& g);

}  // namespace pdark
