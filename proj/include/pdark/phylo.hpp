#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdark/rational.hpp"
#include "pdark/util.hpp"

namespace pdark {

using Weight = long long;
using TaxonSet = std::vector<int>;  // sorted taxon vertex ids

// Rooted DAG with positive integer edge weights and taxon-labeled leaves.
// Trees and networks share this structure; validation differs.
struct Edge {
  int from = -1;
  int to = -1;
  Weight weight = 1;
};

class PhyloDag {
 public:
  int add_vertex(const std::string& label = "") {
    labels_.push_back(label);
    adj_dirty_ = true;
    return static_cast<int>(labels_.size()) - 1;
  }
  int add_edge(int from, int to, Weight w) {
    edges_.push_back({from, to, w});
    adj_dirty_ = true;
    return static_cast<int>(edges_.size()) - 1;
  }

  int num_vertices() const { return static_cast<int>(labels_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  Edge& edge(int e) { adj_dirty_ = true; return edges_[e]; }
  const Edge& edge(int e) const { return edges_[e]; }

  const std::string& label(int v) const { return labels_[v]; }
  void set_label(int v, const std::string& s) { labels_[v] = s; }

  const std::vector<int>& out_edges(int v) const { build_adj(); return out_[v]; }
  const std::vector<int>& in_edges(int v) const { build_adj(); return in_[v]; }
  int out_degree(int v) const { return static_cast<int>(out_edges(v).size()); }
  int in_degree(int v) const { return static_cast<int>(in_edges(v).size()); }
  bool is_leaf(int v) const { return out_degree(v) == 0; }

  // Leaves in vertex order.
  std::vector<int> leaves() const {
    std::vector<int> ls;
    for (int v = 0; v < num_vertices(); ++v)
      if (is_leaf(v)) ls.push_back(v);
    return ls;
  }

  std::optional<int> find_root() const {
    std::optional<int> root;
    for (int v = 0; v < num_vertices(); ++v)
      if (in_degree(v) == 0) {
        if (root) return std::nullopt;  // not unique
        root = v;
      }
    return root;
  }

  std::optional<int> vertex_by_label(const std::string& s) const {
    for (int v = 0; v < num_vertices(); ++v)
      if (labels_[v] == s) return v;
    return std::nullopt;
  }

  bool is_acyclic() const {
    std::vector<int> indeg(num_vertices());
    for (const Edge& e : edges_) ++indeg[e.to];
    std::vector<int> stack;
    for (int v = 0; v < num_vertices(); ++v)
      if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++seen;
      for (int e : out_edges(v))
        if (--indeg[edges_[e].to] == 0) stack.push_back(edges_[e].to);
    }
    return seen == num_vertices();
  }

  std::vector<int> topological_order() const {
    std::vector<int> indeg(num_vertices()), order;
    for (const Edge& e : edges_) ++indeg[e.to];
    std::vector<int> stack;
    for (int v = 0; v < num_vertices(); ++v)
      if (indeg[v] == 0) stack.push_back(v);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int e : out_edges(v))
        if (--indeg[edges_[e].to] == 0) stack.push_back(edges_[e].to);
    }
    return order;
  }

  Weight total_weight() const {
    Weight t = 0;
    for (const Edge& e : edges_) t += e.weight;
    return t;
  }
  Weight max_weight() const {
    Weight t = 0;
    for (const Edge& e : edges_) t = std::max(t, e.weight);
    return t;
  }

 private:
  void build_adj() const {
    if (!adj_dirty_) return;
    out_.assign(labels_.size(), {});
    in_.assign(labels_.size(), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      out_[edges_[e].from].push_back(e);
      in_[edges_[e].to].push_back(e);
    }
    adj_dirty_ = false;
  }

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  mutable std::vector<std::vector<int>> out_, in_;
  mutable bool adj_dirty_ = true;
};

// ---------------------------------------------------------------------------
// Phylogenetic X-tree: single root, all internal out-degrees >= 2 unless the
// object was produced by a transformation that permits unary vertices.
struct PhyloTree {
  PhyloDag g;
  int root = -1;
  bool allow_unary = false;       // set by transformations (e.g. root of degree 1)
  bool allow_zero_weights = false;  // evaluation-only inputs (e.g. Fig 1.1 corals)

  void validate() const;
  std::vector<int> taxa() const { return g.leaves(); }
  int parent(int v) const {
    const auto& in = g.in_edges(v);
    return in.empty() ? -1 : g.edge(in[0]).from;
  }
  bool is_star() const {
    for (int v = 0; v < g.num_vertices(); ++v)
      if (v != root && !g.is_leaf(v)) return false;
    return true;
  }
  int height() const;
  // Weighted root-to-leaf distance is the same for all leaves.
  bool is_ultrametric() const;
};

// Phylogenetic X-network: single root, leaves have in-degree 1, every vertex
// has in-degree <= 1 or out-degree <= 1. Reticulations are the in-degree >= 2
// vertices; `inheritance` (if used) is defined on edges entering reticulations.
struct PhyloNetwork {
  PhyloDag g;
  int root = -1;
  bool allow_zero_weights = false;  // transient kernelization state
  std::map<int, Rational> inheritance;  // edge index -> p(e)

  void validate(bool require_inheritance = false) const;
  std::vector<int> taxa() const { return g.leaves(); }
  bool is_reticulation(int v) const { return g.in_degree(v) >= 2 && !g.is_leaf(v); }
  std::vector<int> reticulations() const {
    std::vector<int> rs;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (is_reticulation(v)) rs.push_back(v);
    return rs;
  }
  int num_reticulations() const { return static_cast<int>(reticulations().size()); }
  // retE = |E| - |V| + 1: edges to delete until the network is a tree.
  int reticulation_edge_count() const {
    return g.num_edges() - g.num_vertices() + 1;
  }
  bool is_tree() const { return reticulation_edge_count() == 0; }
  bool is_binary() const;
  // Maximum reticulation count over biconnected blocks of the underlying graph.
  int level() const;
  PhyloTree as_tree() const;  // requires is_tree()
};

// ---------------------------------------------------------------------------
// Diversity measures.

// Marks every vertex with a descendant in `subset` (taxa given as vertex ids).
std::vector<char> mark_ancestors(const PhyloDag& g, const TaxonSet& subset);

// PD per Eq. (2.1): total weight of edges with an offspring in `subset`.
Weight pd_value(const PhyloTree& tree, const TaxonSet& subset);

// Expected PD: sum over edges of weight * (1 - prod over offspring of (1-w)).
Rational expected_pd(const PhyloTree& tree, const std::map<int, Rational>& survival);

// All-paths PD on networks: total weight of edges affected by `subset`.
Weight appd_value(const PhyloNetwork& net, const TaxonSet& subset);

// gamma_Z(e) per the three-case recursion (leaf / reticulation / tree vertex),
// exact rationals. Returned indexed by edge id.
std::vector<Rational> netpd_gamma(const PhyloNetwork& net, const TaxonSet& subset);

// NetPD = sum over edges of weight * gamma_Z(e).
Rational netpd_value(const PhyloNetwork& net, const TaxonSet& subset);

// Faith's greedy algorithm for Max-PD on trees: exact. Returns, for every
// budget 0..max_k, the best achievable PD, plus the greedy insertion order.
struct MaxPdProfile {
  std::vector<Weight> best_pd;  // best_pd[i] = optimum over subsets of size <= i
  std::vector<int> order;       // taxa in greedy insertion order
};
MaxPdProfile max_pd_greedy(const PhyloTree& tree, int max_k);

// Resolves taxon labels to vertex ids; unknown labels raise input_error.
TaxonSet taxa_from_labels(const PhyloDag& g, const std::vector<std::string>& labels);

}  // namespace pdark
