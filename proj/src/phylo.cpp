#include "pdark/phylo.hpp"

#include <algorithm>
#include <set>

namespace pdark {

void PhyloTree::validate() const {
  auto r = g.find_root();
  if (!r || *r != root) throw validation_error("tree: root is not the unique in-degree-0 vertex");
  if (!g.is_acyclic()) throw validation_error("tree: cycle detected");
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v != root && g.in_degree(v) != 1)
      throw validation_error("tree: vertex with in-degree != 1");
    if (!g.is_leaf(v) && g.out_degree(v) < 2 && !allow_unary)
      throw validation_error("tree: internal vertex with out-degree < 2");
    if (g.is_leaf(v) && g.label(v).empty())
      throw validation_error("tree: unlabeled leaf");
  }
  std::set<std::string> seen;
  for (int v : g.leaves())
    if (!seen.insert(g.label(v)).second)
      throw validation_error("tree: duplicate taxon label " + g.label(v));
  for (const Edge& e : g.edges())
    if (e.weight < (allow_zero_weights ? 0 : 1))
      throw validation_error("tree: nonpositive edge weight");
}

int PhyloTree::height() const {
  std::vector<int> depth(g.num_vertices(), 0);
  int h = 0;
  for (int v : g.topological_order()) {
    for (int e : g.out_edges(v)) {
      depth[g.edge(e).to] = depth[v] + 1;
      h = std::max(h, depth[g.edge(e).to]);
    }
  }
  return h;
}

bool PhyloTree::is_ultrametric() const {
  std::vector<Weight> dist(g.num_vertices(), 0);
  std::optional<Weight> leaf_dist;
  for (int v : g.topological_order()) {
    for (int e : g.out_edges(v)) dist[g.edge(e).to] = dist[v] + g.edge(e).weight;
  }
  for (int v : g.leaves()) {
    if (leaf_dist && *leaf_dist != dist[v]) return false;
    leaf_dist = dist[v];
  }
  return true;
}

void PhyloNetwork::validate(bool require_inheritance) const {
  auto r = g.find_root();
  if (!r || *r != root) throw validation_error("network: root is not the unique in-degree-0 vertex");
  if (!g.is_acyclic()) throw validation_error("network: cycle detected");
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.is_leaf(v)) {
      if (g.in_degree(v) != 1) throw validation_error("network: leaf with in-degree != 1");
      if (g.label(v).empty()) throw validation_error("network: unlabeled leaf");
    } else if (g.in_degree(v) > 1 && g.out_degree(v) > 1) {
      throw validation_error("network: vertex with in-degree > 1 and out-degree > 1");
    }
  }
  std::set<std::string> seen;
  for (int v : g.leaves())
    if (!seen.insert(g.label(v)).second)
      throw validation_error("network: duplicate taxon label " + g.label(v));
  for (const Edge& e : g.edges())
    if (e.weight < (allow_zero_weights ? 0 : 1))
      throw validation_error("network: nonpositive edge weight");
  if (require_inheritance || !inheritance.empty()) {
    for (int e = 0; e < g.num_edges(); ++e) {
      bool retic_edge = is_reticulation(g.edge(e).to);
      auto it = inheritance.find(e);
      if (retic_edge && it == inheritance.end())
        throw input_error("network: missing inheritance on reticulation edge");
      if (it != inheritance.end()) {
        if (!retic_edge)
          throw validation_error("network: inheritance on non-reticulation edge");
        if (it->second < Rational(0) || it->second > Rational(1))
          throw input_error("network: inheritance outside [0,1]");
      }
    }
  }
}

bool PhyloNetwork::is_binary() const {
  for (int v = 0; v < g.num_vertices(); ++v) {
    int deg = g.in_degree(v) + g.out_degree(v);
    if (v == root) {
      if (g.out_degree(v) != 2) return false;
    } else if (g.is_leaf(v)) {
      if (g.in_degree(v) != 1) return false;
    } else if (deg != 3) {
      return false;
    }
  }
  return true;
}

namespace {

// Biconnected components of the underlying undirected graph, as edge lists.
struct BlockFinder {
  const PhyloDag& g;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
  std::vector<int> num, low;
  std::vector<std::pair<int, int>> stack;  // edge stack as (edge id, _)
  std::vector<std::vector<int>> blocks;
  int counter = 0;

  explicit BlockFinder(const PhyloDag& graph) : g(graph) {
    adj.resize(g.num_vertices());
    for (int e = 0; e < g.num_edges(); ++e) {
      adj[g.edge(e).from].push_back({g.edge(e).to, e});
      adj[g.edge(e).to].push_back({g.edge(e).from, e});
    }
    num.assign(g.num_vertices(), -1);
    low.assign(g.num_vertices(), 0);
    for (int v = 0; v < g.num_vertices(); ++v)
      if (num[v] < 0) dfs(v, -1);
  }

  void dfs(int v, int parent_edge) {
    num[v] = low[v] = counter++;
    for (auto [w, e] : adj[v]) {
      if (e == parent_edge) continue;
      if (num[w] < 0) {
        stack.push_back({e, 0});
        dfs(w, e);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= num[v]) {
          blocks.emplace_back();
          while (true) {
            int top = stack.back().first;
            stack.pop_back();
            blocks.back().push_back(top);
            if (top == e) break;
          }
        }
      } else if (num[w] < num[v]) {
        stack.push_back({e, 0});
        low[v] = std::min(low[v], num[w]);
      }
    }
  }
};

}  // namespace

int PhyloNetwork::level() const {
  BlockFinder bf(g);
  int best = 0;
  for (const auto& block : bf.blocks) {
    std::set<int> verts;
    for (int e : block) {
      verts.insert(g.edge(e).from);
      verts.insert(g.edge(e).to);
    }
    int ret = 0;
    for (int v : verts) {
      if (g.is_leaf(v)) continue;
      int indeg_in_block = 0;
      for (int e : block)
        if (g.edge(e).to == v) ++indeg_in_block;
      if (g.in_degree(v) >= 2 && indeg_in_block >= 1) {
        // count the reticulation if the block contains at least one of its in-edges
        if (indeg_in_block >= 2) ++ret;
      }
    }
    best = std::max(best, ret);
  }
  return best;
}

PhyloTree PhyloNetwork::as_tree() const {
  if (!is_tree()) throw input_error("network is not a tree");
  PhyloTree t;
  t.g = g;
  t.root = root;
  t.allow_unary = true;
  t.allow_zero_weights = allow_zero_weights;
  return t;
}

std::vector<char> mark_ancestors(const PhyloDag& g, const TaxonSet& subset) {
  std::vector<char> mark(g.num_vertices(), 0);
  std::vector<int> stack;
  for (int x : subset) {
    if (x < 0 || x >= g.num_vertices() || !g.is_leaf(x))
      throw input_error("subset contains a non-leaf vertex");
    if (!mark[x]) {
      mark[x] = 1;
      stack.push_back(x);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.in_edges(v)) {
      int u = g.edge(e).from;
      if (!mark[u]) {
        mark[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return mark;
}

Weight pd_value(const PhyloTree& tree, const TaxonSet& subset) {
  if (subset.empty()) return 0;
  std::vector<char> mark = mark_ancestors(tree.g, subset);
  Weight total = 0;
  for (const Edge& e : tree.g.edges())
    if (mark[e.to]) total += e.weight;
  return total;
}

Rational expected_pd(const PhyloTree& tree, const std::map<int, Rational>& survival) {
  for (const auto& [x, w] : survival)
    if (w < Rational(0) || w > Rational(1))
      throw input_error("survival probability outside [0,1]");
  // prod[v] = product of (1 - w_x) over offspring x of v
  std::vector<Rational> prod(tree.g.num_vertices(), Rational(1));
  auto order = tree.g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (tree.g.is_leaf(v)) {
      auto f = survival.find(v);
      if (f == survival.end()) throw input_error("missing survival probability for taxon " + tree.g.label(v));
      prod[v] = Rational(1) - f->second;
    } else {
      for (int e : tree.g.out_edges(v)) prod[v] *= prod[tree.g.edge(e).to];
    }
  }
  Rational total(0);
  for (const Edge& e : tree.g.edges())
    total += Rational(e.weight) * (Rational(1) - prod[e.to]);
  return total;
}

Weight appd_value(const PhyloNetwork& net, const TaxonSet& subset) {
  if (subset.empty()) return 0;
  std::vector<char> mark = mark_ancestors(net.g, subset);
  Weight total = 0;
  for (const Edge& e : net.g.edges())
    if (mark[e.to]) total += e.weight;
  return total;
}

std::vector<Rational> netpd_gamma(const PhyloNetwork& net, const TaxonSet& subset) {
  net.validate(/*require_inheritance=*/true);
  std::vector<char> in_set(net.g.num_vertices(), 0);
  for (int x : subset) in_set[x] = 1;
  // gamma_down[v]: for a leaf, membership; for a tree vertex, the one-minus-product
  // over child edges; reticulations are resolved per edge below.
  std::vector<Rational> gamma_edge(net.g.num_edges(), Rational(0));
  std::vector<Rational> gamma_down(net.g.num_vertices(), Rational(0));
  auto order = net.g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (net.g.is_leaf(v)) {
      gamma_down[v] = Rational(in_set[v] ? 1 : 0);
    } else if (net.is_reticulation(v)) {
      gamma_down[v] = gamma_edge[net.g.out_edges(v)[0]];
    } else {
      Rational prod(1);
      for (int e : net.g.out_edges(v)) prod *= Rational(1) - gamma_edge[e];
      gamma_down[v] = Rational(1) - prod;
    }
    for (int e : net.g.in_edges(v)) {
      if (net.is_reticulation(v)) {
        gamma_edge[e] = net.inheritance.at(e) * gamma_down[v];
      } else {
        gamma_edge[e] = gamma_down[v];
      }
    }
  }
  return gamma_edge;
}

Rational netpd_value(const PhyloNetwork& net, const TaxonSet& subset) {
  std::vector<Rational> gamma = netpd_gamma(net, subset);
  Rational total(0);
  for (int e = 0; e < net.g.num_edges(); ++e)
    total += Rational(net.g.edge(e).weight) * gamma[e];
  return total;
}

MaxPdProfile max_pd_greedy(const PhyloTree& tree, int max_k) {
  MaxPdProfile profile;
  std::vector<char> mark(tree.g.num_vertices(), 0);
  std::vector<int> taxa = tree.taxa();
  max_k = std::min<int>(max_k, static_cast<int>(taxa.size()));
  profile.best_pd.push_back(0);
  Weight current = 0;
  std::vector<char> used(tree.g.num_vertices(), 0);
  for (int step = 0; step < max_k; ++step) {
    int best_taxon = -1;
    Weight best_gain = -1;
    for (int x : taxa) {
      if (used[x]) continue;
      Weight gain = 0;
      int v = x;
      while (v != -1 && !mark[v]) {
        const auto& in = tree.g.in_edges(v);
        if (in.empty()) break;
        gain += tree.g.edge(in[0]).weight;
        v = tree.g.edge(in[0]).from;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best_taxon = x;
      }
    }
    if (best_taxon < 0) break;
    used[best_taxon] = 1;
    int v = best_taxon;
    while (v != -1 && !mark[v]) {
      mark[v] = 1;
      const auto& in = tree.g.in_edges(v);
      if (in.empty()) break;
      v = tree.g.edge(in[0]).from;
    }
    current += best_gain;
    profile.order.push_back(best_taxon);
    profile.best_pd.push_back(current);
  }
  while (static_cast<int>(profile.best_pd.size()) <= max_k)
    profile.best_pd.push_back(current);
  return profile;
}

TaxonSet taxa_from_labels(const PhyloDag& g, const std::vector<std::string>& labels) {
  TaxonSet ts;
  for (const std::string& s : labels) {
    auto v = g.vertex_by_label(s);
    if (!v || !g.is_leaf(*v)) throw input_error("unknown taxon label '" + s + "'");
    ts.push_back(*v);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace pdark
