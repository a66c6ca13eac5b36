#include "pdark/network.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace pdark {

void MapPdInstance::validate() const {
  network.validate();
  if (!network.inheritance.empty())
    throw input_error("mappd: instance must not carry inheritance proportions");
  if (k < 0) throw input_error("mappd: negative k");
}

void MaxNetPdInstance::validate() const {
  network.validate(/*require_inheritance=*/true);
  if (k < 0) throw input_error("maxnetpd: negative k");
}

void WpscInstance::validate() const {
  for (Weight w : item_weight)
    if (w < 1) throw input_error("wpsc: item weight < 1");
  for (const auto& f : family)
    for (int u : f)
      if (u < 0 || u >= static_cast<int>(item_weight.size()))
        throw input_error("wpsc: set references unknown item");
  if (k < 0) throw input_error("wpsc: negative k");
}

WpscInstance WpscInstance::normalized() const {
  WpscInstance out = *this;
  std::vector<char> used(item_weight.size(), 0);
  for (const auto& f : family)
    for (int u : f) used[u] = 1;
  std::vector<int> remap(item_weight.size(), -1);
  std::vector<Weight> weights;
  for (size_t u = 0; u < item_weight.size(); ++u)
    if (used[u]) {
      remap[u] = static_cast<int>(weights.size());
      weights.push_back(item_weight[u]);
    }
  out.item_weight = weights;
  for (auto& f : out.family)
    for (int& u : f) u = remap[u];
  return out;
}

// ---------------------------------------------------------------------------
// Binarization.

MapPdInstance binarize(const MapPdInstance& inst) {
  inst.validate();
  long long scale = inst.network.g.num_edges() + 1;
  struct E {
    int from, to;
    Weight w;
  };
  std::vector<E> edges;
  std::vector<std::string> labels;
  for (int v = 0; v < inst.network.g.num_vertices(); ++v)
    labels.push_back(inst.network.g.label(v));
  for (const Edge& e : inst.network.g.edges())
    edges.push_back({e.from, e.to, e.weight * scale});
  auto out_of = [&](int v) {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
      if (edges[i].from == v) r.push_back(i);
    return r;
  };
  auto in_of = [&](int v) {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
      if (edges[i].to == v) r.push_back(i);
    return r;
  };
  int root = inst.network.root;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < static_cast<int>(labels.size()) && !changed; ++v) {
      std::vector<int> in = in_of(v), out = out_of(v);
      if (v != root && in.size() == 1 && out.size() == 1) {
        edges[in[0]].to = edges[out[0]].to;
        edges[in[0]].w += edges[out[0]].w;
        edges.erase(edges.begin() + out[0]);
        changed = true;
      } else if (in.size() >= 3 && out.size() == 1) {
        // Reticulation ladder: a chain absorbs the parents pairwise.
        int w = edges[out[0]].to;
        Weight out_w = edges[out[0]].w;
        std::vector<std::pair<int, Weight>> parents;
        for (int i : in) parents.push_back({edges[i].from, edges[i].w});
        std::vector<int> drop = in;
        drop.push_back(out[0]);
        std::sort(drop.rbegin(), drop.rend());
        for (int i : drop) edges.erase(edges.begin() + i);
        int prev = -1;
        for (size_t j = 0; j + 1 < parents.size(); ++j) {
          int a = static_cast<int>(labels.size());
          labels.push_back("");
          if (j == 0)
            edges.push_back({parents[0].first, a, parents[0].second});
          else
            edges.push_back({prev, a, 1});
          edges.push_back({parents[j + 1].first, a, parents[j + 1].second});
          prev = a;
        }
        edges.push_back({prev, w, out_w});
        changed = true;
      } else if (out.size() >= 3 && in.size() <= 1) {
        // Tree-vertex ladder, mirrored downward.
        std::vector<std::pair<int, Weight>> children;
        for (int i : out) children.push_back({edges[i].to, edges[i].w});
        std::optional<std::pair<int, Weight>> parent;
        if (!in.empty()) parent = {{edges[in[0]].from, edges[in[0]].w}};
        std::vector<int> drop = out;
        for (int i : in) drop.push_back(i);
        std::sort(drop.rbegin(), drop.rend());
        for (int i : drop) edges.erase(edges.begin() + i);
        int prev = -1;
        for (size_t j = 0; j + 1 < children.size(); ++j) {
          int b = static_cast<int>(labels.size());
          labels.push_back("");
          if (j == 0) {
            if (parent) edges.push_back({parent->first, b, parent->second});
            if (v == root) root = b;
          } else {
            edges.push_back({prev, b, 1});
          }
          edges.push_back({b, children[j].first, children[j].second});
          prev = b;
        }
        edges.push_back({prev, children.back().first, children.back().second});
        changed = true;
      }
    }
  }
  MapPdInstance out;
  std::set<int> live{root};
  for (const E& e : edges) {
    live.insert(e.from);
    live.insert(e.to);
  }
  std::map<int, int> remap;
  for (int v : live) remap[v] = out.network.g.add_vertex(labels[v]);
  for (const E& e : edges) out.network.g.add_edge(remap[e.from], remap[e.to], e.w);
  out.network.root = remap.at(root);
  out.k = inst.k;
  out.target = inst.target * scale;
  out.network.validate();
  return out;
}

// ---------------------------------------------------------------------------
// wpSC <-> MapPD reductions.

MapPdInstance reduce_wpsc_to_mappd(const WpscInstance& raw, bool unit_weights) {
  raw.validate();
  WpscInstance inst = raw.normalized();
  int n = static_cast<int>(inst.item_weight.size());
  int m = static_cast<int>(inst.family.size());
  MapPdInstance out;
  out.k = inst.k;
  if (m == 0 || n == 0) {
    // Degenerate: a two-leaf star keeps the network valid; the target is
    // unreachable unless it already was nonpositive.
    int root = out.network.g.add_vertex("");
    out.network.g.add_edge(root, out.network.g.add_vertex("pad1"), 1);
    out.network.g.add_edge(root, out.network.g.add_vertex("pad2"), 1);
    out.network.root = root;
    out.target = inst.target <= 0 ? 0 : out.network.g.total_weight() + 1;
    out.k = 0;
    out.network.validate();
    return out;
  }
  long long q = static_cast<long long>(m) * (n + 1);
  // D <= 0 is a trivial yes on the wpSC side; DQ+1 would flip it for k = 0.
  out.target = inst.target <= 0 ? 0 : inst.target * q + 1;
  int root = out.network.g.add_vertex("");
  out.network.root = root;
  std::vector<int> v_ids, w_ids;
  for (int i = 0; i < n; ++i) {
    int v = out.network.g.add_vertex("");
    v_ids.push_back(v);
    out.network.g.add_edge(root, v, inst.item_weight[i] * q);
  }
  for (int j = 0; j < m; ++j) {
    int w = out.network.g.add_vertex("");
    w_ids.push_back(w);
    int leaf = out.network.g.add_vertex("F" + std::to_string(j + 1));
    out.network.g.add_edge(w, leaf, 1);
  }
  for (int j = 0; j < m; ++j)
    for (int u : inst.family[j]) out.network.g.add_edge(v_ids[u], w_ids[j], 1);
  if (unit_weights) {
    // Subdivide heavy root edges; every subdivision vertex gets a false leaf.
    PhyloDag g;
    std::map<int, int> remap;
    for (int v = 0; v < out.network.g.num_vertices(); ++v)
      remap[v] = g.add_vertex(out.network.g.label(v));
    int false_id = 0;
    for (const Edge& e : out.network.g.edges()) {
      if (e.weight <= 1) {
        g.add_edge(remap[e.from], remap[e.to], e.weight);
        continue;
      }
      int prev = remap[e.from];
      for (Weight t = 0; t + 1 < e.weight; ++t) {
        int sub = g.add_vertex("");
        g.add_edge(prev, sub, 1);
        int fl = g.add_vertex("false" + std::to_string(++false_id));
        g.add_edge(sub, fl, 1);
        prev = sub;
      }
      g.add_edge(prev, remap[e.to], 1);
    }
    out.network.g = std::move(g);
    out.network.root = remap.at(root);
  }
  out.network.validate();
  return out;
}

WpscInstance reduce_mappd_to_wpsc(const MapPdInstance& inst) {
  inst.validate();
  WpscInstance out;
  out.k = inst.k;
  out.target = inst.target;
  for (const Edge& e : inst.network.g.edges()) out.item_weight.push_back(e.weight);
  for (int x : inst.network.taxa()) {
    std::vector<char> mark = mark_ancestors(inst.network.g, {x});
    std::vector<int> set;
    for (int e = 0; e < inst.network.g.num_edges(); ++e)
      if (mark[inst.network.g.edge(e).to]) set.push_back(e);
    out.family.push_back(set);
  }
  return out;
}

NetResult wpsc_brute_force(const WpscInstance& inst) {
  inst.validate();
  int m = static_cast<int>(inst.family.size());
  int size = std::min(inst.k, m);
  NetResult res;
  if (size == 0) {
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  check_budget(binom(m, size) * std::max(1, m), "wpsc brute force");
  Weight best = -1;
  for_each_subset_of_size(m, size, [&](const std::vector<int>& idx) {
    std::set<int> covered;
    for (int j : idx)
      for (int u : inst.family[j]) covered.insert(u);
    Weight total = 0;
    for (int u : covered) total += inst.item_weight[u];
    if (total > best) {
      best = total;
      res.witness = idx;
    }
  });
  res.yes = best >= inst.target;
  if (!res.yes) res.witness.reset();
  return res;
}

NetResult mappd_brute_force(const MapPdInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.network.taxa();
  int n = static_cast<int>(taxa.size());
  int size = std::min(inst.k, n);
  NetResult res;
  if (size == 0) {
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  check_budget(binom(n, size) * std::max(1, n), "mappd brute force");
  Weight best = -1;
  for_each_subset_of_size(n, size, [&](const std::vector<int>& idx) {
    std::vector<int> s;
    for (int i : idx) s.push_back(taxa[i]);
    Weight pd = appd_value(inst.network, s);
    if (pd > best) {
      best = pd;
      res.witness = s;
    }
  });
  res.yes = best >= inst.target;
  if (!res.yes) res.witness.reset();
  return res;
}

// ---------------------------------------------------------------------------
// take / leave branching.

MapPdInstance mappd_leave(const MapPdInstance& inst, int reticulation) {
  if (!inst.network.is_reticulation(reticulation))
    throw input_error("leave: vertex is not a reticulation");
  const PhyloDag& g = inst.network.g;
  std::vector<char> below(g.num_vertices(), 0);
  {
    std::vector<int> stack{reticulation};
    below[reticulation] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : g.out_edges(v)) {
        int to = g.edge(e).to;
        if (!below[to]) {
          below[to] = 1;
          stack.push_back(to);
        }
      }
    }
  }
  std::set<int> off_set;
  for (int x : inst.network.taxa())
    if (below[x]) off_set.insert(x);
  std::vector<std::set<int>> offspring(g.num_vertices());
  auto order = g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (g.is_leaf(v)) {
      offspring[v] = {v};
    } else {
      for (int e : g.out_edges(v))
        for (int x : offspring[g.edge(e).to]) offspring[v].insert(x);
    }
  }
  MapPdInstance out;
  out.k = inst.k;
  out.target = inst.target;
  std::set<int> live{inst.network.root};
  std::vector<std::pair<std::pair<int, int>, Weight>> kept;
  for (const Edge& e : g.edges()) {
    bool strictly_affected = true;
    for (int x : offspring[e.to])
      if (!off_set.count(x)) strictly_affected = false;
    if (strictly_affected) continue;
    kept.push_back({{e.from, e.to}, e.weight});
    live.insert(e.from);
    live.insert(e.to);
  }
  std::map<int, int> remap;
  for (int v : live) remap[v] = out.network.g.add_vertex(g.label(v));
  for (auto& [fe, w] : kept) out.network.g.add_edge(remap[fe.first], remap[fe.second], w);
  out.network.root = remap.at(inst.network.root);
  return out;
}

MapPdInstance mappd_take(const MapPdInstance& inst, int reticulation) {
  if (!inst.network.is_reticulation(reticulation))
    throw input_error("take: vertex is not a reticulation");
  const PhyloDag& g = inst.network.g;
  int child = g.edge(g.out_edges(reticulation)[0]).to;
  Weight dbar = g.total_weight() - inst.target;
  std::vector<char> anc(g.num_vertices(), 0);
  {
    std::vector<int> stack{reticulation};
    anc[reticulation] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : g.in_edges(v)) {
        int u = g.edge(e).from;
        if (!anc[u]) {
          anc[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  Weight internal = 0;            // lambda of the edges within anc(v) + {u}
  std::map<int, Weight> bundled;  // other children of the ancestors
  for (const Edge& e : g.edges()) {
    bool from_in = anc[e.from] != 0;
    bool to_in = anc[e.to] != 0 || e.to == child;
    if (from_in && to_in)
      internal += e.weight;
    else if (from_in)
      bundled[e.to] += e.weight;
  }
  MapPdInstance out;
  out.k = inst.k;
  out.target = inst.target + dbar;
  std::set<int> live{child};
  for (const Edge& e : g.edges()) {
    if (anc[e.from] || anc[e.to]) continue;
    live.insert(e.from);
    live.insert(e.to);
  }
  for (auto& [w, weight] : bundled) live.insert(w);
  std::map<int, int> remap;
  int root = out.network.g.add_vertex("");
  out.network.root = root;
  for (int v : live) remap[v] = out.network.g.add_vertex(g.label(v));
  for (const Edge& e : g.edges()) {
    if (anc[e.from] || anc[e.to]) continue;
    out.network.g.add_edge(remap[e.from], remap[e.to], e.weight);
  }
  out.network.g.add_edge(root, remap.at(child), internal + dbar);
  for (auto& [w, weight] : bundled)
    if (w != child) out.network.g.add_edge(root, remap.at(w), weight);
  return out;
}

namespace {

std::optional<std::vector<std::string>> branch_rec(const MapPdInstance& cur, int depth) {
  if (depth > 40) throw capacity_error("take/leave recursion too deep");
  std::vector<int> rets = cur.network.reticulations();
  if (rets.empty()) {
    PhyloTree tree = cur.network.as_tree();
    MaxPdProfile prof = max_pd_greedy(tree, cur.k);
    int best_k = std::min<int>(cur.k, static_cast<int>(prof.order.size()));
    if (prof.best_pd[best_k] < cur.target) return std::nullopt;
    int take = best_k;
    for (int i = 0; i <= best_k; ++i)
      if (prof.best_pd[i] >= cur.target) {
        take = i;
        break;
      }
    std::vector<std::string> labels;
    for (int i = 0; i < take; ++i) labels.push_back(tree.g.label(prof.order[i]));
    return labels;
  }
  int v = rets[0];
  if (auto r = branch_rec(mappd_take(cur, v), depth + 1)) return r;
  return branch_rec(mappd_leave(cur, v), depth + 1);
}

}  // namespace

NetResult mappd_branch_ret(const MapPdInstance& inst) {
  inst.validate();
  NetResult res;
  auto labels = branch_rec(inst, 0);
  if (!labels) return res;
  std::vector<int> witness = taxa_from_labels(inst.network.g, *labels);
  if (appd_value(inst.network, witness) < inst.target)
    throw validation_error("mappd branch: witness under target");
  res.yes = true;
  res.witness = witness;
  return res;
}

// ---------------------------------------------------------------------------
// Treewidth DP (decision).

namespace {
constexpr Weight kNegInf = -(1LL << 60);
}

NetResult mappd_treewidth_dp(const MapPdInstance& inst) {
  UGraph g;
  g.n = inst.network.g.num_vertices();
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : inst.network.g.edges()) {
    auto key = std::minmax(e.from, e.to);
    if (seen.insert({key.first, key.second}).second)
      g.edges.push_back({key.first, key.second});
  }
  return mappd_treewidth_dp(inst, nice_tree_decomposition(g), g);
}

NetResult mappd_treewidth_dp(const MapPdInstance& inst, const NiceTreeDecomposition& decomp,
                             const UGraph& graph) {
  inst.validate();
  decomp.validate(graph);
  std::map<std::pair<int, int>, Weight> dir_weight;  // parallel edges summed
  for (const Edge& e : inst.network.g.edges()) dir_weight[{e.from, e.to}] += e.weight;
  std::set<int> leaf_set;
  for (int x : inst.network.taxa()) leaf_set.insert(x);
  int kcap = std::min<int>(inst.k, static_cast<int>(leaf_set.size()));

  // Per bag vertex: 0 = black (no incident F-edge), 1 = red (incoming but no
  // outgoing F-edge, not a leaf), 2 = green (leaf or has outgoing F-edge).
  std::vector<std::vector<std::vector<Weight>>> tables(decomp.nodes.size());
  auto state_count = [&](const DecompNode& nd) {
    std::size_t c = 1;
    for (size_t i = 0; i < nd.bag.size(); ++i) c *= 3;
    return c;
  };
  auto digit = [](std::size_t state, int i) {
    for (int j = 0; j < i; ++j) state /= 3;
    return static_cast<int>(state % 3);
  };
  for (size_t t = 0; t < decomp.nodes.size(); ++t) {
    const DecompNode& nd = decomp.nodes[t];
    std::size_t n_states = state_count(nd);
    check_budget(n_states * (kcap + 1) * decomp.nodes.size(), "mappd treewidth dp");
    auto& tab = tables[t];
    tab.assign(n_states, std::vector<Weight>(kcap + 1, kNegInf));
    switch (nd.kind) {
      case NodeKind::Leaf:
        tab[0][0] = 0;
        break;
      case NodeKind::IntroduceVertex: {
        const auto& child = tables[nd.child1];
        int vi = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), nd.vertex) -
                                  nd.bag.begin());
        bool is_leaf = leaf_set.count(nd.vertex) > 0;
        for (std::size_t s = 0; s < n_states; ++s) {
          int assign = digit(s, vi);
          // An isolated vertex is black; leaves are green by definition.
          if (is_leaf ? assign != 2 : assign != 0) continue;
          std::size_t cs = 0, mult = 1;
          for (size_t i = 0; i < nd.bag.size(); ++i) {
            if (static_cast<int>(i) == vi) continue;
            cs += static_cast<std::size_t>(digit(s, static_cast<int>(i))) * mult;
            mult *= 3;
          }
          for (int cnt = 0; cnt <= kcap; ++cnt)
            tab[s][cnt] = std::max(tab[s][cnt], child[cs][cnt]);
        }
        break;
      }
      case NodeKind::IntroduceEdge: {
        const auto& child = tables[nd.child1];
        auto [a, b] = graph.edges[nd.edge];
        int parent = dir_weight.count({a, b}) ? a : b;
        int kid = parent == a ? b : a;
        Weight w = dir_weight.at({parent, kid});
        int pi = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), parent) -
                                  nd.bag.begin());
        int ki = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), kid) -
                                  nd.bag.begin());
        bool kid_is_leaf = leaf_set.count(kid) > 0;
        tab = child;
        std::size_t pmult = 1, kmult = 1;
        for (int j = 0; j < pi; ++j) pmult *= 3;
        for (int j = 0; j < ki; ++j) kmult *= 3;
        for (std::size_t s = 0; s < n_states; ++s) {
          // Taking the edge requires the parent green (it gains an outgoing
          // F-edge) and the kid red or green. The kid stays green only if it
          // was green without this incoming edge (leaf or other outgoing).
          if (digit(s, pi) != 2 || digit(s, ki) == 0) continue;
          int kid_assign = digit(s, ki);
          int leaf_gain = kid_is_leaf ? 1 : 0;
          std::vector<int> prev_kids =
              kid_assign == 2 ? std::vector<int>{2} : std::vector<int>{0, 1};
          for (int cnt = leaf_gain; cnt <= kcap; ++cnt) {
            for (int prev_p = 0; prev_p <= 2; ++prev_p) {
              for (int prev_k : prev_kids) {
                std::size_t cs =
                    s - (2 - prev_p) * pmult - (kid_assign - prev_k) * kmult;
                Weight base = child[cs][cnt - leaf_gain];
                if (base <= kNegInf) continue;
                tab[s][cnt] = std::max(tab[s][cnt], base + w);
              }
            }
          }
        }
        break;
      }
      case NodeKind::Forget: {
        const auto& child = tables[nd.child1];
        const DecompNode& cnd = decomp.nodes[nd.child1];
        int vi = static_cast<int>(std::lower_bound(cnd.bag.begin(), cnd.bag.end(), nd.vertex) -
                                  cnd.bag.begin());
        for (std::size_t cs = 0; cs < state_count(cnd); ++cs) {
          if (digit(cs, vi) == 1) continue;  // red vertices may not be forgotten
          std::size_t s = 0, mult = 1;
          for (size_t i = 0; i < cnd.bag.size(); ++i) {
            if (static_cast<int>(i) == vi) continue;
            s += static_cast<std::size_t>(digit(cs, static_cast<int>(i))) * mult;
            mult *= 3;
          }
          for (int cnt = 0; cnt <= kcap; ++cnt)
            tab[s][cnt] = std::max(tab[s][cnt], child[cs][cnt]);
        }
        break;
      }
      case NodeKind::Join: {
        const auto& c1 = tables[nd.child1];
        const auto& c2 = tables[nd.child2];
        int bag_size = static_cast<int>(nd.bag.size());
        // The F-edge sets of the children are disjoint, so the states combine
        // per the qualification table: green if either side is green, red if
        // some side is red and none green, black otherwise.
        std::function<void(int, std::size_t, std::size_t, std::size_t)> walk =
            [&](int i, std::size_t s1, std::size_t s2, std::size_t s) {
              if (i == bag_size) {
                for (int a = 0; a <= kcap; ++a) {
                  if (c1[s1][a] <= kNegInf) continue;
                  for (int b = 0; a + b <= kcap; ++b) {
                    if (c2[s2][b] <= kNegInf) continue;
                    tab[s][a + b] = std::max(tab[s][a + b], c1[s1][a] + c2[s2][b]);
                  }
                }
                return;
              }
              std::size_t mult = 1;
              for (int j = 0; j < i; ++j) mult *= 3;
              for (int d1 = 0; d1 <= 2; ++d1)
                for (int d2 = 0; d2 <= 2; ++d2) {
                  int dp;
                  if (d1 == 2 || d2 == 2)
                    dp = 2;
                  else if (d1 == 1 || d2 == 1)
                    dp = 1;
                  else
                    dp = 0;
                  // Leaves are green on both sides by definition; mixing a
                  // leaf's green with black would fabricate a second green.
                  if (leaf_set.count(nd.bag[i]) && d1 != d2) continue;
                  walk(i + 1, s1 + d1 * mult, s2 + d2 * mult, s + dp * mult);
                }
            };
        walk(0, 0, 0, 0);
        break;
      }
    }
  }
  const auto& root = tables[decomp.root];
  Weight best = kNegInf;
  for (int cnt = 0; cnt <= kcap; ++cnt) best = std::max(best, root[0][cnt]);
  NetResult res;
  res.yes = best >= inst.target;
  return res;
}

// ---------------------------------------------------------------------------
// Dbar algorithm.

namespace {

struct DbarComponents {
  struct Item {
    Weight weight = 0;
    int value = 0;
    std::set<int> taxa;
  };
  std::vector<Item> items;
};

DbarComponents dbar_components(const MapPdInstance& inst, const std::set<int>& green) {
  const PhyloDag& g = inst.network.g;
  std::vector<std::set<int>> offspring(g.num_vertices());
  auto order = g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (g.is_leaf(v)) {
      offspring[v] = {v};
    } else {
      for (int e : g.out_edges(v))
        for (int x : offspring[g.edge(e).to]) offspring[v].insert(x);
    }
  }
  auto has_green = [&](int v) {
    for (int x : offspring[v])
      if (green.count(x)) return true;
    return false;
  };
  struct E {
    int from, to;
    Weight w;
  };
  // G': drop edges whose head has a green offspring; split surviving
  // in-degree-0 tails per outgoing edge.
  std::vector<E> kept;
  for (const Edge& e : g.edges())
    if (!has_green(e.to)) kept.push_back({e.from, e.to, e.weight});
  std::map<int, int> indeg;
  for (const E& e : kept) ++indeg[e.to];
  std::map<std::pair<int, int>, int> node_id;
  std::vector<int> uf;
  std::function<int(int)> find = [&](int a) { return uf[a] == a ? a : uf[a] = find(uf[a]); };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) uf[a] = b;
  };
  auto id_of = [&](int v, int copy) {
    auto it = node_id.find({v, copy});
    if (it != node_id.end()) return it->second;
    int id = static_cast<int>(uf.size());
    uf.push_back(id);
    node_id[{v, copy}] = id;
    return id;
  };
  int split_counter = 0;
  std::vector<int> edge_node(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const E& e = kept[i];
    int tail_copy = indeg.count(e.from) && indeg[e.from] > 0 ? 0 : ++split_counter;
    int a = id_of(e.from, tail_copy);
    int b = id_of(e.to, 0);
    unite(a, b);
    edge_node[i] = a;
  }
  std::map<int, DbarComponents::Item> comp;
  for (size_t i = 0; i < kept.size(); ++i) {
    int c = find(edge_node[i]);
    comp[c].weight += kept[i].w;
    if (g.is_leaf(kept[i].to)) comp[c].taxa.insert(kept[i].to);
  }
  DbarComponents out;
  for (auto& [c, item] : comp) {
    item.value = static_cast<int>(item.taxa.size());
    out.items.push_back(item);
  }
  std::sort(out.items.begin(), out.items.end(),
            [](const DbarComponents::Item& a, const DbarComponents::Item& b) {
              return a.weight != b.weight ? a.weight < b.weight : a.value < b.value;
            });
  return out;
}

}  // namespace

std::vector<std::pair<Weight, int>> dbar_component_items(const MapPdInstance& inst,
                                                         const std::set<int>& green) {
  DbarComponents comps = dbar_components(inst, green);
  std::vector<std::pair<Weight, int>> items;
  for (const auto& item : comps.items) items.push_back({item.weight, item.value});
  return items;
}

NetResult mappd_solve_Dbar(const MapPdInstance& inst, const FamilyOptions& fam) {
  inst.validate();
  std::vector<int> taxa = inst.network.taxa();
  int n = static_cast<int>(taxa.size());
  Weight dbar = appd_value(inst.network, taxa) - inst.target;
  long long kbar = static_cast<long long>(n) - inst.k;
  NetResult res;
  if (dbar < 0) return res;
  if (kbar <= 0) {
    res.yes = true;  // saving everything is allowed and reaches the target
    res.witness = taxa;
    return res;
  }
  check_budget(static_cast<std::uint64_t>(dbar + 1) * (n + 1), "dbar knapsack");
  long long uk = std::min<long long>(kbar + dbar, n);
  if (uk <= 0) return res;
  ColoringFamily family = universal_set(n, static_cast<int>(uk), fam);
  for (std::uint64_t a : family.subsets) {
    std::set<int> green;
    for (int i = 0; i < n; ++i)
      if (a & (std::uint64_t{1} << i)) green.insert(taxa[i]);
    DbarComponents comps = dbar_components(inst, green);
    std::vector<long long> dp(dbar + 1, -1);
    std::vector<std::vector<int>> pick(dbar + 1);
    dp[0] = 0;
    for (int i = 0; i < static_cast<int>(comps.items.size()); ++i)
      for (long long c = dbar; c >= comps.items[i].weight; --c) {
        if (dp[c - comps.items[i].weight] < 0) continue;
        long long cand = dp[c - comps.items[i].weight] + comps.items[i].value;
        if (cand > dp[c]) {
          dp[c] = cand;
          pick[c] = pick[c - comps.items[i].weight];
          pick[c].push_back(i);
        }
      }
    long long best = -1, best_c = 0;
    for (long long c = 0; c <= dbar; ++c)
      if (dp[c] > best) {
        best = dp[c];
        best_c = c;
      }
    if (best < kbar) continue;
    std::set<int> dead;
    for (int i : pick[best_c])
      for (int x : comps.items[i].taxa) dead.insert(x);
    std::vector<int> saved;
    for (int x : taxa)
      if (!dead.count(x)) saved.push_back(x);
    if (static_cast<int>(saved.size()) > inst.k ||
        appd_value(inst.network, saved) < inst.target)
      continue;
    res.yes = true;
    res.witness = saved;
    return res;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Kernelization.

namespace {

struct KNet {
  std::vector<std::string> labels;
  struct E {
    int from, to;
    Weight w;
  };
  std::vector<E> edges;
  int root = 0;

  std::vector<int> out(int v) const {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
      if (edges[i].from == v) r.push_back(i);
    return r;
  }
  std::vector<int> in(int v) const {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
      if (edges[i].to == v) r.push_back(i);
    return r;
  }
  bool is_leaf(int v) const { return out(v).empty() && !labels[v].empty(); }
  int add_vertex(const std::string& l) {
    labels.push_back(l);
    return static_cast<int>(labels.size()) - 1;
  }
  std::set<int> live_vertices() const {
    std::set<int> live{root};
    for (const E& e : edges) {
      live.insert(e.from);
      live.insert(e.to);
    }
    return live;
  }
  std::set<int> descendants(int v) const {
    std::set<int> seen{v};
    std::vector<int> stack{v};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int e : out(cur))
        if (seen.insert(edges[e].to).second) stack.push_back(edges[e].to);
    }
    return seen;
  }
  Weight appd_singleton(int x) const {
    std::set<int> marked{x};
    std::vector<int> stack{x};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int e : in(cur))
        if (marked.insert(edges[e].from).second) stack.push_back(edges[e].from);
    }
    Weight total = 0;
    for (const E& e : edges)
      if (marked.count(e.to)) total += e.w;
    return total;
  }
  void prune_bare() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v : live_vertices()) {
        if (v == root || !labels[v].empty() || !out(v).empty()) continue;
        std::vector<int> inc = in(v);
        std::sort(inc.rbegin(), inc.rend());
        for (int e : inc) edges.erase(edges.begin() + e);
        changed = true;
      }
    }
  }
  void merge_parallel() {
    std::map<std::pair<int, int>, Weight> agg;
    for (const E& e : edges) agg[{e.from, e.to}] += e.w;
    edges.clear();
    for (auto& [fe, w] : agg) edges.push_back({fe.first, fe.second, w});
  }
  void remerge_root() {
    std::set<int> live = live_vertices();
    std::vector<int> tops;
    for (int v : live)
      if (in(v).empty() && !is_leaf(v) && !out(v).empty()) tops.push_back(v);
    if (tops.empty()) return;
    int nr = tops[0];
    for (size_t i = 1; i < tops.size(); ++i)
      for (E& e : edges)
        if (e.from == tops[i]) e.from = nr;
    root = nr;
    merge_parallel();
  }
};

KNet to_knet(const MapPdInstance& inst) {
  KNet net;
  for (int v = 0; v < inst.network.g.num_vertices(); ++v)
    net.labels.push_back(inst.network.g.label(v));
  for (const Edge& e : inst.network.g.edges()) net.edges.push_back({e.from, e.to, e.weight});
  net.root = inst.network.root;
  return net;
}

MapPdInstance from_knet(const KNet& net, int k, Weight target, bool allow_zero) {
  MapPdInstance out;
  std::set<int> live = net.live_vertices();
  std::map<int, int> remap;
  for (int v : live) remap[v] = out.network.g.add_vertex(net.labels[v]);
  for (const auto& e : net.edges) out.network.g.add_edge(remap[e.from], remap[e.to], e.w);
  out.network.root = remap.at(net.root);
  out.network.allow_zero_weights = allow_zero;
  out.k = k;
  out.target = target;
  return out;
}

struct KernelState {
  KNet net;
  int k;
  Weight target;
};

struct KernelView {
  std::set<int> retics, cores, sides;
  std::set<int> live;

  explicit KernelView(const KNet& net) {
    live = net.live_vertices();
    for (int v : live)
      if (!net.is_leaf(v) && net.in(v).size() >= 2) retics.insert(v);
    auto has_ret_desc = [&](int v) {
      std::set<int> d = net.descendants(v);
      for (int r : retics)
        if (d.count(r)) return true;
      return false;
    };
    cores.insert(net.root);  // the root anchors side-paths by convention
    for (int v : live) {
      if (net.is_leaf(v) || retics.count(v)) continue;
      int branches = 0;
      for (int e : net.out(v))
        if (has_ret_desc(net.edges[e].to)) ++branches;
      if (branches >= 2) cores.insert(v);
    }
    for (int v : live)
      if (!net.is_leaf(v) && !retics.count(v) && !cores.count(v)) sides.insert(v);
  }
};

bool rule_twin_leaves(KernelState& st) {
  std::set<int> live = st.net.live_vertices();
  for (int v : live) {
    if (v == st.net.root) continue;
    std::vector<int> leaf_edges;
    for (int e : st.net.out(v))
      if (st.net.is_leaf(st.net.edges[e].to)) leaf_edges.push_back(e);
    if (leaf_edges.size() < 2) continue;
    int ex = leaf_edges[0], ey = leaf_edges[1];
    if (st.net.edges[ex].w < st.net.edges[ey].w) std::swap(ex, ey);
    // Reattach the lighter twin below the root with its own weight: any
    // solution using y may swap to x first, after which the move is exact.
    st.net.edges[ey].from = st.net.root;
    return true;
  }
  return false;
}

bool rule_degree2(KernelState& st) {
  for (int v : st.net.live_vertices()) {
    if (v == st.net.root) continue;
    std::vector<int> in = st.net.in(v), out = st.net.out(v);
    if (in.size() != 1 || out.size() != 1) continue;
    st.net.edges[in[0]].to = st.net.edges[out[0]].to;
    st.net.edges[in[0]].w += st.net.edges[out[0]].w;
    st.net.edges.erase(st.net.edges.begin() + out[0]);
    return true;
  }
  return false;
}

bool rule_side_path(KernelState& st) {
  KernelView view(st.net);
  for (int v : view.sides) {
    int xv = -1, w = -1, vw = -1;
    for (int e : st.net.out(v)) {
      if (st.net.is_leaf(st.net.edges[e].to)) {
        xv = e;
      } else if (view.sides.count(st.net.edges[e].to)) {
        w = st.net.edges[e].to;
        vw = e;
      }
    }
    if (xv < 0 || w < 0) continue;
    if (st.net.edges[xv].from == st.net.root) continue;  // already rerouted
    int xw = -1;
    for (int e : st.net.out(w))
      if (st.net.is_leaf(st.net.edges[e].to)) xw = e;
    if (xw < 0) continue;
    if (st.net.edges[xv].w <= st.net.edges[xw].w + st.net.edges[vw].w) {
      st.net.edges[xv].from = st.net.root;
      return true;
    }
  }
  return false;
}

bool rule_long_string(KernelState& st) {
  KernelView view(st.net);
  for (int u : view.live) {
    if (u == st.net.root) continue;
    if (!view.cores.count(u) && !view.retics.count(u)) continue;
    for (int e0 : st.net.out(u)) {
      int v1 = st.net.edges[e0].to;
      if (!view.sides.count(v1)) continue;
      std::vector<int> path{v1};
      int cur = v1;
      while (true) {
        int next = -1;
        for (int e : st.net.out(cur))
          if (!st.net.is_leaf(st.net.edges[e].to)) next = st.net.edges[e].to;
        if (next < 0) break;
        if (view.sides.count(next)) {
          path.push_back(next);
          cur = next;
          continue;
        }
        if (path.size() >= 2) {
          int v2 = path[1];
          int e12 = -1;
          for (int e : st.net.out(v1))
            if (st.net.edges[e].to == v2) e12 = e;
          Weight w12 = st.net.edges[e12].w;
          st.net.edges.erase(st.net.edges.begin() + e12);
          st.net.edges.push_back({st.net.root, v2, w12});
          st.net.edges.push_back({v1, next, 0});
          return true;
        }
        break;
      }
    }
  }
  return false;
}

void save_taxon(KernelState& st, int x) {
  st.k -= 1;
  st.target -= st.net.appd_singleton(x);
  std::set<int> marked{x};
  std::vector<int> stack{x};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int e : st.net.in(cur))
      if (marked.insert(st.net.edges[e].from).second) stack.push_back(st.net.edges[e].from);
  }
  std::vector<KNet::E> kept;
  for (const auto& e : st.net.edges)
    if (!marked.count(e.to)) kept.push_back(e);
  st.net.edges = std::move(kept);
  st.net.prune_bare();
  st.net.remerge_root();
}

struct TopStringsView {
  std::set<int> a_leaves;
  std::set<int> b_verts;
  std::set<int> y_sides, y_leaves;
  std::set<int> z_sides, z_leaves;
};

TopStringsView top_strings_view(const KernelState& st, const KernelView& view) {
  TopStringsView tv;
  for (int e : st.net.out(st.net.root)) {
    int to = st.net.edges[e].to;
    if (st.net.is_leaf(to)) tv.a_leaves.insert(to);
    if (view.sides.count(to)) tv.y_sides.insert(to);
  }
  std::set<int> seeds = view.retics;
  for (int c : view.cores)
    if (c != st.net.root) seeds.insert(c);
  for (int s : seeds)
    for (int v : st.net.descendants(s)) tv.b_verts.insert(v);
  for (int y : tv.y_sides)
    for (int e : st.net.out(y))
      if (st.net.is_leaf(st.net.edges[e].to)) tv.y_leaves.insert(st.net.edges[e].to);
  for (int v : view.sides)
    if (!tv.b_verts.count(v) && !tv.y_sides.count(v)) {
      tv.z_sides.insert(v);
      for (int e : st.net.out(v))
        if (st.net.is_leaf(st.net.edges[e].to)) tv.z_leaves.insert(st.net.edges[e].to);
    }
  return tv;
}

bool rule_top_strings(KernelState& st) {
  if (st.k <= 0) return false;
  int taxa = 0;
  for (int v : st.net.live_vertices())
    if (st.net.is_leaf(v)) ++taxa;
  if (taxa < 2) return false;
  KernelView view(st.net);
  TopStringsView tv = top_strings_view(st, view);
  if (st.k <= static_cast<int>(tv.b_verts.size() + tv.y_sides.size())) return false;
  Weight a_star = -1;
  int x_star = -1;
  for (int x : tv.a_leaves) {
    Weight w = st.net.edges[st.net.in(x)[0]].w;
    if (w > a_star) {
      a_star = w;
      x_star = x;
    }
  }
  Weight c_star = -1;
  int y_star = -1;
  for (int y : tv.y_leaves) {
    Weight w = st.net.edges[st.net.in(y)[0]].w;
    if (w > c_star) {
      c_star = w;
      y_star = y;
    }
  }
  if (x_star < 0 && y_star < 0) return false;
  if (y_star < 0 || (x_star >= 0 && a_star > c_star))
    save_taxon(st, x_star);
  else
    save_taxon(st, y_star);
  return true;
}

bool rule_trim_root_leaves(KernelState& st) {
  if (st.k < 1) return false;
  std::vector<std::pair<Weight, int>> a;
  for (int e : st.net.out(st.net.root)) {
    int to = st.net.edges[e].to;
    if (st.net.is_leaf(to)) a.push_back({st.net.edges[e].w, to});
  }
  if (static_cast<int>(a.size()) <= std::max(st.k, 0)) return false;
  std::sort(a.rbegin(), a.rend());
  for (size_t i = std::max(st.k, 0); i < a.size(); ++i) {
    int leaf = a[i].second;
    std::vector<int> inc = st.net.in(leaf);
    std::sort(inc.rbegin(), inc.rend());
    for (int e : inc) st.net.edges.erase(st.net.edges.begin() + e);
  }
  st.net.prune_bare();
  return true;
}

bool rule_path_length(KernelState& st) {
  if (st.k < 1) return false;
  KernelView view(st.net);
  TopStringsView tv = top_strings_view(st, view);
  std::set<int> yz = tv.y_sides;
  for (int v : tv.z_sides) yz.insert(v);
  for (int z0 : yz) {
    // Only maximal chains: skip when the parent is also a side vertex in yz.
    bool has_side_parent = false;
    for (int e : st.net.in(z0))
      if (yz.count(st.net.edges[e].from)) has_side_parent = true;
    if (has_side_parent) continue;
    std::vector<int> chain{z0};
    int cur = z0;
    while (static_cast<int>(chain.size()) < st.k + 2) {
      int next = -1;
      for (int e : st.net.out(cur))
        if (yz.count(st.net.edges[e].to)) next = st.net.edges[e].to;
      if (next < 0) break;
      chain.push_back(next);
      cur = next;
    }
    if (static_cast<int>(chain.size()) < st.k + 2) continue;
    int zk1 = chain[st.k - 1], zk = chain[st.k], zk2 = chain[st.k + 1];
    Weight w1 = 0, w2 = 0;
    int e1 = -1, e2 = -1;
    for (int e : st.net.out(zk1))
      if (st.net.edges[e].to == zk) {
        e1 = e;
        w1 = st.net.edges[e].w;
      }
    for (int e : st.net.out(zk))
      if (st.net.edges[e].to == zk2) {
        e2 = e;
        w2 = st.net.edges[e].w;
      }
    if (e1 < 0 || e2 < 0) continue;
    std::set<int> below_k = st.net.descendants(zk);
    std::set<int> below_k2 = st.net.descendants(zk2);
    std::set<int> gone;
    for (int v : below_k)
      if (!below_k2.count(v)) gone.insert(v);
    std::vector<KNet::E> kept;
    for (const auto& e : st.net.edges)
      if (!gone.count(e.from) && !gone.count(e.to)) kept.push_back(e);
    st.net.edges = std::move(kept);
    st.net.edges.push_back({zk1, zk2, w1 + w2});
    st.net.prune_bare();
    return true;
  }
  return false;
}

}  // namespace

bool mappd_apply_rule(MapPdInstance& inst, KernelRule rule) {
  KernelState st{to_knet(inst), inst.k, inst.target};
  // Rules assume that no earlier rule applies; establish that first.
  std::vector<std::function<bool(KernelState&)>> rules = {
      rule_twin_leaves, rule_degree2,          rule_side_path, rule_long_string,
      rule_top_strings, rule_trim_root_leaves, rule_path_length};
  int target_idx = static_cast<int>(rule);
  bool prepared = true;
  while (prepared) {
    prepared = false;
    for (int i = 0; i < target_idx; ++i)
      if (rules[i](st)) {
        prepared = true;
        break;
      }
  }
  bool fired = rules[target_idx](st);
  inst = from_knet(st.net, st.k, st.target, /*allow_zero=*/true);
  return fired;
}

KernelResult mappd_kernelize(const MapPdInstance& inst) {
  inst.network.validate();
  KernelState st{to_knet(inst), inst.k, inst.target};
  int applications = 0;
  long long guard = 8LL * (inst.network.g.num_edges() + 1) +
                    32LL * (inst.network.reticulation_edge_count() + 1) + 64;
  auto taxa_count = [&] {
    int c = 0;
    for (int v : st.net.live_vertices())
      if (st.net.is_leaf(v)) ++c;
    return c;
  };
  bool fired = true;
  while (fired && st.k > 0 && taxa_count() >= 2) {
    if (applications > guard) throw capacity_error("kernelization did not terminate");
    fired = rule_twin_leaves(st) || rule_degree2(st) || rule_side_path(st) ||
            rule_long_string(st) || rule_top_strings(st) || rule_trim_root_leaves(st) ||
            rule_path_length(st);
    if (fired) ++applications;
  }
  if (st.k <= 0 || taxa_count() <= 1) {
    // Decide the leftover directly and emit an equivalent two-leaf instance.
    bool yes = st.target <= 0;
    if (!yes && st.k >= 1)
      for (int v : st.net.live_vertices())
        if (st.net.is_leaf(v) && st.net.appd_singleton(v) >= st.target) yes = true;
    KernelResult out;
    int root = out.instance.network.g.add_vertex("");
    out.instance.network.g.add_edge(root, out.instance.network.g.add_vertex("k1"), 1);
    out.instance.network.g.add_edge(root, out.instance.network.g.add_vertex("k2"), 1);
    out.instance.network.root = root;
    out.instance.k = yes ? 1 : 0;
    out.instance.target = yes ? 0 : 1;
    out.stats.vertices = out.instance.network.g.num_vertices();
    out.stats.edges = out.instance.network.g.num_edges();
    out.stats.k = out.instance.k;
    out.stats.reticulation_edges = 0;
    out.stats.rule_applications = applications;
    return out;
  }
  // Normalization: merge parallels, split two-sided vertices with a zero
  // helper edge, rescale everything by m+1, then lift zeros to one.
  st.net.merge_parallel();
  for (int v : st.net.live_vertices()) {
    if (st.net.in(v).size() >= 2 && st.net.out(v).size() >= 2) {
      int vin = st.net.add_vertex("");
      for (auto& e : st.net.edges)
        if (e.to == v) e.to = vin;
      st.net.edges.push_back({vin, v, 0});
    }
  }
  long long m1 = static_cast<long long>(st.net.edges.size()) + 1;
  for (auto& e : st.net.edges) {
    e.w *= m1;
    if (e.w == 0) e.w = 1;
  }
  st.target *= m1;
  KernelResult out{from_knet(st.net, st.k, st.target, /*allow_zero=*/false), {}};
  out.instance.network.validate();
  out.stats.vertices = out.instance.network.g.num_vertices();
  out.stats.edges = out.instance.network.g.num_edges();
  out.stats.k = out.instance.k;
  out.stats.reticulation_edges = out.instance.network.reticulation_edge_count();
  out.stats.rule_applications = applications;
  return out;
}

// ---------------------------------------------------------------------------
// Max-Net-PD.

NetResult maxnetpd_brute_force(const MaxNetPdInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.network.taxa();
  int n = static_cast<int>(taxa.size());
  int size = std::min(inst.k, n);
  NetResult res;
  if (size == 0) {
    res.yes = inst.target <= Rational(0);
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  check_budget(binom(n, size) * std::max(1, n), "maxnetpd brute force");
  std::optional<Rational> best;
  for_each_subset_of_size(n, size, [&](const std::vector<int>& idx) {
    std::vector<int> s;
    for (int i : idx) s.push_back(taxa[i]);
    Rational value = netpd_value(inst.network, s);
    if (!best || value > *best) {
      best = value;
      res.witness = s;
    }
  });
  res.yes = best && *best >= inst.target;
  if (!res.yes) res.witness.reset();
  return res;
}

MaxNetPdInstance gen_maxnetpd_level1_from_unitcost_nap(const GnapInstance& nap) {
  nap.validate();
  if (nap.tree.height() > 2)
    throw input_error("maxnetpd generator: tree height exceeds 2");
  std::map<int, Rational> q_of;
  for (int x : nap.tree.taxa()) {
    Rational q(0);
    for (const GnapProject& p : nap.projects.at(x)) {
      if (p.cost == 0 && p.prob.is_zero()) continue;
      if (p.cost != 1) throw input_error("maxnetpd generator: project list is not unit-cost");
      q = p.prob;
    }
    q_of[x] = q;
  }
  long long k = std::min<long long>(nap.budget, static_cast<long long>(q_of.size()));
  MaxNetPdInstance out;
  out.k = static_cast<int>(k);
  // M: power of two above PD(X); Q: power of two with QD > 3 and Q d^-k > 3.
  Weight pdx = pd_value(nap.tree, nap.tree.taxa());
  BigInt m_pow = 2;
  while (Rational(m_pow) <= Rational(pdx)) m_pow *= 2;
  BigInt d_den = 1;
  for (auto& [x, q] : q_of) d_den = std::max(d_den, q.den());
  BigInt q_pow = 2;
  if (nap.target > Rational(0)) {
    while (Rational(q_pow) * nap.target <= Rational(3)) q_pow *= 2;
  }
  BigInt dk =
      boost::multiprecision::pow(d_den, static_cast<unsigned>(std::max<long long>(k, 0)));
  while (q_pow <= 3 * dk) q_pow *= 2;
  if (k > 0) {
    out.target = Rational(k) * Rational(q_pow) * (Rational(m_pow * m_pow) + nap.target);
  } else {
    // kQ(M^2+D) degenerates to 0 at k = 0; keep the answer equivalent.
    out.target = nap.target > Rational(0) ? Rational(1) : Rational(0);
  }

  BigInt kq = BigInt(std::max<long long>(k, 1)) * q_pow;
  BigInt qm2 = q_pow * m_pow * m_pow;
  if (kq > BigInt(1LL << 56) || qm2 > BigInt(1LL << 56))
    throw capacity_error("maxnetpd generator: scaled weights too large");

  PhyloDag g;
  std::map<int, int> remap;
  for (int v = 0; v < nap.tree.g.num_vertices(); ++v)
    remap[v] = g.add_vertex(nap.tree.g.is_leaf(v) ? "" : nap.tree.g.label(v));
  for (const Edge& e : nap.tree.g.edges())
    g.add_edge(remap[e.from], remap[e.to], (BigInt(e.weight) * kq).convert_to<long long>());
  std::map<int, Rational> inh;
  for (int x : nap.tree.taxa()) {
    int gx = remap[x];
    Rational q = q_of[x];
    int v1 = g.add_vertex("");
    int v2 = g.add_vertex("");
    int xm = g.add_vertex(nap.tree.g.label(x) + "-");
    int xs = g.add_vertex(nap.tree.g.label(x) + "*");
    g.add_edge(gx, v1, 1);
    int e_xv2 = g.add_edge(gx, v2, 1);
    int e_v1v2 = g.add_edge(v1, v2, 1);
    g.add_edge(v1, xm, 1);
    g.add_edge(v2, xs, qm2.convert_to<long long>());
    inh[e_xv2] = q / (Rational(2) - q);
    inh[e_v1v2] = q / Rational(2);
  }
  out.network.g = std::move(g);
  out.network.root = remap.at(nap.tree.root);
  out.network.inheritance = inh;
  out.network.validate(/*require_inheritance=*/true);
  return out;
}

}  // namespace pdark
