#include "pdark/treedecomp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace pdark {

namespace {

std::vector<std::set<int>> adjacency(const UGraph& g) {
  std::vector<std::set<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u].insert(v);
    adj[v].insert(u);
  }
  return adj;
}

// Min-fill elimination with lexicographic tie-breaking; returns the bag of
// each vertex at elimination time, in elimination order.
std::vector<std::vector<int>> min_fill_bags(const UGraph& g, std::vector<int>& elim_order) {
  std::vector<std::set<int>> adj = adjacency(g);
  std::vector<char> gone(g.n, 0);
  std::vector<std::vector<int>> bags;
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    long long best_fill = -1;
    for (int v = 0; v < g.n; ++v) {
      if (gone[v]) continue;
      long long fill = 0;
      std::vector<int> nb(adj[v].begin(), adj[v].end());
      for (size_t i = 0; i < nb.size(); ++i)
        for (size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]].count(nb[j])) ++fill;
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    std::vector<int> bag(adj[best].begin(), adj[best].end());
    bag.push_back(best);
    std::sort(bag.begin(), bag.end());
    bags.push_back(bag);
    elim_order.push_back(best);
    std::vector<int> nb(adj[best].begin(), adj[best].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (int u : nb) adj[u].erase(best);
    adj[best].clear();
    gone[best] = 1;
  }
  return bags;
}

// Raw rooted bag tree used before nicification.
struct BagTree {
  std::vector<std::vector<int>> bags;
  std::vector<std::vector<int>> children;
  std::vector<int> roots;
};

BagTree bag_tree_from_elimination(const UGraph& g) {
  std::vector<int> order;
  BagTree bt;
  bt.bags = min_fill_bags(g, order);
  std::vector<int> position(g.n);
  for (int i = 0; i < g.n; ++i) position[order[i]] = i;
  bt.children.resize(bt.bags.size());
  for (int i = 0; i < static_cast<int>(bt.bags.size()); ++i) {
    // Parent bag: elimination bag of the earliest-eliminated other member.
    int parent = -1;
    for (int u : bt.bags[i]) {
      if (u == order[i]) continue;
      if (position[u] > i && (parent < 0 || position[u] < position[order[parent]]))
        parent = position[u];
    }
    if (parent < 0)
      bt.roots.push_back(i);
    else
      bt.children[parent].push_back(i);
  }
  return bt;
}

BagTree bag_tree_from_raw(const UGraph& g, const RawDecomposition& raw) {
  // Validate the three properties before accepting the supplied decomposition.
  int b = static_cast<int>(raw.bags.size());
  if (b == 0) throw validation_error("decomposition: no bags");
  std::vector<char> covered(g.n, 0);
  for (const auto& bag : raw.bags)
    for (int v : bag) {
      if (v < 0 || v >= g.n) throw validation_error("decomposition: bag contains unknown vertex");
      covered[v] = 1;
    }
  for (int v = 0; v < g.n; ++v)
    if (!covered[v])
      throw validation_error("decomposition: vertex " + std::to_string(v) + " is in no bag");
  for (auto [u, v] : g.edges) {
    bool ok = false;
    for (const auto& bag : raw.bags)
      if (std::count(bag.begin(), bag.end(), u) && std::count(bag.begin(), bag.end(), v)) ok = true;
    if (!ok)
      throw validation_error("decomposition: edge {" + std::to_string(u) + "," +
                             std::to_string(v) + "} is in no bag");
  }
  // Connectivity of the nodes holding each vertex.
  std::vector<std::vector<int>> nbr(b);
  for (auto [x, y] : raw.tree_edges) {
    if (x < 0 || x >= b || y < 0 || y >= b)
      throw validation_error("decomposition: tree edge references unknown bag");
    nbr[x].push_back(y);
    nbr[y].push_back(x);
  }
  for (int v = 0; v < g.n; ++v) {
    int start = -1, want = 0;
    for (int i = 0; i < b; ++i)
      if (std::count(raw.bags[i].begin(), raw.bags[i].end(), v)) {
        if (start < 0) start = i;
        ++want;
      }
    std::vector<char> seen(b, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    int got = 1;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int nx : nbr[cur])
        if (!seen[nx] && std::count(raw.bags[nx].begin(), raw.bags[nx].end(), v)) {
          seen[nx] = 1;
          ++got;
          stack.push_back(nx);
        }
    }
    if (got != want)
      throw validation_error("decomposition: bags containing vertex " + std::to_string(v) +
                             " are not connected");
  }
  BagTree bt;
  bt.bags = raw.bags;
  for (auto& bag : bt.bags) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
  }
  bt.children.resize(b);
  std::vector<char> visited(b, 0);
  for (int r = 0; r < b; ++r) {
    if (visited[r]) continue;
    bt.roots.push_back(r);
    std::vector<int> stack{r};
    visited[r] = 1;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int nx : nbr[cur])
        if (!visited[nx]) {
          visited[nx] = 1;
          bt.children[cur].push_back(nx);
          stack.push_back(nx);
        }
    }
  }
  return bt;
}

struct Nicifier {
  const UGraph& g;
  const BagTree& bt;
  NiceTreeDecomposition out;
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<char> edge_done;
  std::vector<char> forgotten;

  Nicifier(const UGraph& graph, const BagTree& tree) : g(graph), bt(tree) {
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      auto [u, v] = g.edges[e];
      edge_index[{std::min(u, v), std::max(u, v)}] = e;
    }
    edge_done.assign(g.edges.size(), 0);
    forgotten.assign(g.n, 0);
  }

  int emit(DecompNode node) {
    out.width = std::max(out.width, static_cast<int>(node.bag.size()) - 1);
    out.nodes.push_back(std::move(node));
    return static_cast<int>(out.nodes.size()) - 1;
  }

  int emit_leaf() { return emit({NodeKind::Leaf, {}, -1, -1, -1, -1}); }

  int introduce(int below, int v) {
    std::vector<int> bag = out.nodes[below].bag;
    bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
    return emit({NodeKind::IntroduceVertex, bag, below, -1, v, -1});
  }

  // Introduces all pending edges between v and the bag of `below`, then forgets v.
  int forget(int below, int v) {
    const std::vector<int> bag = out.nodes[below].bag;
    for (int u : bag) {
      if (u == v) continue;
      auto it = edge_index.find({std::min(u, v), std::max(u, v)});
      if (it == edge_index.end() || edge_done[it->second]) continue;
      edge_done[it->second] = 1;
      below = emit({NodeKind::IntroduceEdge, bag, below, -1, -1, it->second});
    }
    std::vector<int> nb = bag;
    nb.erase(std::find(nb.begin(), nb.end(), v));
    forgotten[v] = 1;
    return emit({NodeKind::Forget, nb, below, -1, v, -1});
  }

  // Transforms a node with some bag into a node with bag `target`.
  int morph(int below, const std::vector<int>& target) {
    std::vector<int> to_forget;
    for (int v : out.nodes[below].bag)
      if (!std::binary_search(target.begin(), target.end(), v)) to_forget.push_back(v);
    for (int v : to_forget) below = forget(below, v);
    for (int v : target)
      if (!std::binary_search(out.nodes[below].bag.begin(), out.nodes[below].bag.end(), v))
        below = introduce(below, v);
    return below;
  }

  int build(int raw_node) {
    const std::vector<int>& bag = bt.bags[raw_node];
    std::vector<int> parts;
    for (int c : bt.children[raw_node]) parts.push_back(morph(build(c), bag));
    if (parts.empty()) {
      int leaf = emit_leaf();
      return morph(leaf, bag);
    }
    int acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i)
      acc = emit({NodeKind::Join, bag, acc, parts[i], -1, -1});
    return acc;
  }

  NiceTreeDecomposition run() {
    std::vector<int> tops;
    for (int r : bt.roots) tops.push_back(morph(build(r), {}));
    int acc = tops.empty() ? emit_leaf() : tops[0];
    for (size_t i = 1; i < tops.size(); ++i)
      acc = emit({NodeKind::Join, {}, acc, tops[i], -1, -1});
    out.root = acc;
    return std::move(out);
  }
};

}  // namespace

void NiceTreeDecomposition::validate(const UGraph& g) const {
  std::vector<char> vertex_seen(g.n, 0);
  std::vector<int> edge_count(g.edges.size(), 0);
  if (nodes.empty() || root != static_cast<int>(nodes.size()) - 1)
    throw validation_error("decomposition: root must be the last node");
  if (!nodes[root].bag.empty()) throw validation_error("decomposition: root bag not empty");
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const DecompNode& nd = nodes[i];
    for (int v : nd.bag) vertex_seen[v] = 1;
    switch (nd.kind) {
      case NodeKind::Leaf:
        if (!nd.bag.empty()) throw validation_error("decomposition: leaf bag not empty");
        break;
      case NodeKind::IntroduceVertex: {
        const auto& cb = nodes[nd.child1].bag;
        if (!std::binary_search(nd.bag.begin(), nd.bag.end(), nd.vertex) ||
            std::binary_search(cb.begin(), cb.end(), nd.vertex) ||
            cb.size() + 1 != nd.bag.size())
          throw validation_error("decomposition: malformed introduce-vertex node");
        break;
      }
      case NodeKind::IntroduceEdge: {
        ++edge_count[nd.edge];
        auto [u, v] = g.edges[nd.edge];
        if (!std::binary_search(nd.bag.begin(), nd.bag.end(), u) ||
            !std::binary_search(nd.bag.begin(), nd.bag.end(), v))
          throw validation_error("decomposition: introduced edge endpoints not in bag");
        if (nodes[nd.child1].bag != nd.bag)
          throw validation_error("decomposition: introduce-edge bag differs from child");
        break;
      }
      case NodeKind::Forget: {
        const auto& cb = nodes[nd.child1].bag;
        if (std::binary_search(nd.bag.begin(), nd.bag.end(), nd.vertex) ||
            !std::binary_search(cb.begin(), cb.end(), nd.vertex) ||
            nd.bag.size() + 1 != cb.size())
          throw validation_error("decomposition: malformed forget node");
        break;
      }
      case NodeKind::Join:
        if (nodes[nd.child1].bag != nd.bag || nodes[nd.child2].bag != nd.bag)
          throw validation_error("decomposition: join children bags differ");
        break;
    }
  }
  for (int v = 0; v < g.n; ++v)
    if (!vertex_seen[v]) throw validation_error("decomposition: vertex in no bag");
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (edge_count[e] != 1)
      throw validation_error("decomposition: edge introduced " + std::to_string(edge_count[e]) +
                             " times");
  // Property 3: since the root bag is empty, the occurrences of v form one
  // connected subtree iff v is forgotten exactly once.
  std::vector<int> forget_count(g.n, 0);
  for (const DecompNode& nd : nodes)
    if (nd.kind == NodeKind::Forget) ++forget_count[nd.vertex];
  for (int v = 0; v < g.n; ++v)
    if (forget_count[v] != 1)
      throw validation_error("decomposition: vertex " + std::to_string(v) +
                             " forgotten " + std::to_string(forget_count[v]) + " times");
}

NiceTreeDecomposition nice_tree_decomposition(const UGraph& g) {
  if (g.n == 0) {
    NiceTreeDecomposition d;
    d.nodes.push_back({NodeKind::Leaf, {}, -1, -1, -1, -1});
    d.root = 0;
    return d;
  }
  BagTree bt = bag_tree_from_elimination(g);
  NiceTreeDecomposition d = Nicifier(g, bt).run();
  d.validate(g);
  return d;
}

NiceTreeDecomposition nice_tree_decomposition(const UGraph& g, const RawDecomposition& supplied) {
  BagTree bt = bag_tree_from_raw(g, supplied);
  NiceTreeDecomposition d = Nicifier(g, bt).run();
  d.validate(g);
  return d;
}

int exact_treewidth(const UGraph& g) {
  if (g.n > 9) throw capacity_error("exact treewidth limited to 9 vertices");
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  int best = g.n;
  do {
    std::vector<std::set<int>> adj = adjacency(g);
    int width = 0;
    for (int v : perm) {
      width = std::max(width, static_cast<int>(adj[v].size()));
      std::vector<int> nb(adj[v].begin(), adj[v].end());
      for (size_t i = 0; i < nb.size(); ++i)
        for (size_t j = i + 1; j < nb.size(); ++j) {
          adj[nb[i]].insert(nb[j]);
          adj[nb[j]].insert(nb[i]);
        }
      for (int u : nb) adj[u].erase(v);
      adj[v].clear();
    }
    best = std::min(best, width);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace pdark
