#include "pdark/pdd.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>

namespace pdark {

std::vector<int> FoodWeb::prey_of(int x) const {
  std::vector<int> r;
  for (auto [u, v] : edges)
    if (v == x) r.push_back(u);
  return r;
}

std::vector<int> FoodWeb::predators_of(int x) const {
  std::vector<int> r;
  for (auto [u, v] : edges)
    if (u == x) r.push_back(v);
  return r;
}

std::vector<int> FoodWeb::sources(const std::vector<int>& taxa) const {
  std::set<int> nonsource;
  for (auto [u, v] : edges) nonsource.insert(v);
  std::vector<int> r;
  for (int x : taxa)
    if (!nonsource.count(x)) r.push_back(x);
  return r;
}

void PddInstance::validate() const {
  tree.validate();
  std::vector<int> taxa_vec = tree.taxa();
  std::set<int> taxa(taxa_vec.begin(), taxa_vec.end());
  std::map<int, std::vector<int>> adj;
  for (auto [u, v] : web.edges) {
    if (!taxa.count(u) || !taxa.count(v))
      throw input_error("pdd: food-web edge endpoint is not a taxon");
    adj[u].push_back(v);
  }
  std::map<int, int> state;
  std::function<void(int)> dfs = [&](int x) {
    state[x] = 1;
    for (int y : adj[x]) {
      if (state[y] == 1) throw input_error("pdd: food-web has a cycle");
      if (state[y] == 0) dfs(y);
    }
    state[x] = 2;
  };
  for (int x : taxa)
    if (state[x] == 0) dfs(x);
  if (k < 0) throw input_error("pdd: negative k");
}

bool viability_check(const PddInstance& inst, const std::vector<int>& taxa) {
  std::set<int> in_set(taxa.begin(), taxa.end());
  std::set<int> all_sources;
  for (int s : inst.web.sources(inst.tree.taxa())) all_sources.insert(s);
  for (int x : taxa) {
    if (all_sources.count(x)) continue;
    bool fed = false;
    for (auto [u, v] : inst.web.edges)
      if (v == x && in_set.count(u)) fed = true;
    if (!fed) return false;
  }
  return true;
}

PddInstance normalize_single_source(const PddInstance& inst) {
  PddInstance out = inst;
  std::vector<int> sources = inst.web.sources(inst.tree.taxa());
  int star = out.tree.g.add_vertex("*");
  out.tree.g.add_edge(out.tree.root, star, inst.target + 1);
  for (int s : sources) out.web.edges.push_back({star, s});
  out.k = inst.k + 1;
  out.target = 2 * inst.target + 1;
  return out;
}

namespace {

constexpr long long kInf = 1LL << 62;

// Edge-count distance from the nearest source (missing = unreachable).
std::map<int, int> source_distances(const PddInstance& inst) {
  std::map<int, int> dist;
  std::queue<int> queue;
  for (int s : inst.web.sources(inst.tree.taxa())) {
    dist[s] = 0;
    queue.push(s);
  }
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop();
    for (int y : inst.web.predators_of(x)) {
      if (dist.count(y)) continue;
      dist[y] = dist[x] + 1;
      queue.push(y);
    }
  }
  return dist;
}

// Restricts the instance to a subset of taxa (tree pruned, web induced).
PddInstance restrict_taxa(const PddInstance& inst, const std::set<int>& keep) {
  std::set<int> drop;
  for (int x : inst.tree.taxa())
    if (!keep.count(x)) drop.insert(x);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < inst.tree.g.num_vertices(); ++v) {
      if (drop.count(v) || inst.tree.g.is_leaf(v)) continue;
      bool all = true;
      for (int e : inst.tree.g.out_edges(v))
        if (!drop.count(inst.tree.g.edge(e).to)) all = false;
      if (all) {
        drop.insert(v);
        changed = true;
      }
    }
  }
  if (drop.count(inst.tree.root)) throw input_error("restrict_taxa: no taxon left");
  PddInstance out;
  out.k = inst.k;
  out.target = inst.target;
  PhyloDag g;
  std::map<int, int> remap;
  for (int v = 0; v < inst.tree.g.num_vertices(); ++v)
    if (!drop.count(v)) remap[v] = g.add_vertex(inst.tree.g.label(v));
  for (const Edge& e : inst.tree.g.edges())
    if (remap.count(e.from) && remap.count(e.to))
      g.add_edge(remap[e.from], remap[e.to], e.weight);
  out.tree.g = std::move(g);
  out.tree.root = remap.at(inst.tree.root);
  out.tree.allow_unary = true;
  out.tree.allow_zero_weights = inst.tree.allow_zero_weights;
  for (auto [u, v] : inst.web.edges)
    if (keep.count(u) && keep.count(v))
      out.web.edges.push_back({remap.at(u), remap.at(v)});
  return out;
}

std::vector<int> map_back_by_label(const PhyloDag& from, const PhyloDag& to,
                                   const std::vector<int>& taxa) {
  std::vector<std::string> labels;
  for (int x : taxa) labels.push_back(from.label(x));
  return taxa_from_labels(to, labels);
}

// Web topological order, sources first, smallest id first (deterministic).
std::vector<int> web_topological(const PddInstance& inst) {
  std::vector<int> taxa = inst.tree.taxa();
  std::map<int, int> remaining;
  for (int x : taxa) remaining[x] = static_cast<int>(inst.web.prey_of(x).size());
  std::priority_queue<int, std::vector<int>, std::greater<>> pq;
  for (int x : taxa)
    if (remaining[x] == 0) pq.push(x);
  std::vector<int> order;
  while (!pq.empty()) {
    int x = pq.top();
    pq.pop();
    order.push_back(x);
    for (int y : inst.web.predators_of(x))
      if (--remaining[y] == 0) pq.push(y);
  }
  return order;
}

}  // namespace

PddReduced apply_reduction_rules(const PddInstance& inst) {
  inst.validate();
  PddReduced out;
  // RR 1: drop taxa at source distance >= k (any viable k-set needs a shorter chain).
  std::map<int, int> dist = source_distances(inst);
  std::set<int> keep;
  for (int x : inst.tree.taxa())
    if (dist.count(x) && dist[x] < inst.k) keep.insert(x);
  if (keep.empty()) {
    out.instance = inst;
    out.instance->k = 0;  // nothing is savable
    return out;
  }
  PddInstance reduced = restrict_taxa(inst, keep);
  // RR 2: a heavy edge yields an immediate yes via the BFS feeding chain of
  // any taxon below it.
  std::map<int, int> rdist = source_distances(reduced);
  for (const Edge& e : reduced.tree.g.edges()) {
    if (e.weight < reduced.target) continue;
    std::vector<int> below;
    std::vector<int> stack{e.to};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (reduced.tree.g.is_leaf(v)) below.push_back(v);
      for (int ee : reduced.tree.g.out_edges(v)) stack.push_back(reduced.tree.g.edge(ee).to);
    }
    for (int x : below) {
      std::vector<int> chain{x};
      int cur = x;
      while (rdist.at(cur) > 0) {
        for (int p : reduced.web.prey_of(cur))
          if (rdist.count(p) && rdist.at(p) == rdist.at(cur) - 1) {
            cur = p;
            break;
          }
        chain.push_back(cur);
      }
      if (static_cast<int>(chain.size()) > reduced.k) continue;
      std::sort(chain.begin(), chain.end());
      out.early_yes = map_back_by_label(reduced.tree.g, inst.tree.g, chain);
      return out;
    }
  }
  // RR 3: drop the web edge vw when v is not a source and prey(v) is a subset
  // of prey(w).
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < reduced.web.edges.size(); ++i) {
      auto [v, w] = reduced.web.edges[i];
      std::vector<int> pv = reduced.web.prey_of(v);
      if (pv.empty()) continue;
      std::set<int> pw;
      for (int p : reduced.web.prey_of(w)) pw.insert(p);
      bool covered = true;
      for (int p : pv)
        if (!pw.count(p)) covered = false;
      if (covered) {
        reduced.web.edges.erase(reduced.web.edges.begin() + i);
        changed = true;
        break;
      }
    }
  }
  out.instance = std::move(reduced);
  return out;
}

PddResult pdd_brute_force(const PddInstance& inst, PddBruteAxis axis) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  int n = static_cast<int>(taxa.size());
  int size = std::min(inst.k, n);
  PddResult res;
  if (size == 0) {
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  check_budget(binom(n, axis == PddBruteAxis::K ? size : n - size) * n, "pdd brute force");
  Weight best = -1;
  for_each_subset_of_size(n, size, [&](const std::vector<int>& idx) {
    std::vector<int> s;
    for (int i : idx) s.push_back(taxa[i]);
    if (!viability_check(inst, s)) return;
    Weight pd = pd_value(inst.tree, s);
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
// Colorful star DP (single source required).

PddResult spdd_colored_dp(const PddInstance& inst, const std::map<int, int>& taxon_color) {
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("spdd_colored_dp: tree is not a star");
  std::vector<int> taxa = inst.tree.taxa();
  std::vector<int> sources = inst.web.sources(taxa);
  if (sources.size() != 1) throw input_error("spdd_colored_dp: not single-source");
  int star = sources[0];
  int colors = 0;
  for (const auto& [x, c] : taxon_color) colors = std::max(colors, c + 1);
  if (colors > 20) throw capacity_error("spdd_colored_dp: too many colors");
  std::size_t n_masks = std::size_t{1} << colors;
  check_budget(n_masks * taxa.size(), "spdd colored dp");

  auto leaf_weight = [&](int x) {
    return inst.tree.g.edge(inst.tree.g.in_edges(x)[0]).weight;
  };
  std::map<int, std::vector<int>> preds;
  for (int x : taxa) preds[x] = inst.web.predators_of(x);
  std::vector<int> order = web_topological(inst);

  struct Cell {
    std::uint64_t prev = 0, child = 0;
  };
  std::map<int, std::vector<Weight>> table;
  std::map<int, std::vector<std::vector<Cell>>> steps;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    std::uint64_t cx = std::uint64_t{1} << taxon_color.at(x);
    std::vector<Weight> acc(n_masks, -kInf);
    acc[cx] = leaf_weight(x);
    std::vector<std::vector<Cell>>& layer = steps[x];
    for (int y : preds[x]) {
      const std::vector<Weight>& child = table.at(y);
      std::vector<Cell> step(n_masks);
      std::vector<Weight> next(n_masks, -kInf);
      for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
        if (!(mask & cx)) continue;
        for_each_submask(mask & ~cx, [&](std::uint64_t sub) {
          if (acc[mask & ~sub] <= -kInf || child[sub] <= -kInf) return;
          Weight cand = acc[mask & ~sub] + child[sub];
          if (cand > next[mask]) {
            next[mask] = cand;
            step[mask] = {mask & ~sub, sub};
          }
        });
      }
      layer.push_back(step);
      acc = std::move(next);
    }
    std::vector<Weight> tab(n_masks, -kInf);
    tab[0] = 0;
    for (std::uint64_t mask = 1; mask < n_masks; ++mask)
      if (mask & cx) tab[mask] = acc[mask];
    table[x] = std::move(tab);
  }

  PddResult res;
  const std::vector<Weight>& root_tab = table.at(star);
  std::uint64_t best_mask = 0;
  Weight best = -kInf;
  for (std::uint64_t mask = 0; mask < n_masks; ++mask)
    if (root_tab[mask] > best) {
      best = root_tab[mask];
      best_mask = mask;
    }
  if (best < inst.target) return res;
  std::vector<int> witness;
  std::function<void(int, std::uint64_t)> rec = [&](int x, std::uint64_t mask) {
    if (mask == 0) return;
    witness.push_back(x);
    const auto& layer = steps.at(x);
    const std::vector<int>& ys = preds[x];
    std::uint64_t cur = mask;
    for (int i = static_cast<int>(ys.size()) - 1; i >= 0; --i) {
      const Cell& cell = layer[i][cur];
      rec(ys[i], cell.child);
      cur = cell.prev;
    }
  };
  rec(star, best_mask);
  std::sort(witness.begin(), witness.end());
  res.yes = true;
  res.witness = witness;
  return res;
}

PddResult spdd_solve_k(const PddInstance& inst, const FamilyOptions& fam, int threads) {
  (void)threads;
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("spdd_solve_k: tree is not a star");
  if (inst.k <= 0) {
    PddResult res;
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  PddInstance norm = normalize_single_source(inst);
  std::vector<int> taxa = norm.tree.taxa();
  int n = static_cast<int>(taxa.size());
  int kk = std::min(norm.k, n);
  ColoringFamily family = perfect_hash_family(n, kk, fam);
  for (const auto& fn : family.functions) {
    std::map<int, int> color;
    for (int i = 0; i < n; ++i) color[taxa[i]] = fn[i];
    PddResult r = spdd_colored_dp(norm, color);
    if (!r.yes) continue;
    std::vector<int> witness;
    for (int x : *r.witness)
      if (norm.tree.g.label(x) != "*") witness.push_back(x);
    std::vector<int> orig = map_back_by_label(norm.tree.g, inst.tree.g, witness);
    if (static_cast<int>(orig.size()) > inst.k || !viability_check(inst, orig) ||
        pd_value(inst.tree, orig) < inst.target)
      continue;
    PddResult res;
    res.yes = true;
    res.witness = orig;
    return res;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Pattern trees: PDD with parameter k + height.

namespace {

struct PatternTree {
  int size = 0;
  int root = 0;
  std::vector<std::pair<int, int>> edges;  // (parent, child), labels 0..size-1

  std::optional<int> parent(int v) const {
    for (auto [p, c] : edges)
      if (c == v) return p;
    return std::nullopt;
  }
};

std::vector<PatternTree> rooted_labeled_trees(int size) {
  std::vector<PatternTree> out;
  if (size == 1) {
    out.push_back({1, 0, {}});
    return out;
  }
  std::vector<int> seq(std::max(0, size - 2), 0);
  auto emit = [&]() {
    // Decode the Pruefer sequence into an undirected labeled tree.
    std::vector<int> degree(size, 1);
    for (int s : seq) ++degree[s];
    std::vector<std::pair<int, int>> undirected;
    std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
    for (int v = 0; v < size; ++v)
      if (degree[v] == 1) leaves.push(v);
    for (int s : seq) {
      int leaf = leaves.top();
      leaves.pop();
      undirected.push_back({s, leaf});
      if (--degree[s] == 1) leaves.push(s);
    }
    int a = leaves.top();
    leaves.pop();
    if (!leaves.empty()) {
      undirected.push_back({a, leaves.top()});
    }
    for (int root = 0; root < size; ++root) {
      PatternTree pt;
      pt.size = size;
      pt.root = root;
      std::vector<std::vector<int>> adj(size);
      for (auto [u, v] : undirected) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      std::vector<int> stack{root};
      std::vector<char> seen(size, 0);
      seen[root] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (!seen[w]) {
            seen[w] = 1;
            pt.edges.push_back({v, w});
            stack.push_back(w);
          }
      }
      out.push_back(pt);
    }
  };
  if (size == 2) {
    emit();
    return out;
  }
  while (true) {
    emit();
    int i = size - 3;
    while (i >= 0 && seq[i] == size - 1) seq[i--] = 0;
    if (i < 0) break;
    ++seq[i];
  }
  return out;
}

struct ColoredTree {
  PhyloTree tree;
  std::map<int, int> color;  // every vertex
};

// Applies the star-reduction rules exhaustively and calls `solve` on every
// fully reduced instance. When a dissolved vertex has several children of the
// pattern child color, the lifted parent weight can only go to one of them,
// so the reduction branches over the choices.
bool pattern_reduce_and_solve(
    const ColoredTree& ct, PatternTree pattern,
    const std::function<bool(const ColoredTree&)>& solve, int depth = 0) {
  if (depth > 64) throw capacity_error("pattern reduction recursion");
  ColoredTree cur = ct;
  PatternTree pat = std::move(pattern);
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<int, int>> pattern_pairs;
    for (auto [p, c] : pat.edges) pattern_pairs.insert({p, c});
    std::set<int> drop;
    // Edge-original: a tree edge whose color pair has no pattern twin cannot
    // lie in the spanning tree of any solution.
    for (const Edge& e : cur.tree.g.edges())
      if (!pattern_pairs.count({cur.color.at(e.from), cur.color.at(e.to)}))
        drop.insert(e.to);
    // Edge-pattern: a vertex matching a pattern parent but lacking the
    // required child color cannot be in the spanning tree either.
    for (auto [p, c] : pat.edges) {
      for (int u = 0; u < cur.tree.g.num_vertices(); ++u) {
        if (cur.color.at(u) != p || drop.count(u) || cur.tree.g.is_leaf(u)) continue;
        bool has = false;
        for (int e : cur.tree.g.out_edges(u))
          if (cur.color.at(cur.tree.g.edge(e).to) == c) has = true;
        if (!has) drop.insert(u);
      }
    }
    for (int v = 0; v < cur.tree.g.num_vertices(); ++v)
      if (v != cur.tree.root && !drop.count(v) && cur.tree.g.is_leaf(v) &&
          cur.tree.g.label(v).empty())
        drop.insert(v);  // bare internal leaf
    if (!drop.empty()) {
      std::set<int> gone;
      std::function<void(int)> down = [&](int v) {
        if (gone.count(v)) return;
        gone.insert(v);
        for (int e : cur.tree.g.out_edges(v)) down(cur.tree.g.edge(e).to);
      };
      for (int v : drop) down(v);
      if (gone.count(cur.tree.root)) return false;
      PhyloDag g;
      std::map<int, int> remap;
      for (int v = 0; v < cur.tree.g.num_vertices(); ++v)
        if (!gone.count(v)) remap[v] = g.add_vertex(cur.tree.g.label(v));
      std::map<int, int> ncolor;
      for (auto& [v, id] : remap) ncolor[id] = cur.color.at(v);
      for (const Edge& e : cur.tree.g.edges())
        if (remap.count(e.from) && remap.count(e.to))
          g.add_edge(remap[e.from], remap[e.to], e.weight);
      int new_root = remap.at(cur.tree.root);
      cur.tree.g = std::move(g);
      cur.tree.root = new_root;
      cur.color = std::move(ncolor);
      changed = true;
    }
  }
  bool any_taxon = false;
  for (int v : cur.tree.g.leaves())
    if (!cur.tree.g.label(v).empty()) any_taxon = true;
  if (!any_taxon) return false;

  // Pick a pattern grand-child of the root to dissolve its parent.
  std::optional<std::pair<int, int>> target;  // (parent color, child color)
  for (auto [p, c] : pat.edges) {
    if (p == pat.root) continue;
    auto pp = pat.parent(p);
    if (pp && *pp == pat.root) target = {p, c};
  }
  if (!target) return solve(cur);

  auto [up_color, vp_color] = *target;
  std::vector<int> matches;
  for (int u = 0; u < cur.tree.g.num_vertices(); ++u)
    if (u != cur.tree.root && !cur.tree.g.is_leaf(u) && cur.color.at(u) == up_color)
      matches.push_back(u);
  PatternTree npat;
  npat.size = pat.size;
  npat.root = pat.root;
  for (auto [p, c] : pat.edges) {
    if (c == up_color) continue;
    npat.edges.push_back({p == up_color ? pat.root : p, c});
  }
  if (matches.empty()) return pattern_reduce_and_solve(cur, npat, solve, depth + 1);

  std::vector<std::vector<int>> choices;
  for (int u : matches) {
    std::vector<int> c;
    for (int e : cur.tree.g.out_edges(u))
      if (cur.color.at(cur.tree.g.edge(e).to) == vp_color) c.push_back(e);
    if (c.empty()) return false;  // edge-pattern would have fired
    choices.push_back(c);
  }
  std::vector<size_t> pick(matches.size(), 0);
  while (true) {
    ColoredTree next;
    PhyloDag g;
    std::map<int, int> remap;
    std::set<int> dissolve(matches.begin(), matches.end());
    for (int v = 0; v < cur.tree.g.num_vertices(); ++v)
      if (!dissolve.count(v)) remap[v] = g.add_vertex(cur.tree.g.label(v));
    std::map<int, int> ncolor;
    for (auto& [v, id] : remap) ncolor[id] = cur.color.at(v);
    for (const Edge& e : cur.tree.g.edges()) {
      if (dissolve.count(e.to) || dissolve.count(e.from)) continue;
      g.add_edge(remap[e.from], remap[e.to], e.weight);
    }
    for (size_t i = 0; i < matches.size(); ++i) {
      int u = matches[i];
      Weight parent_w = cur.tree.g.edge(cur.tree.g.in_edges(u)[0]).weight;
      int receiver = choices[i][pick[i]];
      for (int e : cur.tree.g.out_edges(u)) {
        Weight w = cur.tree.g.edge(e).weight + (e == receiver ? parent_w : 0);
        g.add_edge(remap[cur.tree.root], remap[cur.tree.g.edge(e).to], w);
      }
    }
    int new_root = remap.at(cur.tree.root);
    next.tree.g = std::move(g);
    next.tree.root = new_root;
    next.tree.allow_unary = true;
    for (auto& [id, c] : ncolor) next.color[id] = c;
    if (pattern_reduce_and_solve(next, npat, solve, depth + 1)) return true;
    size_t i = 0;
    while (i < matches.size() && pick[i] + 1 == choices[i].size()) pick[i++] = 0;
    if (i == matches.size()) break;
    ++pick[i];
  }
  return false;
}

}  // namespace

PddResult pdd_solve_k_height(const PddInstance& inst, const FamilyOptions& fam) {
  inst.validate();
  if (inst.k <= 0) {
    PddResult res;
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  PddInstance norm = normalize_single_source(inst);
  int height = norm.tree.height();
  long long kk = static_cast<long long>(norm.k) * height + 1;  // +1 for the root
  int n_vertices = norm.tree.g.num_vertices();
  int cap = static_cast<int>(std::min<long long>(kk, n_vertices));
  std::uint64_t trees = 1;
  for (int i = 0; i < cap; ++i) {
    trees *= std::max(1, cap);
    check_budget(trees, "pattern tree enumeration");
  }

  PddResult out;
  for (int i = 1; i <= cap && !out.yes; ++i) {
    ColoringFamily family = perfect_hash_family(n_vertices, i, fam);
    std::vector<PatternTree> patterns = rooted_labeled_trees(i);
    for (const auto& fn : family.functions) {
      if (out.yes) break;
      std::map<int, int> color;
      for (int v = 0; v < n_vertices; ++v) color[v] = fn[v];
      for (const PatternTree& pat : patterns) {
        if (color.at(norm.tree.root) != pat.root) continue;
        ColoredTree ct{norm.tree, color};
        auto solve = [&](const ColoredTree& star) {
          if (!star.tree.is_star()) return false;
          PddInstance sub;
          sub.tree = star.tree;
          sub.tree.allow_unary = true;
          sub.k = norm.k;
          sub.target = norm.target;
          std::map<std::string, int> by_label;
          for (int x : star.tree.taxa()) by_label[star.tree.g.label(x)] = x;
          for (auto [u, v] : norm.web.edges) {
            auto lu = by_label.find(norm.tree.g.label(u));
            auto lv = by_label.find(norm.tree.g.label(v));
            if (lu != by_label.end() && lv != by_label.end())
              sub.web.edges.push_back({lu->second, lv->second});
          }
          if (sub.web.sources(sub.tree.taxa()).size() != 1) return false;
          std::map<int, int> tc;
          for (int x : sub.tree.taxa()) tc[x] = star.color.at(x);
          PddResult r;
          try {
            r = spdd_colored_dp(sub, tc);
          } catch (const input_error&) {
            return false;
          }
          if (!r.yes) return false;
          std::vector<int> witness;
          for (int x : *r.witness)
            if (sub.tree.g.label(x) != "*") witness.push_back(x);
          std::vector<int> orig = map_back_by_label(sub.tree.g, inst.tree.g, witness);
          if (static_cast<int>(orig.size()) > inst.k || !viability_check(inst, orig) ||
              pd_value(inst.tree, orig) < inst.target)
            return false;
          out.yes = true;
          out.witness = orig;
          return true;
        };
        if (pattern_reduce_and_solve(ct, pat, solve)) break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Colored DP for the parameter D (edge color sets + taxon colors).

PddResult pdd_colored_D_dp(const PddInstance& inst, const PddColoring& coloring) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  std::vector<int> sources = inst.web.sources(taxa);
  if (sources.size() != 1) throw input_error("pdd_colored_D_dp: not single-source");
  int star = sources[0];
  int d_colors = coloring.edges.num_colors;
  int k_colors = coloring.k;
  if (d_colors + k_colors > 24) throw capacity_error("pdd_colored_D_dp: too many colors");
  std::size_t nd = std::size_t{1} << d_colors, nk = std::size_t{1} << k_colors;
  check_budget(nd * nk * taxa.size(), "pdd colored D dp");

  std::vector<std::uint64_t> cpath(inst.tree.g.num_vertices(), 0);
  for (int v : inst.tree.g.topological_order())
    for (int e : inst.tree.g.out_edges(v))
      cpath[inst.tree.g.edge(e).to] = cpath[v] | coloring.edges.edge_mask[e];

  std::map<int, std::vector<int>> preds;
  for (int x : taxa) preds[x] = inst.web.predators_of(x);
  std::vector<int> order = web_topological(inst);

  struct Cell {
    std::uint64_t prev_c1 = 0, prev_c2 = 0, child_c1 = 0, child_c2 = 0;
  };
  auto idx = [&](std::uint64_t c1, std::uint64_t c2) { return c1 * nk + c2; };
  std::map<int, std::vector<char>> table;
  std::map<int, std::vector<std::vector<Cell>>> steps;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    std::uint64_t cx = cpath[x];
    std::uint64_t hx = std::uint64_t{1} << coloring.taxon_color.at(x);
    std::vector<char> acc(nd * nk, 0);
    for_each_submask(cx, [&](std::uint64_t sub) { acc[idx(sub, hx)] = 1; });
    const std::vector<int>& ys = preds[x];
    std::vector<std::vector<Cell>>& layer = steps[x];
    for (int y : ys) {
      const std::vector<char>& child = table.at(y);
      std::vector<char> next(nd * nk, 0);
      std::vector<Cell> step(nd * nk);
      for (std::uint64_t c1 = 0; c1 < nd; ++c1) {
        for (std::uint64_t c2 = 0; c2 < nk; ++c2) {
          if (!(c2 & hx)) continue;
          bool done = false;
          for_each_submask(c1, [&](std::uint64_t s1) {
            if (done) return;
            for_each_submask(c2 & ~hx, [&](std::uint64_t s2) {
              if (done) return;
              if (acc[idx(c1 & ~s1, c2 & ~s2)] && child[idx(s1, s2)]) {
                next[idx(c1, c2)] = 1;
                step[idx(c1, c2)] = {c1 & ~s1, c2 & ~s2, s1, s2};
                done = true;
              }
            });
          });
        }
      }
      layer.push_back(step);
      acc = std::move(next);
    }
    std::vector<char> tab(nd * nk, 0);
    tab[idx(0, 0)] = 1;
    for (std::uint64_t c1 = 0; c1 < nd; ++c1)
      for (std::uint64_t c2 = 1; c2 < nk; ++c2)
        if (acc[idx(c1, c2)]) tab[idx(c1, c2)] = 1;
    table[x] = std::move(tab);
  }
  PddResult res;
  std::uint64_t full = nd - 1;
  const std::vector<char>& root_tab = table.at(star);
  std::uint64_t hit_c2 = nk;
  for (std::uint64_t c2 = 0; c2 < nk; ++c2)
    if (root_tab[idx(full, c2)]) {
      hit_c2 = c2;
      break;
    }
  if (hit_c2 == nk) return res;
  std::vector<int> witness;
  std::function<void(int, std::uint64_t, std::uint64_t)> rec =
      [&](int x, std::uint64_t c1, std::uint64_t c2) {
        if (c2 == 0) return;
        witness.push_back(x);
        const auto& layer = steps.at(x);
        const std::vector<int>& ys = preds[x];
        std::uint64_t k1 = c1, k2 = c2;
        for (int i = static_cast<int>(ys.size()) - 1; i >= 0; --i) {
          const Cell& cell = layer[i][idx(k1, k2)];
          rec(ys[i], cell.child_c1, cell.child_c2);
          k1 = cell.prev_c1;
          k2 = cell.prev_c2;
        }
      };
  rec(star, full, hit_c2);
  std::sort(witness.begin(), witness.end());
  witness.erase(std::unique(witness.begin(), witness.end()), witness.end());
  res.yes = true;
  res.witness = witness;
  return res;
}

PddResult pdd_solve_D(const PddInstance& inst, const FamilyOptions& fam) {
  inst.validate();
  if (inst.k <= 0) {
    PddResult res;
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  PddReduced red = apply_reduction_rules(inst);
  if (red.early_yes) {
    PddResult res;
    res.yes = true;
    res.witness = red.early_yes;
    return res;
  }
  PddInstance base = *red.instance;
  if (base.k == 0) {
    PddResult res;
    res.yes = base.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  PddInstance norm = normalize_single_source(base);
  long long d = norm.target;
  long long w_total = norm.tree.g.total_weight();
  if (w_total < d) return {};
  int n = static_cast<int>(norm.tree.taxa().size());
  int kk = std::min(norm.k, n);
  ColoringFamily fam_d =
      perfect_hash_family(static_cast<int>(w_total), static_cast<int>(d), fam);
  ColoringFamily fam_k = perfect_hash_family(n, kk, fam);
  std::vector<int> taxa = norm.tree.taxa();
  for (const auto& fd : fam_d.functions) {
    PddColoring coloring;
    coloring.edges.num_colors = static_cast<int>(d);
    coloring.edges.edge_mask.resize(norm.tree.g.num_edges(), 0);
    std::size_t pos = 0;
    for (int e = 0; e < norm.tree.g.num_edges(); ++e) {
      std::uint64_t mask = 0;
      for (Weight t = 0; t < norm.tree.g.edge(e).weight; ++t)
        mask |= std::uint64_t{1} << fd[pos++];
      coloring.edges.edge_mask[e] = mask;
    }
    coloring.k = kk;
    for (const auto& fk : fam_k.functions) {
      for (int i = 0; i < n; ++i) coloring.taxon_color[taxa[i]] = fk[i];
      PddResult r = pdd_colored_D_dp(norm, coloring);
      if (!r.yes) continue;
      std::vector<int> witness;
      for (int x : *r.witness)
        if (norm.tree.g.label(x) != "*") witness.push_back(x);
      std::vector<int> orig = map_back_by_label(norm.tree.g, inst.tree.g, witness);
      if (static_cast<int>(orig.size()) > inst.k || !viability_check(inst, orig) ||
          pd_value(inst.tree, orig) < inst.target)
        continue;
      PddResult res;
      res.yes = true;
      res.witness = orig;
      return res;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Treewidth DP over the food-web (star trees).

namespace {

UGraph web_ugraph(const PddInstance& inst, std::map<int, int>& pos) {
  std::vector<int> taxa = inst.tree.taxa();
  UGraph g;
  g.n = static_cast<int>(taxa.size());
  for (int i = 0; i < g.n; ++i) pos[taxa[i]] = i;
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : inst.web.edges) {
    auto key = std::minmax(pos[u], pos[v]);
    if (seen.insert({key.first, key.second}).second)
      g.edges.push_back({key.first, key.second});
  }
  return g;
}

// Decision-only treewidth DP; assignments per bag vertex are
// 0 = OUT, 1 = NEED (selected, not yet fed), 2 = OK (selected, fed/source).
bool spdd_tw_decide(const PddInstance& inst, const NiceTreeDecomposition& decomp,
                    const UGraph& web_graph, const std::set<int>& forbidden) {
  std::vector<int> taxa = inst.tree.taxa();
  std::map<int, int> pos;
  for (int i = 0; i < static_cast<int>(taxa.size()); ++i) pos[taxa[i]] = i;
  std::set<int> forbidden_idx;
  for (int x : forbidden) forbidden_idx.insert(pos.at(x));
  std::set<int> source_set;
  for (int s : inst.web.sources(taxa)) source_set.insert(pos[s]);
  std::set<std::pair<int, int>> directed;  // (prey, predator) as graph indices
  for (auto [u, v] : inst.web.edges) directed.insert({pos[u], pos[v]});
  auto leaf_weight = [&](int i) {
    return inst.tree.g.edge(inst.tree.g.in_edges(taxa[i])[0]).weight;
  };
  int kcap = std::min<int>(inst.k, static_cast<int>(taxa.size()));
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
    check_budget(n_states * (kcap + 1) * decomp.nodes.size(), "treewidth dp");
    auto& tab = tables[t];
    tab.assign(n_states, std::vector<Weight>(kcap + 1, -kInf));
    switch (nd.kind) {
      case NodeKind::Leaf:
        tab[0][0] = 0;
        break;
      case NodeKind::IntroduceVertex: {
        const auto& child = tables[nd.child1];
        int vi = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), nd.vertex) -
                                  nd.bag.begin());
        for (std::size_t s = 0; s < n_states; ++s) {
          int assign = digit(s, vi);
          std::size_t cs = 0, mult = 1;
          for (size_t i = 0; i < nd.bag.size(); ++i) {
            if (static_cast<int>(i) == vi) continue;
            cs += static_cast<std::size_t>(digit(s, static_cast<int>(i))) * mult;
            mult *= 3;
          }
          for (int cnt = 0; cnt <= kcap; ++cnt) {
            Weight base = child[cs][cnt];
            if (base <= -kInf) continue;
            if (assign == 0) {
              tab[s][cnt] = std::max(tab[s][cnt], base);
            } else if (cnt + 1 <= kcap && !forbidden_idx.count(nd.vertex)) {
              bool ok_state = assign == 2 ? source_set.count(nd.vertex) > 0
                                          : source_set.count(nd.vertex) == 0;
              if (ok_state)
                tab[s][cnt + 1] =
                    std::max(tab[s][cnt + 1], base + leaf_weight(nd.vertex));
            }
          }
        }
        break;
      }
      case NodeKind::IntroduceEdge: {
        const auto& child = tables[nd.child1];
        auto [a, b] = web_graph.edges[nd.edge];
        int prey = directed.count({a, b}) ? a : b;
        int pred = prey == a ? b : a;
        int pi = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), prey) -
                                  nd.bag.begin());
        int qi = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), pred) -
                                  nd.bag.begin());
        tab = child;
        std::size_t mult = 1;
        for (int j = 0; j < qi; ++j) mult *= 3;
        for (std::size_t s = 0; s < n_states; ++s) {
          if (digit(s, qi) != 2 || digit(s, pi) == 0) continue;
          std::size_t cs = s - mult;  // predator NEED below the edge
          for (int cnt = 0; cnt <= kcap; ++cnt)
            tab[s][cnt] = std::max(tab[s][cnt], child[cs][cnt]);
        }
        break;
      }
      case NodeKind::Forget: {
        const auto& child = tables[nd.child1];
        const DecompNode& cnd = decomp.nodes[nd.child1];
        int vi = static_cast<int>(std::lower_bound(cnd.bag.begin(), cnd.bag.end(), nd.vertex) -
                                  cnd.bag.begin());
        for (std::size_t cs = 0; cs < state_count(cnd); ++cs) {
          int assign = digit(cs, vi);
          if (assign == 1) continue;  // unfed vertices may not be forgotten
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
        std::function<void(int, std::size_t, std::size_t, std::size_t, Weight, int)> walk =
            [&](int i, std::size_t s1, std::size_t s2, std::size_t s, Weight dup, int sel) {
              if (i == bag_size) {
                for (int a = 0; a <= kcap; ++a) {
                  if (c1[s1][a] <= -kInf) continue;
                  for (int b = 0; b <= kcap; ++b) {
                    if (c2[s2][b] <= -kInf) continue;
                    int cnt = a + b - sel;
                    if (cnt < 0 || cnt > kcap) continue;
                    Weight val = c1[s1][a] + c2[s2][b] - dup;
                    tab[s][cnt] = std::max(tab[s][cnt], val);
                  }
                }
                return;
              }
              std::size_t mult = 1;
              for (int j = 0; j < i; ++j) mult *= 3;
              walk(i + 1, s1, s2, s, dup, sel);  // OUT on both sides
              for (int d1 = 1; d1 <= 2; ++d1)
                for (int d2 = 1; d2 <= 2; ++d2) {
                  int dp = (d1 == 2 || d2 == 2) ? 2 : 1;  // fed below either side
                  walk(i + 1, s1 + d1 * mult, s2 + d2 * mult, s + dp * mult,
                       dup + leaf_weight(nd.bag[i]), sel + 1);
                }
            };
        walk(0, 0, 0, 0, 0, 0);
        break;
      }
    }
  }
  const auto& root = tables[decomp.root];
  Weight best = -kInf;
  for (int cnt = 0; cnt <= kcap; ++cnt) best = std::max(best, root[0][cnt]);
  return best >= inst.target;
}

}  // namespace

PddResult spdd_treewidth_dp(const PddInstance& inst, const NiceTreeDecomposition& decomp,
                            const UGraph& web_graph) {
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("spdd_treewidth_dp: tree is not a star");
  decomp.validate(web_graph);
  PddResult res;
  if (inst.k <= 0 || inst.tree.taxa().empty()) {
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  if (!spdd_tw_decide(inst, decomp, web_graph, {})) return res;
  // Witness by peeling: forbid taxa one by one while the answer stays yes;
  // every remaining solution then uses all of the unforbidden taxa, so they
  // are themselves a solution.
  std::set<int> forbidden;
  for (int x : inst.tree.taxa()) {
    forbidden.insert(x);
    if (!spdd_tw_decide(inst, decomp, web_graph, forbidden)) forbidden.erase(x);
  }
  std::vector<int> witness;
  for (int x : inst.tree.taxa())
    if (!forbidden.count(x)) witness.push_back(x);
  if (static_cast<int>(witness.size()) > inst.k || !viability_check(inst, witness) ||
      pd_value(inst.tree, witness) < inst.target)
    throw validation_error("treewidth dp: witness peeling failed");
  res.yes = true;
  res.witness = witness;
  return res;
}

PddResult spdd_treewidth_dp(const PddInstance& inst) {
  std::map<int, int> pos;
  UGraph g = web_ugraph(inst, pos);
  return spdd_treewidth_dp(inst, nice_tree_decomposition(g), g);
}

// ---------------------------------------------------------------------------
// Cluster modulator.

PddResult spdd_cluster_solver(const PddInstance& inst, const std::vector<int>& modulator) {
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("spdd_cluster_solver: tree is not a star");
  std::vector<int> taxa = inst.tree.taxa();
  auto leaf_weight = [&](int x) {
    return inst.tree.g.edge(inst.tree.g.in_edges(x)[0]).weight;
  };
  std::set<int> global_sources;
  for (int s : inst.web.sources(taxa)) global_sources.insert(s);

  PddResult best;
  Weight best_pd = -1;
  int d = static_cast<int>(modulator.size());
  check_budget(std::uint64_t{1} << d, "cluster modulator subsets");
  for (std::uint64_t zbits = 0; zbits < (std::uint64_t{1} << d); ++zbits) {
    std::set<int> z;
    for (int i = 0; i < d; ++i)
      if (zbits & (std::uint64_t{1} << i)) z.insert(modulator[i]);
    if (static_cast<int>(z.size()) > inst.k) continue;
    std::set<int> r0;
    for (int y : modulator)
      if (!z.count(y)) r0.insert(y);
    // Taxa still reachable from a source once Y \ Z dies.
    std::set<int> alive;
    {
      std::queue<int> queue;
      for (int s : global_sources)
        if (!r0.count(s)) {
          alive.insert(s);
          queue.push(s);
        }
      while (!queue.empty()) {
        int x = queue.front();
        queue.pop();
        for (int y : inst.web.predators_of(x))
          if (!r0.count(y) && !alive.count(y)) {
            alive.insert(y);
            queue.push(y);
          }
      }
    }
    bool z_ok = true;
    for (int y : z)
      if (!alive.count(y)) z_ok = false;
    if (!z_ok) continue;

    // Components of the alive non-modulator taxa; each must be source-dominant
    // relative to Z (one in-component source, adjacent to all other members
    // unless they are fed by Z).
    std::vector<int> free_taxa;
    for (int x : taxa)
      if (alive.count(x) && !z.count(x)) free_taxa.push_back(x);
    std::map<int, int> comp;
    int n_comp = 0;
    for (int x : free_taxa) {
      if (comp.count(x)) continue;
      std::queue<int> queue;
      queue.push(x);
      comp[x] = n_comp;
      while (!queue.empty()) {
        int cur = queue.front();
        queue.pop();
        for (auto [u, v] : inst.web.edges) {
          int other = u == cur ? v : (v == cur ? u : -1);
          if (other < 0 || comp.count(other) || z.count(other) || !alive.count(other))
            continue;
          comp[other] = n_comp;
          queue.push(other);
        }
      }
      ++n_comp;
    }
    std::vector<std::vector<int>> members(n_comp);
    for (auto [x, c] : comp) members[c].push_back(x);
    for (auto& m : members) std::sort(m.begin(), m.end());
    std::vector<int> comp_source(n_comp, -1);
    for (int c = 0; c < n_comp; ++c) {
      std::vector<int> srcs;
      for (int x : members[c]) {
        bool inside_prey = false;
        for (int p : inst.web.prey_of(x))
          if (comp.count(p) && comp[p] == c) inside_prey = true;
        if (!inside_prey) srcs.push_back(x);
      }
      if (srcs.size() != 1)
        throw input_error("spdd_cluster_solver: component without a unique source");
      comp_source[c] = srcs[0];
      for (int x : members[c]) {
        if (x == comp_source[c]) continue;
        bool dominated = false, z_fed = false;
        for (int p : inst.web.prey_of(x)) {
          if (p == comp_source[c]) dominated = true;
          if (z.count(p)) z_fed = true;
        }
        if (!dominated && !z_fed)
          throw input_error("spdd_cluster_solver: component not source-dominant");
      }
    }

    std::vector<int> zvec(z.begin(), z.end());
    int zn = static_cast<int>(zvec.size());
    std::uint64_t need = 0;  // modulator members still needing a free feeder
    for (int i = 0; i < zn; ++i) {
      int y = zvec[i];
      if (global_sources.count(y)) continue;
      bool fed_in_z = false;
      for (int p : inst.web.prey_of(y))
        if (z.count(p)) fed_in_z = true;
      if (!fed_in_z) need |= std::uint64_t{1} << i;
    }
    int budget = inst.k - static_cast<int>(z.size());
    std::size_t n_cov = std::size_t{1} << zn;
    check_budget(n_cov * (budget + 1) * std::max(1, n_comp), "cluster combine dp");
    std::vector<std::vector<Weight>> total(budget + 1, std::vector<Weight>(n_cov, -kInf));
    std::vector<std::vector<std::vector<int>>> sel(
        budget + 1, std::vector<std::vector<int>>(n_cov));  // chosen taxa so far
    total[0][0] = 0;
    for (int c = 0; c < n_comp; ++c) {
      int sz = static_cast<int>(members[c].size());
      check_budget(std::uint64_t{1} << sz, "cluster component sets");
      std::vector<std::vector<int>> comp_sets;
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << sz); ++bits) {
        std::vector<int> s;
        for (int i = 0; i < sz; ++i)
          if (bits & (std::uint64_t{1} << i)) s.push_back(members[c][i]);
        bool has_source = std::count(s.begin(), s.end(), comp_source[c]) > 0;
        bool ok = true;
        for (int x : s) {
          bool z_fed = false;
          for (int p : inst.web.prey_of(x))
            if (z.count(p)) z_fed = true;
          if (x == comp_source[c]) {
            if (!global_sources.count(x) && !z_fed) ok = false;
          } else {
            bool src_fed = has_source && [&] {
              for (int p : inst.web.prey_of(x))
                if (p == comp_source[c]) return true;
              return false;
            }();
            if (!src_fed && !z_fed) ok = false;
          }
        }
        if (ok) comp_sets.push_back(s);
      }
      std::vector<std::vector<Weight>> next(budget + 1, std::vector<Weight>(n_cov, -kInf));
      std::vector<std::vector<std::vector<int>>> nsel(
          budget + 1, std::vector<std::vector<int>>(n_cov));
      for (int used = 0; used <= budget; ++used)
        for (std::uint64_t cov = 0; cov < n_cov; ++cov) {
          if (total[used][cov] <= -kInf) continue;
          for (const auto& s : comp_sets) {
            int nu = used + static_cast<int>(s.size());
            if (nu > budget) continue;
            Weight gain = 0;
            std::uint64_t ncov = cov;
            for (int x : s) {
              gain += leaf_weight(x);
              for (int i = 0; i < zn; ++i)
                for (int p : inst.web.prey_of(zvec[i]))
                  if (p == x) ncov |= std::uint64_t{1} << i;
            }
            Weight cand = total[used][cov] + gain;
            if (cand > next[nu][ncov]) {
              next[nu][ncov] = cand;
              nsel[nu][ncov] = sel[used][cov];
              for (int x : s) nsel[nu][ncov].push_back(x);
            }
          }
        }
      total = std::move(next);
      sel = std::move(nsel);
    }
    Weight z_pd = 0;
    for (int y : z) z_pd += leaf_weight(y);
    for (int used = 0; used <= budget; ++used)
      for (std::uint64_t cov = 0; cov < n_cov; ++cov) {
        if (total[used][cov] <= -kInf || (cov & need) != need) continue;
        Weight value = total[used][cov] + z_pd;
        if (value > best_pd) {
          best_pd = value;
          std::vector<int> witness(z.begin(), z.end());
          for (int x : sel[used][cov]) witness.push_back(x);
          std::sort(witness.begin(), witness.end());
          best.witness = witness;
        }
      }
  }
  best.yes = best_pd >= inst.target;
  if (best.yes) {
    if (!viability_check(inst, *best.witness) ||
        static_cast<int>(best.witness->size()) > inst.k)
      throw validation_error("cluster solver: invalid witness");
  } else {
    best.witness.reset();
  }
  return best;
}

// ---------------------------------------------------------------------------
// Hitting set with tree profits.

PddResult hitting_set_tree_profits(const HittingSetTreeProfitInstance& inst) {
  inst.tree.validate();
  int fam = static_cast<int>(inst.family.size());
  if (fam > 16) throw capacity_error("hitting set: family too large");
  std::size_t n_masks = std::size_t{1} << fam;
  int kcap = std::max(0, inst.k);
  check_budget(n_masks * (kcap + 1) * inst.tree.g.num_vertices() * n_masks,
               "hitting set dp");

  struct Cell {
    std::uint64_t prev_m = 0, child_m = 0;
    int prev_s = 0, child_s = 0, prev_b = 0, child_b = 0;
  };
  using Table = std::array<std::vector<std::vector<Weight>>, 2>;
  std::map<int, Table> table;
  std::map<int, std::vector<std::array<std::vector<std::vector<Cell>>, 2>>> steps;
  auto order = inst.tree.g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    Table& tab = table[v];
    for (int b = 0; b <= 1; ++b)
      tab[b].assign(n_masks, std::vector<Weight>(kcap + 1, -kInf));
    if (inst.tree.g.is_leaf(v)) {
      tab[0][0][0] = 0;
      std::uint64_t hits = 0;
      for (int i = 0; i < fam; ++i)
        if (inst.family[i].count(v)) hits |= std::uint64_t{1} << i;
      if (kcap >= 1)
        for_each_submask(hits, [&](std::uint64_t sub) { tab[1][sub][1] = 0; });
      continue;
    }
    Table acc;
    for (int b = 0; b <= 1; ++b)
      acc[b].assign(n_masks, std::vector<Weight>(kcap + 1, -kInf));
    acc[0][0][0] = 0;
    auto& layers = steps[v];
    for (int e : inst.tree.g.out_edges(v)) {
      int u = inst.tree.g.edge(e).to;
      Weight lam = inst.tree.g.edge(e).weight;
      const Table& child = table.at(u);
      Table next;
      std::array<std::vector<std::vector<Cell>>, 2> step;
      for (int b = 0; b <= 1; ++b) {
        next[b].assign(n_masks, std::vector<Weight>(kcap + 1, -kInf));
        step[b].assign(n_masks, std::vector<Cell>(kcap + 1));
      }
      for (std::uint64_t mask = 0; mask < n_masks; ++mask)
        for_each_submask(mask, [&](std::uint64_t sub) {
          std::uint64_t rest = mask & ~sub;
          for (int b = 0; b <= 1; ++b)
            for (int cb = 0; cb <= 1; ++cb)
              for (int s = 0; s <= kcap; ++s) {
                if (acc[b][rest][s] <= -kInf) continue;
                for (int cs = 0; s + cs <= kcap; ++cs) {
                  if (child[cb][sub][cs] <= -kInf) continue;
                  Weight val = acc[b][rest][s] + child[cb][sub][cs] + (cb ? lam : 0);
                  int nb = b | cb;
                  if (val > next[nb][mask][s + cs]) {
                    next[nb][mask][s + cs] = val;
                    step[nb][mask][s + cs] = {rest, sub, s, cs, b, cb};
                  }
                }
              }
        });
      layers.push_back(step);
      acc = std::move(next);
    }
    tab = acc;
  }
  const Table& root = table.at(inst.tree.root);
  std::uint64_t full = n_masks - 1;
  Weight best = -kInf;
  int best_b = 0, best_s = 0;
  for (int b = 0; b <= 1; ++b)
    for (int s = 0; s <= kcap; ++s)
      if (root[b][full][s] > best) {
        best = root[b][full][s];
        best_b = b;
        best_s = s;
      }
  PddResult res;
  if (best < inst.target) return res;
  std::vector<int> witness;
  std::function<void(int, int, std::uint64_t, int)> rec = [&](int v, int b, std::uint64_t m,
                                                              int s) {
    if (inst.tree.g.is_leaf(v)) {
      if (b) witness.push_back(v);
      return;
    }
    const auto& layers = steps.at(v);
    const auto& child_edges = inst.tree.g.out_edges(v);
    std::uint64_t mm = m;
    int ss = s, bb = b;
    for (int i = static_cast<int>(child_edges.size()) - 1; i >= 0; --i) {
      const Cell& cell = layers[i][bb][mm][ss];
      rec(inst.tree.g.edge(child_edges[i]).to, cell.child_b, cell.child_m, cell.child_s);
      mm = cell.prev_m;
      ss = cell.prev_s;
      bb = cell.prev_b;
    }
  };
  rec(inst.tree.root, best_b, full, best_s);
  std::sort(witness.begin(), witness.end());
  res.yes = true;
  res.witness = witness;
  return res;
}

// ---------------------------------------------------------------------------
// Co-cluster modulator.

namespace {

// One case of the co-cluster solver: the `forced` taxa survive, further
// survivors come from `universe` only; edges already paid by the forced set
// count zero; unfed forced members yield the hitting family.
std::optional<std::vector<int>> cocluster_case(const PddInstance& inst,
                                               const std::set<int>& forced,
                                               const std::set<int>& universe) {
  if (static_cast<int>(forced.size()) > inst.k) return std::nullopt;
  std::set<int> all_sources;
  for (int s : inst.web.sources(inst.tree.taxa())) all_sources.insert(s);
  std::vector<std::set<int>> family;
  for (int z : forced) {
    if (all_sources.count(z)) continue;
    bool fed = false;
    std::set<int> options;
    for (int p : inst.web.prey_of(z)) {
      if (forced.count(p)) fed = true;
      if (universe.count(p)) options.insert(p);
    }
    if (fed) continue;
    if (options.empty()) return std::nullopt;
    family.push_back(options);
  }
  Weight forced_pd = pd_value(inst.tree, {forced.begin(), forced.end()});
  if (universe.empty()) {
    if (!family.empty() || forced_pd < inst.target) return std::nullopt;
    return std::vector<int>(forced.begin(), forced.end());
  }
  // Tree restricted to the universe, with forced-covered edges zeroed.
  PhyloTree zeroed = inst.tree;
  zeroed.allow_zero_weights = true;
  if (!forced.empty()) {
    std::vector<char> mark =
        mark_ancestors(inst.tree.g, {forced.begin(), forced.end()});
    for (int e = 0; e < zeroed.g.num_edges(); ++e)
      if (mark[zeroed.g.edge(e).to]) zeroed.g.edge(e).weight = 0;
  }
  PddInstance shell;
  shell.tree = zeroed;
  shell.k = 0;
  shell.target = 0;
  PddInstance cut;
  try {
    cut = restrict_taxa(shell, universe);
  } catch (const input_error&) {
    return std::nullopt;
  }
  HittingSetTreeProfitInstance hs;
  hs.tree = cut.tree;
  hs.tree.allow_zero_weights = true;
  hs.k = inst.k - static_cast<int>(forced.size());
  hs.target = inst.target - forced_pd;
  for (const std::set<int>& f : family) {
    std::set<int> mapped;
    for (int x : f) {
      auto v = cut.tree.g.vertex_by_label(inst.tree.g.label(x));
      if (v) mapped.insert(*v);
    }
    if (mapped.empty()) return std::nullopt;
    hs.family.push_back(mapped);
  }
  PddResult r = hitting_set_tree_profits(hs);
  if (!r.yes) return std::nullopt;
  std::vector<int> witness = map_back_by_label(cut.tree.g, inst.tree.g, *r.witness);
  for (int x : forced) witness.push_back(x);
  std::sort(witness.begin(), witness.end());
  return witness;
}

}  // namespace

PddResult spdd_cocluster_solver(const PddInstance& inst, const std::vector<int>& modulator) {
  inst.validate();
  std::set<int> mod(modulator.begin(), modulator.end());
  std::vector<int> taxa = inst.tree.taxa();
  std::vector<int> rest;
  for (int x : taxa)
    if (!mod.count(x)) rest.push_back(x);
  // Independent sets = components of the complement of the underlying web.
  std::set<std::pair<int, int>> adj;
  for (auto [u, v] : inst.web.edges) {
    if (mod.count(u) || mod.count(v)) continue;
    adj.insert({std::min(u, v), std::max(u, v)});
  }
  std::map<int, int> iset;
  int n_sets = 0;
  for (int x : rest) {
    if (iset.count(x)) continue;
    std::queue<int> queue;
    queue.push(x);
    iset[x] = n_sets;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop();
      for (int y : rest) {
        if (iset.count(y)) continue;
        if (!adj.count({std::min(cur, y), std::max(cur, y)})) {
          iset[y] = n_sets;
          queue.push(y);
        }
      }
    }
    ++n_sets;
  }
  for (int a : rest)
    for (int b : rest) {
      if (a >= b) continue;
      bool edge = adj.count({a, b}) > 0;
      if (iset[a] == iset[b] && edge)
        throw input_error("cocluster solver: edge inside an independent set");
      if (iset[a] != iset[b] && !edge)
        throw input_error("cocluster solver: missing cross edge");
    }
  std::map<int, int> tpos;
  {
    std::vector<int> order = web_topological(inst);
    for (int i = 0; i < static_cast<int>(order.size()); ++i) tpos[order[i]] = i;
  }
  std::set<int> all_sources;
  for (int s : inst.web.sources(taxa)) all_sources.insert(s);

  PddResult out;
  int d = static_cast<int>(modulator.size());
  check_budget((std::uint64_t{1} << d) * taxa.size() * taxa.size(), "cocluster cases");
  auto try_case = [&](const std::set<int>& forced, const std::set<int>& universe) {
    if (out.yes) return;
    auto w = cocluster_case(inst, forced, universe);
    if (!w) return;
    if (static_cast<int>(w->size()) > inst.k || !viability_check(inst, *w) ||
        pd_value(inst.tree, *w) < inst.target)
      return;
    out.yes = true;
    out.witness = *w;
  };
  for (std::uint64_t zbits = 0; zbits < (std::uint64_t{1} << d) && !out.yes; ++zbits) {
    std::set<int> z;
    for (int i = 0; i < d; ++i)
      if (zbits & (std::uint64_t{1} << i)) z.insert(modulator[i]);
    if (viability_check(inst, {z.begin(), z.end()})) try_case(z, {});
    for (int xi : rest) {
      bool feedable = all_sources.count(xi) > 0;
      for (int p : inst.web.prey_of(xi))
        if (z.count(p)) feedable = true;
      if (!feedable) continue;
      int set_i = iset[xi];
      {
        // Survivors outside the modulator stay within x_i's independent set:
        // members cannot feed each other, so each must be a source or Z-fed.
        std::set<int> universe;
        for (int u : rest) {
          if (iset[u] != set_i || tpos[u] <= tpos[xi]) continue;
          bool ok = all_sources.count(u) > 0;
          for (int p : inst.web.prey_of(u))
            if (z.count(p)) ok = true;
          if (ok) universe.insert(u);
        }
        std::set<int> forced = z;
        forced.insert(xi);
        try_case(forced, universe);
      }
      for (int xj : rest) {
        if (iset[xj] == set_i || tpos[xj] <= tpos[xi]) continue;
        std::set<int> universe;
        for (int u : rest) {
          if (u == xi || u == xj) continue;
          if (tpos[u] > tpos[xi] && tpos[u] < tpos[xj] && iset[u] == set_i) {
            bool ok = all_sources.count(u) > 0;
            for (int p : inst.web.prey_of(u))
              if (z.count(p)) ok = true;
            if (ok) universe.insert(u);
          } else if (tpos[u] > tpos[xj]) {
            universe.insert(u);  // fed by x_i (other set) or x_j (same set)
          }
        }
        std::set<int> forced = z;
        forced.insert(xi);
        forced.insert(xj);
        try_case(forced, universe);
        if (out.yes) break;
      }
      if (out.yes) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimum-cost-flow special case.

namespace {

struct FlowEdge {
  int to;
  long long cap;
  long long cost;
  int rev;
  bool forward;
};

struct FlowGraph {
  std::vector<std::vector<FlowEdge>> adj;
  explicit FlowGraph(int n) : adj(n) {}
  void add(int u, int v, long long cap, long long cost) {
    adj[u].push_back({v, cap, cost, static_cast<int>(adj[v].size()), true});
    adj[v].push_back({u, 0, -cost, static_cast<int>(adj[u].size()) - 1, false});
  }
};

// Successive shortest paths with Johnson potentials; an initial Bellman-Ford
// pass absorbs the construction's negative costs.
std::optional<long long> min_cost_flow(FlowGraph& g, int s, int t, long long flow_value) {
  int n = static_cast<int>(g.adj.size());
  std::vector<long long> potential(n, 0);
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int u = 0; u < n; ++u)
      for (const FlowEdge& e : g.adj[u])
        if (e.cap > 0 && potential[u] + e.cost < potential[e.to]) {
          potential[e.to] = potential[u] + e.cost;
          changed = true;
        }
    if (!changed) break;
  }
  long long total_cost = 0, sent = 0;
  while (sent < flow_value) {
    std::vector<long long> dist(n, kInf);
    std::vector<int> prev_v(n, -1), prev_e(n, -1);
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [dd, u] = pq.top();
      pq.pop();
      if (dd > dist[u]) continue;
      for (int i = 0; i < static_cast<int>(g.adj[u].size()); ++i) {
        const FlowEdge& e = g.adj[u][i];
        if (e.cap <= 0) continue;
        long long nd = dd + e.cost + potential[u] - potential[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          prev_v[e.to] = u;
          prev_e[e.to] = i;
          pq.push({nd, e.to});
        }
      }
    }
    if (dist[t] >= kInf) return std::nullopt;
    for (int v = 0; v < n; ++v)
      if (dist[v] < kInf) potential[v] += dist[v];
    long long push = flow_value - sent;
    for (int v = t; v != s; v = prev_v[v])
      push = std::min(push, g.adj[prev_v[v]][prev_e[v]].cap);
    for (int v = t; v != s; v = prev_v[v]) {
      FlowEdge& e = g.adj[prev_v[v]][prev_e[v]];
      e.cap -= push;
      g.adj[v][e.rev].cap += push;
      total_cost += push * e.cost;
    }
    sent += push;
  }
  return total_cost;
}

}  // namespace

PddResult pdd_flow_solver(const PddInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  std::set<int> sources;
  for (int s : inst.web.sources(taxa)) sources.insert(s);
  std::map<int, int> degree;
  for (auto [u, v] : inst.web.edges) {
    ++degree[u];
    ++degree[v];
    if (degree[u] > 1 || degree[v] > 1)
      throw input_error("flow solver: food-web is not a union of isolated edges");
  }
  std::vector<char> mark_src = mark_ancestors(inst.tree.g, {sources.begin(), sources.end()});
  std::vector<int> nonsources;
  for (int x : taxa)
    if (!sources.count(x)) nonsources.push_back(x);
  std::vector<char> mark_non = nonsources.empty()
                                   ? std::vector<char>(inst.tree.g.num_vertices(), 0)
                                   : mark_ancestors(inst.tree.g, nonsources);
  for (int v = 0; v < inst.tree.g.num_vertices(); ++v)
    if (v != inst.tree.root && mark_src[v] && mark_non[v])
      throw input_error("flow solver: instance is not source-separating");

  PddResult out;
  if (inst.k <= 0) {
    out.yes = inst.target <= 0;
    if (out.yes) out.witness = std::vector<int>{};
    return out;
  }
  Weight best = -1;
  for (int kp = 0; 2 * kp <= inst.k; ++kp) {
    std::map<int, int> id1, id2;
    int next_id = 2;
    for (int v = 0; v < inst.tree.g.num_vertices(); ++v)
      if (mark_non[v] || v == inst.tree.root) id1[v] = next_id++;
    for (int v = 0; v < inst.tree.g.num_vertices(); ++v)
      if (mark_src[v] || v == inst.tree.root) id2[v] = next_id++;
    FlowGraph g(next_id);
    int s = 0, nu = 1;
    int rho1 = id1.at(inst.tree.root), t = id2.at(inst.tree.root);
    g.add(s, rho1, kp, 0);
    g.add(s, nu, inst.k - 2 * kp, 0);
    for (int x : taxa)
      if (sources.count(x)) g.add(nu, id2.at(x), inst.k, 0);
    for (const Edge& e : inst.tree.g.edges()) {
      if (id1.count(e.from) && id1.count(e.to) && mark_non[e.to]) {
        g.add(id1[e.from], id1[e.to], 1, -e.weight);
        if (inst.k > 1) g.add(id1[e.from], id1[e.to], inst.k - 1, 0);
      }
      if (id2.count(e.from) && id2.count(e.to) && mark_src[e.to]) {
        g.add(id2[e.to], id2[e.from], 1, -e.weight);
        if (inst.k > 1) g.add(id2[e.to], id2[e.from], inst.k - 1, 0);
      }
    }
    for (auto [u, v] : inst.web.edges) g.add(id1.at(v), id2.at(u), 1, 0);  // predator->prey

    auto cost = min_cost_flow(g, s, t, inst.k - kp);
    if (!cost) continue;
    std::vector<int> saved;
    for (int x : taxa) {
      int node = sources.count(x) ? id2.at(x) : id1.at(x);
      long long inflow = 0;
      for (const FlowEdge& e : g.adj[node])
        if (!e.forward) inflow += e.cap;  // pushed amount on the reverse arc
      if (inflow > 0) saved.push_back(x);
    }
    std::sort(saved.begin(), saved.end());
    if (static_cast<int>(saved.size()) > inst.k || !viability_check(inst, saved)) continue;
    Weight pd = pd_value(inst.tree, saved);
    if (pd > best) {
      best = pd;
      out.witness = saved;
    }
  }
  out.yes = best >= inst.target;
  if (!out.yes) out.witness.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Out-forest webs with parameter kbar.

PddResult pdd_2colored_outforest(const PddInstance& inst, const std::vector<char>& color) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  for (int x : taxa)
    if (inst.web.prey_of(x).size() > 1)
      throw input_error("outforest solver: a taxon has two prey");
  Weight dbar = pd_value(inst.tree, taxa) - inst.target;
  long long kbar = static_cast<long long>(taxa.size()) - inst.k;
  auto col = [&](int x) { return color[x] != 0; };

  std::vector<std::vector<int>> offspring(inst.tree.g.num_vertices());
  auto order = inst.tree.g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (inst.tree.g.is_leaf(v)) {
      offspring[v] = {v};
    } else {
      for (int e : inst.tree.g.out_edges(v))
        for (int x : offspring[inst.tree.g.edge(e).to]) offspring[v].push_back(x);
    }
  }
  auto all_zero = [&](int v) {
    for (int x : offspring[v])
      if (col(x)) return false;
    return true;
  };
  // Z-edges: maximal all-zero subtrees whose parent still holds a 1-colored taxon.
  std::vector<int> zheads;
  std::vector<long long> p_of, q_of;
  for (const Edge& e : inst.tree.g.edges()) {
    if (!all_zero(e.to)) continue;
    bool witness1 = false;
    for (int x : offspring[e.from])
      if (col(x)) witness1 = true;
    if (!witness1) continue;
    zheads.push_back(e.to);
    p_of.push_back(static_cast<long long>(offspring[e.to].size()));
    long long q = e.weight;
    std::vector<int> stack{e.to};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int ee : inst.tree.g.out_edges(v)) {
        q += inst.tree.g.edge(ee).weight;
        stack.push_back(inst.tree.g.edge(ee).to);
      }
    }
    q_of.push_back(q);
  }
  // Group the subtrees through the components of the 0-colored part of the
  // web (components may run through 0-colored taxa outside any subtree; such
  // components cannot die wholly, which blocks their groups).
  int zn = static_cast<int>(zheads.size());
  std::map<int, int> head_of_taxon;
  for (int i = 0; i < zn; ++i)
    for (int x : offspring[zheads[i]]) head_of_taxon[x] = i;
  std::map<int, int> uf;  // union-find over the 0-colored taxa
  std::function<int(int)> find_taxon = [&](int a) {
    if (uf[a] == a) return a;
    return uf[a] = find_taxon(uf[a]);
  };
  for (int x : taxa)
    if (!col(x)) uf[x] = x;
  for (auto [u, v] : inst.web.edges) {
    if (col(u) || col(v)) continue;
    int a = find_taxon(u), b = find_taxon(v);
    if (a != b) uf[a] = b;
  }
  std::vector<int> group(zn);
  for (int i = 0; i < zn; ++i) group[i] = i;
  std::function<int(int)> find = [&](int a) {
    return group[a] == a ? a : group[a] = find(group[a]);
  };
  std::map<int, int> comp_to_head;  // 0-component representative -> some zhead
  for (int i = 0; i < zn; ++i)
    for (int x : offspring[zheads[i]]) {
      int c = find_taxon(x);
      auto it = comp_to_head.find(c);
      if (it == comp_to_head.end()) {
        comp_to_head[c] = i;
      } else {
        int a = find(it->second), b = find(i);
        if (a != b) group[a] = b;
      }
    }
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < zn; ++i) comps[find(i)].push_back(i);
  std::map<int, std::set<int>> reach;
  std::function<const std::set<int>&(int)> web_reach = [&](int x) -> const std::set<int>& {
    auto it = reach.find(x);
    if (it != reach.end()) return it->second;
    std::set<int> r{x};
    for (int y : inst.web.predators_of(x)) {
      const std::set<int>& sub = web_reach(y);
      r.insert(sub.begin(), sub.end());
    }
    return reach[x] = std::move(r);
  };
  struct Item {
    long long weight, value;
    std::vector<int> heads;
  };
  std::vector<Item> items;
  for (auto& [key, heads] : comps) {
    bool blocked = false;
    long long w = 0, val = 0;
    std::set<int> covered, comp_reps;
    for (int h : heads) {
      w += q_of[h];
      val += p_of[h];
      for (int x : offspring[zheads[h]]) {
        covered.insert(x);
        comp_reps.insert(find_taxon(x));
        // A 1-colored taxon web-reachable from the dying set blocks the group.
        for (int y : web_reach(x))
          if (col(y)) blocked = true;
      }
    }
    // The touched 0-components must die wholly with the group.
    for (int x : taxa)
      if (!col(x) && comp_reps.count(find_taxon(x)) && !covered.count(x)) blocked = true;
    if (blocked) continue;
    items.push_back({w, val, heads});
  }
  PddResult res;
  if (dbar < 0) return res;
  check_budget(static_cast<std::uint64_t>(dbar + 1) * (items.size() + 1),
               "outforest knapsack");
  std::vector<long long> dp(dbar + 1, -1);
  std::vector<std::vector<int>> pick(dbar + 1);
  dp[0] = 0;
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    for (long long c = dbar; c >= items[i].weight; --c) {
      if (dp[c - items[i].weight] < 0) continue;
      long long cand = dp[c - items[i].weight] + items[i].value;
      if (cand > dp[c]) {
        dp[c] = cand;
        pick[c] = pick[c - items[i].weight];
        pick[c].push_back(i);
      }
    }
  }
  long long best = -1, best_c = 0;
  for (long long c = 0; c <= dbar; ++c)
    if (dp[c] > best) {
      best = dp[c];
      best_c = c;
    }
  if (best < kbar) return res;
  std::set<int> dead;
  for (int i : pick[best_c])
    for (int h : items[i].heads)
      for (int x : offspring[zheads[h]]) dead.insert(x);
  std::vector<int> witness;
  for (int x : taxa)
    if (!dead.count(x)) witness.push_back(x);
  if (static_cast<int>(witness.size()) > inst.k || !viability_check(inst, witness) ||
      pd_value(inst.tree, witness) < inst.target)
    return res;
  res.yes = true;
  res.witness = witness;
  return res;
}

PddResult pdd_kbar_outforest_solver(const PddInstance& inst, const FamilyOptions& fam) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  for (int x : taxa)
    if (inst.web.prey_of(x).size() > 1)
      throw input_error("outforest solver: a taxon has two prey");
  if (inst.target <= 0) {
    // The empty set wins outright; the colored machinery below needs at
    // least one surviving witness and cannot express this case.
    PddResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    return res;
  }
  int n = static_cast<int>(taxa.size());
  long long kbar = n - inst.k;
  if (kbar <= 0) {
    PddResult res;
    res.yes = pd_value(inst.tree, taxa) >= inst.target;  // X itself is viable
    if (res.yes) res.witness = taxa;
    return res;
  }
  int uk = static_cast<int>(std::min<long long>(3 * kbar, n));
  ColoringFamily family = universal_set(n, uk, fam);
  for (std::uint64_t a : family.subsets) {
    std::vector<char> color(inst.tree.g.num_vertices(), 0);
    for (int i = 0; i < n; ++i)
      if (a & (std::uint64_t{1} << i)) color[taxa[i]] = 1;
    PddResult r = pdd_2colored_outforest(inst, color);
    if (r.yes) return r;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Source-dominant webs.

PddResult pdd_source_dominant_solve(const PddInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  std::vector<int> sources = inst.web.sources(taxa);
  if (sources.size() != 1) throw input_error("source-dominant solver: several sources");
  int v0 = sources[0];
  for (int x : taxa) {
    if (x == v0) continue;
    bool fed = false;
    for (int p : inst.web.prey_of(x))
      if (p == v0) fed = true;
    if (!fed) throw input_error("source-dominant solver: source not adjacent to all");
  }
  PddResult res;
  if (inst.k <= 0) {
    res.yes = inst.target <= 0;
    if (res.yes) res.witness = std::vector<int>{};
    return res;
  }
  // Force the source, zero its root path, then Max-PD greedy for the rest.
  PhyloTree zeroed = inst.tree;
  zeroed.allow_zero_weights = true;
  for (int v = v0; v != zeroed.root;) {
    int e = zeroed.g.in_edges(v)[0];
    v = zeroed.g.edge(e).from;
    zeroed.g.edge(e).weight = 0;
  }
  MaxPdProfile prof = max_pd_greedy(zeroed, inst.k - 1);
  std::vector<int> witness{v0};
  for (int x : prof.order) {
    if (x == v0 || static_cast<int>(witness.size()) >= inst.k) continue;
    witness.push_back(x);
  }
  std::sort(witness.begin(), witness.end());
  witness.erase(std::unique(witness.begin(), witness.end()), witness.end());
  Weight value = pd_value(inst.tree, witness);
  res.yes = value >= inst.target;
  if (res.yes) res.witness = witness;
  return res;
}

}  // namespace pdark
