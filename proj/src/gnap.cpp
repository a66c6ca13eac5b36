#include "pdark/gnap.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace pdark {

void GnapInstance::validate() const {
  tree.validate();
  for (int x : tree.taxa()) {
    auto it = projects.find(x);
    if (it == projects.end() || it->second.empty())
      throw input_error("gnap: taxon " + tree.g.label(x) + " has no project list");
    const auto& list = it->second;
    for (size_t j = 0; j < list.size(); ++j) {
      if (list[j].cost < 0) throw input_error("gnap: negative cost");
      if (list[j].prob < Rational(0) || list[j].prob > Rational(1))
        throw input_error("gnap: probability outside [0,1]");
      if (j > 0 && (list[j].cost <= list[j - 1].cost || list[j].prob <= list[j - 1].prob))
        throw input_error("gnap: project list not strictly increasing");
    }
  }
  if (budget < 0) throw input_error("gnap: negative budget");
}

GnapInstance GnapInstance::normalized() const {
  GnapInstance out = *this;
  for (auto& [x, list] : out.projects) {
    std::sort(list.begin(), list.end(), [](const GnapProject& a, const GnapProject& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.prob > b.prob;
    });
    std::vector<GnapProject> kept;
    for (const GnapProject& p : list) {
      if (!kept.empty() && kept.back().cost == p.cost) continue;  // same cost, lower prob
      if (!kept.empty() && p.prob <= kept.back().prob) continue;  // pricier, not better
      kept.push_back(p);
    }
    list = std::move(kept);
  }
  return out;
}

int GnapInstance::var_c() const {
  std::set<long long> s;
  for (const auto& [x, list] : projects)
    for (const GnapProject& p : list) s.insert(p.cost);
  return static_cast<int>(s.size());
}

int GnapInstance::var_w() const {
  std::set<std::string> s;
  for (const auto& [x, list] : projects)
    for (const GnapProject& p : list) s.insert(p.prob.str());
  return static_cast<int>(s.size());
}

int GnapInstance::max_list() const {
  size_t m = 0;
  for (const auto& [x, list] : projects) m = std::max(m, list.size());
  return static_cast<int>(m);
}

Rational gnap_solution_value(const GnapInstance& inst, const std::map<int, int>& choice) {
  std::map<int, Rational> survival;
  for (const auto& [x, j] : choice) survival[x] = inst.projects.at(x)[j].prob;
  return expected_pd(inst.tree, survival);
}

GnapResult gnap_brute_force(const GnapInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  std::uint64_t states = 1;
  for (int x : taxa) {
    states *= inst.projects.at(x).size();
    check_budget(states, "gnap brute force");
  }
  GnapResult res;
  std::vector<int> cur(taxa.size(), 0);
  while (true) {
    long long cost = 0;
    std::map<int, int> choice;
    for (size_t i = 0; i < taxa.size(); ++i) {
      cost += inst.projects.at(taxa[i])[cur[i]].cost;
      choice[taxa[i]] = cur[i];
    }
    if (cost <= inst.budget) {
      Rational value = gnap_solution_value(inst, choice);
      if (!res.solution || value > res.solution->value)
        res.solution = GnapSolution{choice, cost, value};
    }
    int i = static_cast<int>(taxa.size()) - 1;
    while (i >= 0 && cur[i] + 1 == static_cast<int>(inst.projects.at(taxa[i]).size()))
      cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  res.yes = res.solution && res.solution->value >= inst.target;
  return res;
}

// ---------------------------------------------------------------------------
// Multiplicity-tuple DP (the two-table theorem), shared by the var_c and
// budget variants. Keys are vectors: either the multiplicities over the
// var_c-1 cheapest costs, or the exact amount spent; both followed by the
// multiplicities of the var_w-1 smallest survival probabilities.

namespace {

using Key = std::vector<int>;

struct Entry {
  Rational value;
  // Reconstruction: leaf entries store the chosen project; internal entries
  // store (key reached before this child, key used inside this child).
  int project = -1;
  Key prev, child_key;
};

using Layer = std::map<Key, Entry>;

struct GnapDpContext {
  const GnapInstance& inst;
  bool budget_mode;
  std::vector<long long> costs;  // distinct, ascending
  std::vector<Rational> probs;   // distinct, ascending
  std::vector<int> offspring_count;
  std::map<int, Layer> table;              // final layer per vertex
  std::map<int, std::vector<Layer>> steps;  // per child fold layer per vertex

  GnapDpContext(const GnapInstance& instance, bool budget)
      : inst(instance), budget_mode(budget) {
    std::set<long long> cs;
    std::vector<Rational> ps;
    for (const auto& [x, list] : inst.projects)
      for (const GnapProject& p : list) {
        cs.insert(p.cost);
        ps.push_back(p.prob);
      }
    costs.assign(cs.begin(), cs.end());
    std::sort(ps.begin(), ps.end());
    for (const Rational& p : ps)
      if (probs.empty() || probs.back() != p) probs.push_back(p);
    offspring_count.assign(inst.tree.g.num_vertices(), 0);
    auto order = inst.tree.g.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      if (inst.tree.g.is_leaf(v)) {
        offspring_count[v] = 1;
      } else {
        for (int e : inst.tree.g.out_edges(v))
          offspring_count[v] += offspring_count[inst.tree.g.edge(e).to];
      }
    }
  }

  int cost_dims() const { return budget_mode ? 1 : static_cast<int>(costs.size()) - 1; }
  int prob_dims() const { return static_cast<int>(probs.size()) - 1; }

  Key project_key(const GnapProject& p) const {
    Key k(cost_dims() + prob_dims(), 0);
    if (budget_mode) {
      k[0] = static_cast<int>(p.cost);
    } else {
      int pos = static_cast<int>(
          std::lower_bound(costs.begin(), costs.end(), p.cost) - costs.begin());
      if (pos < cost_dims()) ++k[pos];
    }
    int wpos = 0;
    while (probs[wpos] != p.prob) ++wpos;
    if (wpos < prob_dims()) ++k[cost_dims() + wpos];
    return k;
  }

  Key add(const Key& a, const Key& b) const {
    Key k = a;
    for (size_t i = 0; i < k.size(); ++i) k[i] += b[i];
    return k;
  }

  // Survival probability of a subtree with `count` offspring whose probability
  // multiplicities over the var_w-1 smallest values are recorded in `key`; the
  // remaining offspring carry the largest probability.
  Rational survival(const Key& key, int count) const {
    int rest = count;
    Rational prod(1);
    for (int j = 0; j < prob_dims(); ++j) {
      int mult = key[cost_dims() + j];
      rest -= mult;
      if (mult > 0) prod *= pow(Rational(1) - probs[j], mult);
    }
    if (rest > 0) prod *= pow(Rational(1) - probs.back(), rest);
    return Rational(1) - prod;
  }

  long long key_cost(const Key& key, int count) const {
    if (budget_mode) return key[0];
    long long total = 0;
    int rest = count;
    for (int j = 0; j < cost_dims(); ++j) {
      total += static_cast<long long>(key[j]) * costs[j];
      rest -= key[j];
    }
    total += static_cast<long long>(rest) * costs.back();
    return total;
  }

  void solve() {
    auto order = inst.tree.g.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      if (inst.tree.g.is_leaf(v)) {
        Layer layer;
        const auto& list = inst.projects.at(v);
        for (int j = 0; j < static_cast<int>(list.size()); ++j) {
          Key k = project_key(list[j]);
          auto found = layer.find(k);
          if (found == layer.end()) layer[k] = Entry{Rational(0), j, {}, {}};
        }
        table[v] = std::move(layer);
        continue;
      }
      Layer acc;
      acc[Key(cost_dims() + prob_dims(), 0)] = Entry{Rational(0), -1, {}, {}};
      std::vector<Layer>& step_layers = steps[v];
      for (int e : inst.tree.g.out_edges(v)) {
        int u = inst.tree.g.edge(e).to;
        Weight lam = inst.tree.g.edge(e).weight;
        Layer next;
        check_budget(acc.size() * table[u].size(), "gnap dp");
        for (const auto& [ka, ea] : acc) {
          for (const auto& [ku, eu] : table[u]) {
            Rational val =
                ea.value + eu.value + Rational(lam) * survival(ku, offspring_count[u]);
            Key k = add(ka, ku);
            if (budget_mode && k[0] > inst.budget) continue;
            auto found = next.find(k);
            if (found == next.end() || val > found->second.value)
              next[k] = Entry{val, -1, ka, ku};
          }
        }
        step_layers.push_back(next);
        acc = std::move(next);
      }
      table[v] = acc;
    }
  }

  void reconstruct(int v, const Key& key, std::map<int, int>& choice) const {
    if (inst.tree.g.is_leaf(v)) {
      choice[v] = table.at(v).at(key).project;
      return;
    }
    const auto& children = inst.tree.g.out_edges(v);
    const std::vector<Layer>& step_layers = steps.at(v);
    Key cur = key;
    for (int i = static_cast<int>(children.size()) - 1; i >= 0; --i) {
      const Entry& e = step_layers[i].at(cur);
      reconstruct(inst.tree.g.edge(children[i]).to, e.child_key, choice);
      cur = e.prev;
    }
  }
};

GnapResult run_tuple_dp(const GnapInstance& inst, bool budget_mode) {
  inst.validate();
  GnapDpContext ctx(inst, budget_mode);
  ctx.solve();
  const Layer& root_layer = ctx.table.at(inst.tree.root);
  GnapResult res;
  const Key* best_key = nullptr;
  Rational best_value;
  int n_taxa = ctx.offspring_count[inst.tree.root];
  for (const auto& [key, entry] : root_layer) {
    if (ctx.key_cost(key, n_taxa) > inst.budget) continue;
    if (!best_key || entry.value > best_value) {
      best_key = &key;
      best_value = entry.value;
    }
  }
  if (!best_key) return res;
  GnapSolution sol;
  ctx.reconstruct(inst.tree.root, *best_key, sol.choice);
  sol.cost = 0;
  for (const auto& [x, j] : sol.choice) sol.cost += inst.projects.at(x)[j].cost;
  sol.value = gnap_solution_value(inst, sol.choice);
  res.solution = std::move(sol);
  res.yes = res.solution->value >= inst.target;
  return res;
}

}  // namespace

GnapResult gnap_dp_varc_varw(const GnapInstance& inst) { return run_tuple_dp(inst, false); }

GnapResult gnap_dp_budget_varw(const GnapInstance& inst) { return run_tuple_dp(inst, true); }

// ---------------------------------------------------------------------------
// 0/1 survival probabilities: minimal cost per achieved diversity.

GnapResult nap01_dp(const GnapInstance& inst, Nap01Axis axis) {
  inst.validate();
  for (const auto& [x, list] : inst.projects)
    for (const GnapProject& p : list)
      if (!p.prob.is_zero() && p.prob != Rational(1))
        throw input_error("nap01: probability not in {0,1}");

  Weight total = inst.tree.g.total_weight();
  if (inst.target > Rational(total)) return {};  // diversity is integral here
  long long d_cap = std::max<long long>(0, inst.target.ceil().convert_to<long long>());
  if (axis == Nap01Axis::MaxWeight) {
    // D <= max_weight * (n-1) once the trivial no-case is excluded.
    check_budget(static_cast<std::uint64_t>(inst.tree.g.max_weight()) *
                     inst.tree.g.num_vertices(),
                 "nap01 dp (max weight axis)");
  }
  check_budget((static_cast<std::uint64_t>(d_cap) + 1) * (d_cap + 1) *
                   inst.tree.g.num_vertices(),
               "nap01 dp");

  constexpr long long kInf = 1LL << 62;
  int n = inst.tree.g.num_vertices();
  // Cheapest prob-1 (save) and prob-0 (drop) project per taxon.
  std::vector<long long> save_cost(n, kInf), drop_cost(n, kInf);
  std::vector<int> save_idx(n, -1), drop_idx(n, -1);
  for (const auto& [x, list] : inst.projects) {
    for (int j = 0; j < static_cast<int>(list.size()); ++j) {
      if (list[j].prob == Rational(1)) {
        if (list[j].cost < save_cost[x]) {
          save_cost[x] = list[j].cost;
          save_idx[x] = j;
        }
      } else if (list[j].cost < drop_cost[x]) {
        drop_cost[x] = list[j].cost;
        drop_idx[x] = j;
      }
    }
  }

  // f[v][b][d]: minimal cost inside the subtree of v so that the saved taxa
  // there have PD >= d within the subtree; b=1 forces at least one saved.
  struct Cell {
    long long cost = 1LL << 62;
    int child_d = 0, child_b = 0, prev_d = 0, prev_b = 0;
  };
  using Row = std::array<std::vector<Cell>, 2>;
  std::vector<Row> f(n);
  std::vector<std::vector<Row>> fsteps(n);
  auto order = inst.tree.g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    f[v][0].assign(d_cap + 1, Cell{});
    f[v][1].assign(d_cap + 1, Cell{});
    if (inst.tree.g.is_leaf(v)) {
      if (drop_idx[v] >= 0) f[v][0][0].cost = drop_cost[v];
      if (save_idx[v] >= 0) f[v][1][0].cost = save_cost[v];
      continue;
    }
    Row acc;
    acc[0].assign(d_cap + 1, Cell{});
    acc[1].assign(d_cap + 1, Cell{});
    acc[0][0].cost = 0;
    const auto& child_edges = inst.tree.g.out_edges(v);
    for (int ci = 0; ci < static_cast<int>(child_edges.size()); ++ci) {
      int u = inst.tree.g.edge(child_edges[ci]).to;
      Weight lam = inst.tree.g.edge(child_edges[ci]).weight;
      Row next;
      next[0].assign(d_cap + 1, Cell{});
      next[1].assign(d_cap + 1, Cell{});
      for (int b = 0; b <= 1; ++b)
        for (long long d = 0; d <= d_cap; ++d) {
          if (acc[b][d].cost >= kInf) continue;
          for (int cb = 0; cb <= 1; ++cb)
            for (long long cd = 0; cd <= d_cap; ++cd) {
              if (f[u][cb][cd].cost >= kInf) continue;
              long long nd = std::min<long long>(d_cap, d + (cb ? cd + lam : 0));
              long long cost = acc[b][d].cost + f[u][cb][cd].cost;
              Cell& cell = next[b | cb][nd];
              if (cost < cell.cost) {
                cell.cost = cost;
                cell.child_d = static_cast<int>(cd);
                cell.child_b = cb;
                cell.prev_d = static_cast<int>(d);
                cell.prev_b = b;
              }
              if (cb == 0) break;  // only cd = 0 matters when nothing is saved
            }
        }
      fsteps[v].push_back(next);
      acc = std::move(next);
    }
    f[v] = acc;
  }

  GnapResult res;
  auto root_cost = [&](int b) { return f[inst.tree.root][b][d_cap].cost; };
  long long best = std::min(root_cost(0), root_cost(1));
  if (best > inst.budget) return res;
  int root_b = root_cost(1) <= root_cost(0) ? 1 : 0;

  std::map<int, int> choice;
  struct Frame {
    int v, b;
    long long d;
  };
  std::vector<Frame> stack{{inst.tree.root, root_b, d_cap}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (inst.tree.g.is_leaf(fr.v)) {
      choice[fr.v] = fr.b ? save_idx[fr.v] : drop_idx[fr.v];
      continue;
    }
    const auto& child_edges = inst.tree.g.out_edges(fr.v);
    long long d = fr.d;
    int b = fr.b;
    for (int ci = static_cast<int>(child_edges.size()) - 1; ci >= 0; --ci) {
      const Cell& cell = fsteps[fr.v][ci][b][d];
      stack.push_back({inst.tree.g.edge(child_edges[ci]).to, cell.child_b, cell.child_d});
      d = cell.prev_d;
      b = cell.prev_b;
    }
  }
  GnapSolution sol;
  sol.choice = choice;
  sol.cost = 0;
  for (const auto& [x, j] : sol.choice) sol.cost += inst.projects.at(x)[j].cost;
  sol.value = gnap_solution_value(inst, sol.choice);
  res.solution = std::move(sol);
  res.yes = res.solution->cost <= inst.budget && res.solution->value >= inst.target;
  return res;
}

// ---------------------------------------------------------------------------
// Star trees: reduce to MCKP on the common probability denominator.

GnapResult gnap_star_solve(const GnapInstance& inst) {
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("gnap_star_solve: tree is not a star");
  BigInt denom = 1;
  for (const auto& [x, list] : inst.projects)
    for (const GnapProject& p : list) denom = lcm(denom, p.prob.den());
  denom = lcm(denom, inst.target.den());

  std::vector<int> taxa = inst.tree.taxa();
  MckpInstance mckp;
  for (int x : taxa) {
    Weight lam = inst.tree.g.edge(inst.tree.g.in_edges(x)[0]).weight;
    std::vector<MckpItem> cls;
    for (const GnapProject& p : inst.projects.at(x)) {
      BigInt value = p.prob.num() * (denom / p.prob.den()) * lam;
      if (value > BigInt(1LL << 60))
        throw capacity_error("gnap_star_solve: scaled value too large");
      cls.push_back({p.cost, value.convert_to<long long>()});
    }
    mckp.classes.push_back(cls);
  }
  mckp.budget = inst.budget;
  BigInt d_ceil = (inst.target * Rational(denom)).ceil();
  if (d_ceil < 0) d_ceil = 0;
  if (d_ceil > BigInt(1LL << 60)) throw capacity_error("gnap_star_solve: scaled target too large");
  mckp.target = d_ceil.convert_to<long long>();

  MckpResult mres = mckp_solve_budget_dp(mckp);
  GnapResult res;
  if (!mres.selection) return res;
  GnapSolution sol;
  for (size_t i = 0; i < taxa.size(); ++i) sol.choice[taxa[i]] = (*mres.selection)[i];
  sol.cost = 0;
  for (const auto& [x, j] : sol.choice) sol.cost += inst.projects.at(x)[j].cost;
  sol.value = gnap_solution_value(inst, sol.choice);
  res.solution = std::move(sol);
  res.yes = res.solution->value >= inst.target;
  return res;
}

// ---------------------------------------------------------------------------
// Unit costs, ultrametric height <= 2: saving the highest-probability taxa
// first is optimal within each child of the root (all leaf edges under one
// child share their weight), so a per-child count profile plus a budget DP
// over the children solves the instance exactly.

GnapResult unitcost_ultrametric_h2_greedy(const GnapInstance& inst) {
  inst.validate();
  if (!inst.tree.is_ultrametric() || inst.tree.height() > 2)
    throw input_error("unitcost greedy: tree not ultrametric of height <= 2");
  struct TaxonInfo {
    int free_idx = -1;
    int paid_idx = -1;
    Rational paid_prob;
  };
  std::map<int, TaxonInfo> info;
  for (int x : inst.tree.taxa()) {
    TaxonInfo ti;
    const auto& list = inst.projects.at(x);
    for (int j = 0; j < static_cast<int>(list.size()); ++j) {
      if (list[j].cost == 0 && list[j].prob.is_zero()) {
        ti.free_idx = j;
      } else if (list[j].cost == 1) {
        ti.paid_idx = j;
        ti.paid_prob = list[j].prob;
      } else {
        throw input_error("unitcost greedy: project list is not unit-cost");
      }
    }
    if (ti.free_idx < 0) throw input_error("unitcost greedy: missing (0,0) project");
    info[x] = ti;
  }

  struct Profile {
    std::vector<Rational> value;            // value[n]: save the top n taxa
    std::vector<std::vector<int>> saved;
  };
  std::vector<Profile> profiles;
  for (int e : inst.tree.g.out_edges(inst.tree.root)) {
    int child = inst.tree.g.edge(e).to;
    Weight top = inst.tree.g.edge(e).weight;
    std::vector<int> members;
    if (inst.tree.g.is_leaf(child)) {
      members = {child};
    } else {
      for (int ee : inst.tree.g.out_edges(child)) members.push_back(inst.tree.g.edge(ee).to);
    }
    std::stable_sort(members.begin(), members.end(), [&](int a, int b) {
      Rational pa = info[a].paid_idx >= 0 ? info[a].paid_prob : Rational(0);
      Rational pb = info[b].paid_idx >= 0 ? info[b].paid_prob : Rational(0);
      return pa > pb;
    });
    Profile prof;
    prof.value.push_back(Rational(0));
    prof.saved.push_back({});
    Rational not_top(1);
    Rational leaf_sum(0);
    std::vector<int> saved;
    for (int x : members) {
      if (info[x].paid_idx < 0) break;  // unsavable taxa contribute nothing
      saved.push_back(x);
      Rational w = info[x].paid_prob;
      not_top *= Rational(1) - w;
      if (!inst.tree.g.is_leaf(child)) {
        Weight lam = inst.tree.g.edge(inst.tree.g.in_edges(x)[0]).weight;
        leaf_sum += Rational(lam) * w;
      }
      prof.value.push_back(leaf_sum + Rational(top) * (Rational(1) - not_top));
      prof.saved.push_back(saved);
    }
    profiles.push_back(std::move(prof));
  }

  long long budget = std::min<long long>(inst.budget, inst.tree.taxa().size());
  std::vector<std::vector<Rational>> best(profiles.size() + 1);
  std::vector<std::vector<int>> pick(profiles.size() + 1);
  best[0].assign(budget + 1, Rational(0));
  pick[0].assign(budget + 1, 0);
  for (size_t i = 0; i < profiles.size(); ++i) {
    best[i + 1].assign(budget + 1, Rational(0));
    pick[i + 1].assign(budget + 1, 0);
    for (long long b = 0; b <= budget; ++b) {
      bool first = true;
      for (long long n = 0;
           n < static_cast<long long>(profiles[i].value.size()) && n <= b; ++n) {
        Rational cand = best[i][b - n] + profiles[i].value[n];
        if (first || cand > best[i + 1][b]) {
          best[i + 1][b] = cand;
          pick[i + 1][b] = static_cast<int>(n);
          first = false;
        }
      }
    }
  }
  GnapSolution sol;
  for (int x : inst.tree.taxa()) sol.choice[x] = info[x].free_idx;
  long long b = budget;
  for (int i = static_cast<int>(profiles.size()); i >= 1; --i) {
    int n = pick[i][b];
    for (int x : profiles[i - 1].saved[n]) sol.choice[x] = info[x].paid_idx;
    b -= n;
  }
  sol.cost = 0;
  for (const auto& [x, j] : sol.choice) sol.cost += inst.projects.at(x)[j].cost;
  sol.value = gnap_solution_value(inst, sol.choice);
  GnapResult res;
  res.solution = std::move(sol);
  res.yes = res.solution->value >= inst.target;
  return res;
}

// ---------------------------------------------------------------------------
// Penalty Sum -> unit-cost NAP generator.

GnapInstance gen_unitcost_nap_from_penalty_sum(const PenaltySumInstance& ps) {
  ps.validate();
  if (ps.q < 1) throw input_error("nap generator: Q must be positive");
  int m = static_cast<int>(ps.a.size());
  if (ps.k > m) throw input_error("nap generator: k exceeds the number of tuples");
  for (const Rational& a : ps.a)
    if (a <= Rational(0)) throw input_error("nap generator: a_i must be positive");

  // Smallest scale making every weight scale * a_i / (1 - b_i) integral.
  BigInt scale = 1;
  std::vector<Rational> leaf_weight;
  for (int i = 0; i < m; ++i) {
    Rational w = ps.a[i] / (Rational(1) - ps.b[i]);
    leaf_weight.push_back(w);
    scale = lcm(scale, w.den());
  }
  GnapInstance out;
  PhyloDag g;
  int root = g.add_vertex("");
  int mid = g.add_vertex("");
  BigInt top = scale * ps.q;
  if (top > BigInt(1LL << 60)) throw capacity_error("nap generator: scaled weight too large");
  g.add_edge(root, mid, top.convert_to<long long>());
  for (int i = 0; i < m; ++i) {
    int leaf = g.add_vertex("x" + std::to_string(i + 1));
    Rational w = leaf_weight[i] * Rational(scale);
    if (w.num() > BigInt(1LL << 60)) throw capacity_error("nap generator: scaled weight too large");
    g.add_edge(mid, leaf, w.num().convert_to<long long>());
    out.projects[leaf] = {{0, Rational(0)}, {1, Rational(1) - ps.b[i]}};
  }
  out.tree.g = std::move(g);
  out.tree.root = root;
  out.tree.allow_unary = true;  // the root has out-degree 1 by construction
  out.budget = ps.k;
  out.target = (ps.target + Rational(ps.q)) * Rational(scale);
  out.validate();
  return out;
}

}  // namespace pdark
