#include "pdark/timepd.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <set>
#include <thread>

namespace pdark {

void TimePdInstance::validate() const {
  tree.validate();
  for (int x : tree.taxa()) {
    auto l = rescue.find(x);
    auto e = extinction.find(x);
    if (l == rescue.end() || l->second < 1)
      throw input_error("timepd: missing or nonpositive rescue length");
    if (e == extinction.end() || e->second < 1)
      throw input_error("timepd: missing or nonpositive extinction time");
  }
  for (const Team& t : teams)
    if (t.start < 0 || t.start >= t.end)
      throw input_error("timepd: team with start >= end");
}

long long TimePdClasses::team_hours_until(const Team& t, long long ex) {
  return std::max<long long>(0, std::min(t.end, ex) - t.start);
}

TimePdClasses timepd_classes(const TimePdInstance& inst) {
  TimePdClasses c;
  std::set<long long> values;
  for (int x : inst.tree.taxa()) values.insert(inst.extinction.at(x));
  c.ex_values.assign(values.begin(), values.end());
  c.classes.resize(c.ex_values.size());
  for (int x : inst.tree.taxa()) {
    int j = static_cast<int>(std::lower_bound(c.ex_values.begin(), c.ex_values.end(),
                                              inst.extinction.at(x)) -
                             c.ex_values.begin());
    c.classes[j].push_back(x);
    c.class_of[x] = j;
  }
  long long cum = 0;
  for (size_t j = 0; j < c.ex_values.size(); ++j) {
    long long h = 0;
    for (const Team& t : inst.teams) h += TimePdClasses::team_hours_until(t, c.ex_values[j]);
    c.hours.push_back(h);
    for (int x : c.classes[j]) cum += inst.rescue.at(x);
    c.hbar.push_back(cum - h);
  }
  return c;
}

bool feasible_set_check(const TimePdInstance& inst, const std::vector<int>& taxa) {
  TimePdClasses c = timepd_classes(inst);
  std::vector<long long> load(c.var_ex(), 0);
  for (int x : taxa) load[c.class_of.at(x)] += inst.rescue.at(x);
  long long prefix = 0;
  for (int j = 0; j < c.var_ex(); ++j) {
    prefix += load[j];
    if (prefix > c.hours[j]) return false;
  }
  return true;
}

Schedule build_schedule(const TimePdInstance& inst, const std::vector<int>& taxa) {
  if (!feasible_set_check(inst, taxa))
    throw input_error("build_schedule: set is not feasible");
  // Slots in time order (then team order), taxa in extinction order.
  std::vector<std::pair<long long, int>> slots;
  long long horizon = 0;
  for (int x : taxa) horizon = std::max(horizon, inst.extinction.at(x));
  for (long long j = 1; j <= horizon; ++j)
    for (int i = 0; i < static_cast<int>(inst.teams.size()); ++i)
      if (inst.teams[i].start < j && j <= inst.teams[i].end) slots.push_back({j, i});
  std::vector<int> order = taxa;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    long long ea = inst.extinction.at(a), eb = inst.extinction.at(b);
    return ea != eb ? ea < eb : a < b;
  });
  Schedule sched;
  size_t cursor = 0;
  for (int x : order) {
    long long need = inst.rescue.at(x);
    while (need > 0) {
      auto [j, i] = slots.at(cursor++);
      sched.assignment[{i, j}] = x;
      --need;
    }
  }
  return sched;
}

bool verify_schedule(const TimePdInstance& inst, const std::vector<int>& taxa,
                     const Schedule& schedule, bool strict) {
  std::map<int, long long> done;
  std::map<int, std::set<int>> teams_used;
  for (const auto& [slot, x] : schedule.assignment) {
    auto [i, j] = slot;
    if (i < 0 || i >= static_cast<int>(inst.teams.size())) return false;
    if (j <= inst.teams[i].start || j > inst.teams[i].end) return false;
    if (j > inst.extinction.at(x)) return false;
    ++done[x];
    teams_used[x].insert(i);
  }
  for (int x : taxa) {
    if (done[x] < inst.rescue.at(x)) return false;
    if (strict && teams_used[x].size() != 1) return false;
  }
  return true;
}

std::optional<std::map<int, int>> strict_feasible_check(const TimePdInstance& inst,
                                                        const std::vector<int>& taxa) {
  if (taxa.empty()) return std::map<int, int>{};
  if (inst.teams.empty()) return std::nullopt;
  std::uint64_t states = 1;
  for (size_t i = 0; i < taxa.size(); ++i) {
    states *= inst.teams.size();
    check_budget(states, "strict assignment search");
  }
  // Assign taxa in extinction order; a team's load is feasible iff its
  // earliest-deadline packing fits, i.e. prefix loads stay within the team's
  // hours before each extinction time.
  std::vector<int> order = taxa;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    long long ea = inst.extinction.at(a), eb = inst.extinction.at(b);
    return ea != eb ? ea < eb : a < b;
  });
  int t = static_cast<int>(inst.teams.size());
  std::vector<long long> team_load(t, 0);
  std::map<int, int> assignment;
  std::function<bool(size_t)> rec = [&](size_t idx) {
    if (idx == order.size()) return true;
    int x = order[idx];
    for (int i = 0; i < t; ++i) {
      long long cap = TimePdClasses::team_hours_until(inst.teams[i], inst.extinction.at(x));
      if (team_load[i] + inst.rescue.at(x) > cap) continue;
      team_load[i] += inst.rescue.at(x);
      assignment[x] = i;
      if (rec(idx + 1)) return true;
      team_load[i] -= inst.rescue.at(x);
      assignment.erase(x);
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return assignment;
}

namespace {

// Strict schedule realizing a per-taxon team assignment (earliest-deadline
// order within each team, consecutive runs).
Schedule schedule_from_assignment(const TimePdInstance& inst,
                                  const std::map<int, int>& team_of) {
  Schedule sched;
  std::map<int, std::vector<int>> by_team;
  for (const auto& [x, i] : team_of) by_team[i].push_back(x);
  for (auto& [i, members] : by_team) {
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      long long ea = inst.extinction.at(a), eb = inst.extinction.at(b);
      return ea != eb ? ea < eb : a < b;
    });
    long long j = inst.teams[i].start;
    for (int x : members)
      for (long long step = 0; step < inst.rescue.at(x); ++step)
        sched.assignment[{i, ++j}] = x;
  }
  return sched;
}

std::vector<std::uint64_t> taxon_color_masks(const TimePdInstance& inst,
                                             const EdgeColorSets& coloring) {
  std::vector<std::uint64_t> mask(inst.tree.g.num_vertices(), 0);
  for (int v : inst.tree.g.topological_order())
    for (int e : inst.tree.g.out_edges(v))
      mask[inst.tree.g.edge(e).to] = mask[v] | coloring.edge_mask[e];
  return mask;
}

constexpr long long kInf = 1LL << 62;

}  // namespace

TimePdResult timepd_colored_dp(const TimePdInstance& inst, const EdgeColorSets& coloring) {
  inst.validate();
  if (coloring.num_colors > 62) throw capacity_error("colored dp: more than 62 colors");
  if (static_cast<int>(coloring.edge_mask.size()) != inst.tree.g.num_edges())
    throw input_error("colored dp: malformed coloring");
  TimePdClasses cls = timepd_classes(inst);
  int ve = cls.var_ex();
  std::vector<std::uint64_t> cmask = taxon_color_masks(inst, coloring);
  std::uint64_t full =
      coloring.num_colors == 0 ? 0 : (~std::uint64_t{0} >> (64 - coloring.num_colors));

  std::vector<int> taxa = inst.tree.taxa();
  std::size_t n_masks = std::size_t{1} << coloring.num_colors;
  check_budget(n_masks * (ve + 1), "colored dp table");
  // dp[C][p]: minimum ell(S) of a (C,p)-feasible set; arg stores the taxon
  // removed by the recurrence, for witness reconstruction.
  std::vector<std::vector<long long>> dp(n_masks, std::vector<long long>(ve + 1, kInf));
  std::vector<std::vector<int>> arg(n_masks, std::vector<int>(ve + 1, -1));
  for (int p = 0; p <= ve; ++p) dp[0][p] = 0;
  for (std::uint64_t cset = 1; cset < n_masks; ++cset) {
    for (int p = 1; p <= ve; ++p) {
      long long best = kInf;
      int best_x = -1;
      for (int x : taxa) {
        int q = cls.class_of.at(x) + 1;
        if (q > p) continue;  // x must lie in Z_p
        if ((cmask[x] & cset) == 0) continue;
        long long sub = dp[cset & ~cmask[x]][q];
        if (sub >= kInf) continue;
        long long cand = sub + inst.rescue.at(x);
        if (cand > cls.hours[q - 1]) continue;  // psi cap at H_{ex*(x)}
        if (cand < best) {
          best = cand;
          best_x = x;
        }
      }
      dp[cset][p] = best;
      arg[cset][p] = best_x;
    }
  }
  TimePdResult res;
  if (ve == 0 || dp[full][ve] >= kInf) {
    if (full == 0) {
      res.yes = true;
      res.witness = std::vector<int>{};
      res.schedule = Schedule{};
    }
    return res;
  }
  std::vector<int> witness;
  std::uint64_t cset = full;
  int p = ve;
  while (cset != 0) {
    int x = arg[cset][p];
    witness.push_back(x);
    cset &= ~cmask[x];
    p = cls.class_of.at(x) + 1;
  }
  std::sort(witness.begin(), witness.end());
  res.yes = true;
  res.witness = witness;
  res.schedule = build_schedule(inst, witness);
  return res;
}

TimePdResult timepd_strict_colored_dp(const TimePdInstance& inst,
                                      const EdgeColorSets& coloring) {
  inst.validate();
  if (coloring.num_colors > 30) throw capacity_error("strict colored dp: too many colors");
  TimePdClasses cls = timepd_classes(inst);
  int ve = cls.var_ex();
  int nt = static_cast<int>(inst.teams.size());
  std::vector<std::uint64_t> cmask = taxon_color_masks(inst, coloring);
  std::uint64_t full =
      coloring.num_colors == 0 ? 0 : (~std::uint64_t{0} >> (64 - coloring.num_colors));
  std::size_t n_masks = std::size_t{1} << coloring.num_colors;
  check_budget(n_masks * std::max(1, nt) * (ve + 1), "strict colored dp table");
  TimePdResult res;
  if (full == 0) {
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    res.team_of = std::map<int, int>{};
    return res;
  }
  if (nt == 0 || ve == 0) return res;

  // dp0[i][C][p]: minimum ell(S) of a (C,p,t_i)-feasible set.
  struct Arg {
    int taxon = -1, q = -1;
  };
  std::vector<std::vector<std::vector<long long>>> dp0(
      nt,
      std::vector<std::vector<long long>>(n_masks, std::vector<long long>(ve + 1, kInf)));
  std::vector<std::vector<std::vector<Arg>>> arg0(
      nt, std::vector<std::vector<Arg>>(n_masks, std::vector<Arg>(ve + 1)));
  for (int i = 0; i < nt; ++i) {
    std::vector<long long> team_h(ve + 1, 0);
    for (int q = 1; q <= ve; ++q)
      team_h[q] = TimePdClasses::team_hours_until(inst.teams[i], cls.ex_values[q - 1]);
    for (int p = 0; p <= ve; ++p) dp0[i][0][p] = 0;
    for (std::uint64_t cset = 1; cset < n_masks; ++cset) {
      for (int p = 1; p <= ve; ++p) {
        long long best = kInf;
        Arg best_arg;
        for (int x : cls.classes[p - 1]) {  // x in Y_p
          if ((cmask[x] & cset) == 0) continue;
          for (int q = 1; q <= p; ++q) {
            long long sub = dp0[i][cset & ~cmask[x]][q];
            if (sub >= kInf) continue;
            long long cand = sub + inst.rescue.at(x);
            if (cand > team_h[p]) continue;  // per-team cap at the new class
            if (cand < best) {
              best = cand;
              best_arg = {x, q};
            }
          }
        }
        dp0[i][cset][p] = best;
        arg0[i][cset][p] = best_arg;
      }
    }
  }
  // dp1[i][C]: a class index realizing a t_i-compatible cover of C, or -1.
  std::vector<std::vector<int>> dp1(nt, std::vector<int>(n_masks, -1));
  for (int i = 0; i < nt; ++i)
    for (std::uint64_t cset = 1; cset < n_masks; ++cset) {
      long long best = kInf;
      for (int p = 1; p <= ve; ++p)
        if (dp0[i][cset][p] < best) {
          best = dp0[i][cset][p];
          dp1[i][cset] = p;
        }
    }
  // dp2[i][C]: teams 0..i jointly cover C; split C' goes to the earlier teams.
  std::vector<std::vector<char>> dp2(nt, std::vector<char>(n_masks, 0));
  std::vector<std::vector<std::uint64_t>> split(nt, std::vector<std::uint64_t>(n_masks, 0));
  for (std::uint64_t cset = 0; cset < n_masks; ++cset)
    dp2[0][cset] = cset == 0 || dp1[0][cset] >= 0;
  for (int i = 1; i < nt; ++i) {
    for (std::uint64_t cset = 0; cset < n_masks; ++cset) {
      for_each_submask(cset, [&](std::uint64_t prev) {
        if (dp2[i][cset]) return;
        std::uint64_t mine = cset & ~prev;
        bool ok_mine = mine == 0 || dp1[i][mine] >= 0;
        if (dp2[i - 1][prev] && ok_mine) {
          dp2[i][cset] = 1;
          split[i][cset] = prev;
        }
      });
    }
  }
  if (!dp2[nt - 1][full]) return res;
  // Per-team witness sets; duplicates keep their first team.
  std::map<int, int> team_of;
  std::uint64_t cset = full;
  for (int i = nt - 1; i >= 0; --i) {
    std::uint64_t mine = i == 0 ? cset : cset & ~split[i][cset];
    if (mine != 0) {
      int p = dp1[i][mine];
      std::uint64_t c = mine;
      while (c != 0) {
        const Arg& a = arg0[i][c][p];
        if (!team_of.count(a.taxon)) team_of[a.taxon] = i;
        c &= ~cmask[a.taxon];
        p = a.q;
      }
    }
    if (i > 0) cset = split[i][cset];
  }
  std::vector<int> witness;
  for (const auto& [x, i] : team_of) witness.push_back(x);
  std::sort(witness.begin(), witness.end());
  Schedule sched = schedule_from_assignment(inst, team_of);
  if (!verify_schedule(inst, witness, sched, /*strict=*/true))
    throw validation_error("strict colored dp: reconstructed schedule invalid");
  res.yes = true;
  res.witness = witness;
  res.schedule = sched;
  res.team_of = team_of;
  return res;
}

// ---------------------------------------------------------------------------
// Color-coding wrapper for the parameter D.

namespace {

// Runs `trial` on [0, count); returns the smallest accepting index. The result
// is independent of the thread count (the disjunction picks the minimum).
int parallel_first_accept(int count, int threads, const std::function<bool(int)>& trial) {
  if (threads <= 1) {
    for (int i = 0; i < count; ++i)
      if (trial(i)) return i;
    return -1;
  }
  std::atomic<int> best(count);
  std::atomic<int> next(0);
  auto worker = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= count || i >= best.load()) break;
      if (trial(i)) {
        int cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return best.load() == count ? -1 : best.load();
}

EdgeColorSets coloring_from_function(const TimePdInstance& inst, const std::vector<int>& fn,
                                     int num_colors) {
  EdgeColorSets cs;
  cs.num_colors = num_colors;
  cs.edge_mask.resize(inst.tree.g.num_edges(), 0);
  std::size_t pos = 0;
  for (int e = 0; e < inst.tree.g.num_edges(); ++e) {
    std::uint64_t mask = 0;
    for (Weight t = 0; t < inst.tree.g.edge(e).weight; ++t)
      mask |= std::uint64_t{1} << fn[pos++];
    cs.edge_mask[e] = mask;
  }
  return cs;
}

bool singleton_schedulable(const TimePdInstance& inst, int x) {
  if (!inst.strict) return feasible_set_check(inst, {x});
  return strict_feasible_check(inst, {x}).has_value();
}

}  // namespace

TimePdResult timepd_solve_D(const TimePdInstance& inst, const FamilyOptions& fam,
                            int threads) {
  inst.validate();
  Weight d = inst.target;
  if (d <= 0) {
    TimePdResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    if (inst.strict) res.team_of = std::map<int, int>{};
    return res;
  }
  if (d > 62) throw capacity_error("timepd_solve_D: D > 62");
  // Heavy edge: a schedulable offspring of an edge of weight >= D is a witness.
  for (const Edge& e : inst.tree.g.edges()) {
    if (e.weight < d) continue;
    std::vector<char> below(inst.tree.g.num_vertices(), 0);
    std::vector<int> stack{e.to};
    below[e.to] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int ee : inst.tree.g.out_edges(v)) {
        below[inst.tree.g.edge(ee).to] = 1;
        stack.push_back(inst.tree.g.edge(ee).to);
      }
    }
    for (int x : inst.tree.taxa()) {
      if (!below[x] || !singleton_schedulable(inst, x)) continue;
      TimePdResult res;
      res.yes = true;
      res.witness = std::vector<int>{x};
      if (inst.strict) {
        res.team_of = strict_feasible_check(inst, {x});
        res.schedule = schedule_from_assignment(inst, *res.team_of);
      } else {
        res.schedule = build_schedule(inst, {x});
      }
      return res;
    }
  }
  long long w_total = inst.tree.g.total_weight();
  if (w_total < d) return {};
  ColoringFamily family =
      perfect_hash_family(static_cast<int>(w_total), static_cast<int>(d), fam);
  std::vector<TimePdResult> results(family.functions.size());
  auto trial = [&](int i) {
    EdgeColorSets cs =
        coloring_from_function(inst, family.functions[i], static_cast<int>(d));
    TimePdResult r =
        inst.strict ? timepd_strict_colored_dp(inst, cs) : timepd_colored_dp(inst, cs);
    if (r.yes) results[i] = std::move(r);
    return results[i].yes;
  };
  int hit = parallel_first_accept(static_cast<int>(family.functions.size()), threads, trial);
  if (hit < 0) return {};
  TimePdResult res = std::move(results[hit]);
  if (pd_value(inst.tree, *res.witness) < d)
    throw validation_error("timepd_solve_D: witness under target");
  return res;
}

// ---------------------------------------------------------------------------
// Acceptable loss Dbar: anchored taxa sets over extinction-Dbar-colored trees.

namespace {

// Removes taxa no schedule can save: their exclusive edges are lost in any
// outcome, so dropping them (and cascading empty internals) adjusts the total
// weight, hence Dbar, to the semantically right value.
TimePdInstance prune_unschedulable(const TimePdInstance& inst) {
  std::set<int> drop;
  for (int x : inst.tree.taxa())
    if (!singleton_schedulable(inst, x)) drop.insert(x);
  if (drop.empty()) return inst;
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
  TimePdInstance out;
  out.teams = inst.teams;
  out.target = inst.target;
  out.strict = inst.strict;
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
  for (int x : inst.tree.taxa()) {
    if (drop.count(x)) continue;
    out.rescue[remap[x]] = inst.rescue.at(x);
    out.extinction[remap[x]] = inst.extinction.at(x);
  }
  return out;
}

struct DbarTuple {
  int taxon = -1;
  int cls = 0;  // 1-based extinction class
  long long ell = 0;
  std::uint64_t path_mask = 0;
  int sibling_color = 0;
};

// Algorithm (Dbar) on one extinction-Dbar-coloring; returns the dying taxa
// X(A) on acceptance.
std::optional<std::vector<int>> dbar_colored_run(const TimePdInstance& inst,
                                                 const TimePdClasses& cls, Weight dbar,
                                                 const std::vector<int>& key_color,
                                                 const std::vector<std::uint64_t>& extra_mask) {
  const PhyloDag& g = inst.tree.g;
  int colors = static_cast<int>(2 * dbar);
  // Usable light edges: the assigned colors must be pairwise distinct,
  // i.e. |c(e)| = lambda(e); collisions make the edge unusable (treated like
  // a heavy edge), which keeps acceptance sound for every family member.
  std::vector<std::uint64_t> cmask(g.num_edges(), 0);
  std::vector<char> usable(g.num_edges(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.edge(e).weight > dbar) continue;
    std::uint64_t mask = extra_mask[e] | (std::uint64_t{1} << key_color[e]);
    if (static_cast<Weight>(__builtin_popcountll(mask)) != g.edge(e).weight) continue;
    cmask[e] = mask;
    usable[e] = 1;
  }
  // Tuples (x, v, e): v strict ancestor of x, e an outgoing edge of v avoiding x.
  std::vector<DbarTuple> tuples;
  for (int x : inst.tree.taxa()) {
    int v = x;
    std::uint64_t pm = 0;
    bool ok = true;
    while (true) {
      const auto& in = g.in_edges(v);
      if (in.empty()) break;
      int pe = in[0];
      if (!usable[pe] || (pm & cmask[pe]) != 0) ok = false;
      pm |= cmask[pe];
      int child_on_path = v;
      v = g.edge(pe).from;
      if (!ok) break;
      for (int se : g.out_edges(v)) {
        if (g.edge(se).to == child_on_path) continue;
        DbarTuple t;
        t.taxon = x;
        t.cls = cls.class_of.at(x) + 1;
        t.ell = inst.rescue.at(x);
        t.path_mask = pm;
        t.sibling_color = key_color[se];
        tuples.push_back(t);
      }
    }
  }
  // Cell state: per color 0 = unused, 1 = in C1, 2 = in C2 (radix 3).
  std::size_t n_states = 1;
  for (int i = 0; i < colors; ++i) n_states *= 3;
  check_budget(n_states * (cls.var_ex() + 1), "dbar dp table");
  int ve = cls.var_ex();
  std::vector<std::vector<long long>> dp(n_states, std::vector<long long>(ve + 1, -kInf));
  std::vector<std::vector<int>> arg(n_states, std::vector<int>(ve + 1, -1));

  std::vector<std::size_t> pow3(colors + 1, 1);
  for (int i = 0; i < colors; ++i) pow3[i + 1] = pow3[i] * 3;
  auto decode = [&](std::size_t state, std::uint64_t& c1, std::uint64_t& c2) {
    c1 = c2 = 0;
    for (int i = 0; i < colors; ++i) {
      int digit = static_cast<int>(state / pow3[i] % 3);
      if (digit == 1) c1 |= std::uint64_t{1} << i;
      if (digit == 2) c2 |= std::uint64_t{1} << i;
    }
  };
  auto encode = [&](std::uint64_t c1, std::uint64_t c2) {
    std::size_t state = 0;
    for (int i = 0; i < colors; ++i) {
      if (c1 & (std::uint64_t{1} << i)) state += pow3[i];
      if (c2 & (std::uint64_t{1} << i)) state += 2 * pow3[i];
    }
    return state;
  };
  auto base_value = [&](int q) -> long long {
    for (int p = 1; p < q; ++p)
      if (cls.hbar[p - 1] > 0) return -kInf;
    return 0;
  };
  // Compute cells with |C1| ascending: the recurrence strictly shrinks C1.
  std::vector<std::size_t> order(n_states);
  for (std::size_t s = 0; s < n_states; ++s) order[s] = s;
  std::vector<int> c1_size(n_states, 0);
  for (std::size_t s = 0; s < n_states; ++s) {
    std::uint64_t c1, c2;
    decode(s, c1, c2);
    c1_size[s] = __builtin_popcountll(c1);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return c1_size[a] < c1_size[b]; });

  for (std::size_t s : order) {
    std::uint64_t c1, c2;
    decode(s, c1, c2);
    for (int q = 1; q <= ve; ++q) {
      long long best = -kInf;
      int best_t = -1;
      bool grounding = true;
      for (int ti = 0; ti < static_cast<int>(tuples.size()); ++ti) {
        const DbarTuple& t = tuples[ti];
        if (t.cls > q) continue;
        if ((t.path_mask & ~c1) != 0) continue;
        if (!(c2 & (std::uint64_t{1} << t.sibling_color))) continue;
        grounding = false;
        std::uint64_t nc1 = c1 & ~t.path_mask;
        std::uint64_t nc2 = (c2 | t.path_mask) & ~(std::uint64_t{1} << t.sibling_color);
        long long sub = dp[encode(nc1, nc2)][t.cls];
        if (sub <= -kInf) continue;
        long long cand = sub + t.ell;
        long long window = -kInf;
        for (int p = t.cls; p < q; ++p) window = std::max(window, cls.hbar[p - 1]);
        if (t.cls < q && cand < window) continue;
        if (cand > best) {
          best = cand;
          best_t = ti;
        }
      }
      if (grounding) {
        dp[s][q] = base_value(q);
      } else {
        dp[s][q] = best;
        arg[s][q] = best_t;
      }
    }
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    if (c1_size[s] > dbar) continue;
    if (dp[s][ve] < cls.hbar[ve - 1]) continue;
    std::vector<int> dying;
    std::size_t cur = s;
    int q = ve;
    while (arg[cur][q] >= 0) {
      const DbarTuple& t = tuples[arg[cur][q]];
      dying.push_back(t.taxon);
      std::uint64_t c1, c2;
      decode(cur, c1, c2);
      cur = encode(c1 & ~t.path_mask,
                   (c2 | t.path_mask) & ~(std::uint64_t{1} << t.sibling_color));
      q = t.cls;
    }
    return dying;
  }
  return std::nullopt;
}

}  // namespace

TimePdResult timepd_solve_Dbar(const TimePdInstance& inst, const FamilyOptions& fam,
                               int threads) {
  inst.validate();
  if (inst.strict) throw input_error("timepd_solve_Dbar: non-strict only");
  if (inst.target <= 0) {
    TimePdResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    return res;
  }
  bool any_schedulable = false;
  for (int x : inst.tree.taxa())
    if (singleton_schedulable(inst, x)) any_schedulable = true;
  if (!any_schedulable) return {};  // target is positive here
  TimePdInstance pruned = prune_unschedulable(inst);
  Weight dbar = pruned.tree.g.total_weight() - pruned.target;
  if (dbar < 0) return {};
  auto finish = [&](const std::vector<int>& saved_in_pruned,
                    const TimePdInstance& src) -> TimePdResult {
    std::vector<std::string> labels;
    for (int x : saved_in_pruned) labels.push_back(src.tree.g.label(x));
    TaxonSet saved = taxa_from_labels(inst.tree.g, labels);
    TimePdResult res;
    if (!feasible_set_check(inst, saved) || pd_value(inst.tree, saved) < inst.target)
      throw validation_error("timepd_solve_Dbar: invalid witness");
    res.yes = true;
    res.witness = saved;
    res.schedule = build_schedule(inst, saved);
    return res;
  };
  if (dbar == 0) {
    std::vector<int> all = pruned.tree.taxa();
    if (feasible_set_check(pruned, all) && pd_value(pruned.tree, all) >= pruned.target)
      return finish(all, pruned);
    return {};
  }
  if (2 * dbar > 20) throw capacity_error("timepd_solve_Dbar: Dbar too large");
  TimePdClasses cls = timepd_classes(pruned);
  if (cls.var_ex() == 0) return {};

  const PhyloDag& g = pruned.tree.g;
  int m = g.num_edges();
  // Color universe: a key index per edge plus lambda(e)-1 extras per light edge.
  long long w_m = m;
  std::vector<long long> extra_start(m, 0);
  for (int e = 0; e < m; ++e) {
    extra_start[e] = w_m;
    if (g.edge(e).weight <= dbar) w_m += g.edge(e).weight - 1;
  }
  // If the color universe is smaller than 2*Dbar, an injective coloring of
  // the whole universe already covers every relevant subset.
  int fam_k = static_cast<int>(std::min<long long>(2 * dbar, w_m));
  ColoringFamily family = perfect_hash_family(static_cast<int>(w_m), fam_k, fam);
  std::vector<std::optional<std::vector<int>>> results(family.functions.size());
  auto trial = [&](int i) {
    const std::vector<int>& fn = family.functions[i];
    std::vector<int> key(m);
    std::vector<std::uint64_t> extra(m, 0);
    for (int e = 0; e < m; ++e) {
      key[e] = fn[e];
      if (g.edge(e).weight <= dbar)
        for (Weight t = 0; t + 1 < g.edge(e).weight; ++t)
          extra[e] |= std::uint64_t{1} << fn[extra_start[e] + t];
    }
    results[i] = dbar_colored_run(pruned, cls, dbar, key, extra);
    return results[i].has_value();
  };
  int hit = parallel_first_accept(static_cast<int>(family.functions.size()), threads, trial);
  if (hit < 0) return {};
  std::set<int> dying(results[hit]->begin(), results[hit]->end());
  std::vector<int> saved;
  for (int x : pruned.tree.taxa())
    if (!dying.count(x)) saved.push_back(x);
  return finish(saved, pruned);
}

// ---------------------------------------------------------------------------
// Resource-vector DPs (person-hours strategies and the var_l x var_ex matrix).

namespace {

// Dense tree DP over mixed-radix allocation vectors. Coordinates split among
// children additively (set_mode: by disjoint union). States carry a boolean
// "some taxon saved below"; edge weights count when the flag is set.
struct VecTreeDp {
  const TimePdInstance& inst;
  std::vector<int> radix;
  bool set_mode = false;
  std::function<bool(int, const std::vector<int>&)> leaf_ok;

  std::size_t n_states = 1;
  std::vector<std::size_t> stride;

  struct Cell {
    long long value = -kInf;
    std::size_t child_state = 0, prev_state = 0;
    int child_b = 0, prev_b = 0;
  };
  using Table = std::array<std::vector<Cell>, 2>;
  std::map<int, Table> table;
  std::map<int, std::vector<Table>> steps;

  VecTreeDp(const TimePdInstance& instance, std::vector<int> r, bool sets,
            std::function<bool(int, const std::vector<int>&)> ok)
      : inst(instance), radix(std::move(r)), set_mode(sets), leaf_ok(std::move(ok)) {
    for (int c : radix) {
      stride.push_back(n_states);
      n_states *= c;
      check_budget(n_states, "vector dp states");
    }
    check_budget(n_states * n_states / 2 + 1, "vector dp splits");
  }

  std::vector<int> decode(std::size_t s) const {
    std::vector<int> v(radix.size());
    for (size_t i = 0; i < radix.size(); ++i)
      v[i] = static_cast<int>(s / stride[i] % radix[i]);
    return v;
  }

  template <typename F>
  void for_each_part(std::size_t state, F&& f) const {
    std::vector<int> v = decode(state);
    std::function<void(size_t, std::size_t)> rec = [&](size_t i, std::size_t acc) {
      if (i == radix.size()) {
        f(acc);
        return;
      }
      if (set_mode) {
        std::uint64_t mask = static_cast<std::uint64_t>(v[i]);
        std::uint64_t sub = mask;
        while (true) {
          rec(i + 1, acc + static_cast<std::size_t>(sub) * stride[i]);
          if (sub == 0) break;
          sub = (sub - 1) & mask;
        }
      } else {
        for (int take = 0; take <= v[i]; ++take)
          rec(i + 1, acc + static_cast<std::size_t>(take) * stride[i]);
      }
    };
    rec(0, 0);
  }

  std::size_t complement(std::size_t state, std::size_t part) const {
    if (!set_mode) return state - part;
    std::size_t rest = 0;
    for (size_t i = 0; i < radix.size(); ++i) {
      auto all = static_cast<std::uint64_t>(state / stride[i] % radix[i]);
      auto mine = static_cast<std::uint64_t>(part / stride[i] % radix[i]);
      rest += static_cast<std::size_t>(all & ~mine) * stride[i];
    }
    return rest;
  }

  void solve() {
    auto order = inst.tree.g.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      Table& tab = table[v];
      tab[0].assign(n_states, Cell{});
      tab[1].assign(n_states, Cell{});
      if (inst.tree.g.is_leaf(v)) {
        for (std::size_t s = 0; s < n_states; ++s) {
          tab[0][s].value = 0;
          if (leaf_ok(v, decode(s))) tab[1][s].value = 0;
        }
        continue;
      }
      Table acc;
      acc[0].assign(n_states, Cell{});
      acc[1].assign(n_states, Cell{});
      for (std::size_t s = 0; s < n_states; ++s) acc[0][s].value = 0;
      for (int e : inst.tree.g.out_edges(v)) {
        int u = inst.tree.g.edge(e).to;
        Weight lam = inst.tree.g.edge(e).weight;
        Table next;
        next[0].assign(n_states, Cell{});
        next[1].assign(n_states, Cell{});
        const Table& child = table[u];
        for (std::size_t s = 0; s < n_states; ++s) {
          for_each_part(s, [&](std::size_t mine) {
            std::size_t rest = complement(s, mine);
            for (int b = 0; b <= 1; ++b) {
              if (acc[b][rest].value <= -kInf) continue;
              for (int cb = 0; cb <= 1; ++cb) {
                if (child[cb][mine].value <= -kInf) continue;
                long long val = acc[b][rest].value + child[cb][mine].value + (cb ? lam : 0);
                Cell& cell = next[b | cb][s];
                if (val > cell.value) {
                  cell.value = val;
                  cell.child_state = mine;
                  cell.child_b = cb;
                  cell.prev_state = rest;
                  cell.prev_b = b;
                }
              }
            }
          });
        }
        steps[v].push_back(next);
        acc = std::move(next);
      }
      tab = acc;
    }
  }

  void reconstruct(int v, std::size_t state, int b, std::vector<int>& saved) const {
    if (inst.tree.g.is_leaf(v)) {
      if (b) saved.push_back(v);
      return;
    }
    const auto& child_edges = inst.tree.g.out_edges(v);
    const std::vector<Table>& layers = steps.at(v);
    std::size_t s = state;
    int bb = b;
    for (int i = static_cast<int>(child_edges.size()) - 1; i >= 0; --i) {
      const Cell& cell = layers[i][bb][s];
      reconstruct(inst.tree.g.edge(child_edges[i]).to, cell.child_state, cell.child_b,
                  saved);
      s = cell.prev_state;
      bb = cell.prev_b;
    }
  }
};

TimePdResult finish_nonstrict(const TimePdInstance& inst, std::vector<int> saved) {
  std::sort(saved.begin(), saved.end());
  TimePdResult res;
  if (!feasible_set_check(inst, saved) || pd_value(inst.tree, saved) < inst.target)
    throw validation_error("timepd vector dp: invalid witness");
  res.yes = true;
  res.witness = saved;
  res.schedule = build_schedule(inst, saved);
  return res;
}

}  // namespace

TimePdResult timepd_dp_person_hours(const TimePdInstance& inst, HoursStrategy strategy) {
  inst.validate();
  TimePdClasses cls = timepd_classes(inst);
  int nt = static_cast<int>(inst.teams.size());
  long long max_ex = cls.max_ex();
  if (inst.target <= 0) {
    TimePdResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    if (inst.strict && strategy == HoursStrategy::TeamSetsPerSlot)
      res.team_of = std::map<int, int>{};
    return res;
  }
  if (cls.var_ex() == 0) return {};

  if (strategy == HoursStrategy::TeamsPerSlot) {
    std::vector<int> radix(max_ex, nt + 1);
    VecTreeDp dp(inst, radix, false, [&](int x, const std::vector<int>& a) {
      long long hours = 0;
      for (long long j = 0; j < std::min(max_ex, inst.extinction.at(x)); ++j) hours += a[j];
      return hours >= inst.rescue.at(x);
    });
    dp.solve();
    std::size_t root_state = 0;
    for (long long j = 1; j <= max_ex; ++j) {
      int avail = 0;
      for (const Team& t : inst.teams)
        if (t.start < j && j <= t.end) ++avail;
      root_state += static_cast<std::size_t>(avail) * dp.stride[j - 1];
    }
    const auto& tab = dp.table.at(inst.tree.root);
    int b = tab[1][root_state].value >= tab[0][root_state].value ? 1 : 0;
    if (tab[b][root_state].value < inst.target) return {};
    std::vector<int> saved;
    dp.reconstruct(inst.tree.root, root_state, b, saved);
    return finish_nonstrict(inst, saved);
  }

  if (strategy == HoursStrategy::HoursPerDeadline) {
    std::vector<int> radix;
    for (long long h : cls.hours) radix.push_back(static_cast<int>(h) + 1);
    VecTreeDp dp(inst, radix, false, [&](int x, const std::vector<int>& a) {
      for (int j = cls.class_of.at(x); j < cls.var_ex(); ++j)
        if (a[j] < inst.rescue.at(x)) return false;
      return true;
    });
    dp.solve();
    std::size_t root_state = 0;
    for (int j = 0; j < cls.var_ex(); ++j)
      root_state += static_cast<std::size_t>(cls.hours[j]) * dp.stride[j];
    const auto& tab = dp.table.at(inst.tree.root);
    int b = tab[1][root_state].value >= tab[0][root_state].value ? 1 : 0;
    if (tab[b][root_state].value < inst.target) return {};
    std::vector<int> saved;
    dp.reconstruct(inst.tree.root, root_state, b, saved);
    return finish_nonstrict(inst, saved);
  }

  // TeamSetsPerSlot: strict schedules; coordinates are team subsets per slot.
  if (nt > 10) throw capacity_error("teamsets dp: too many teams");
  std::vector<int> radix(max_ex, 1 << nt);
  VecTreeDp dp(inst, radix, true, [&](int x, const std::vector<int>& a) {
    long long horizon = std::min(max_ex, inst.extinction.at(x));
    for (int t = 0; t < nt; ++t) {
      long long run = 0;
      for (long long j = 1; j <= horizon; ++j) {
        bool avail =
            ((a[j - 1] >> t) & 1) && inst.teams[t].start < j && j <= inst.teams[t].end;
        run = avail ? run + 1 : 0;
        if (run >= inst.rescue.at(x)) return true;
      }
    }
    return false;
  });
  dp.solve();
  std::size_t root_state = 0;
  for (long long j = 1; j <= max_ex; ++j) {
    int mask = 0;
    for (int t = 0; t < nt; ++t)
      if (inst.teams[t].start < j && j <= inst.teams[t].end) mask |= 1 << t;
    root_state += static_cast<std::size_t>(mask) * dp.stride[j - 1];
  }
  const auto& tab = dp.table.at(inst.tree.root);
  int b = tab[1][root_state].value >= tab[0][root_state].value ? 1 : 0;
  if (tab[b][root_state].value < inst.target) return {};
  std::vector<int> saved;
  dp.reconstruct(inst.tree.root, root_state, b, saved);
  std::sort(saved.begin(), saved.end());
  auto team_of = strict_feasible_check(inst, saved);
  if (!team_of || pd_value(inst.tree, saved) < inst.target)
    throw validation_error("teamsets dp: invalid witness");
  TimePdResult res;
  res.yes = true;
  res.witness = saved;
  res.team_of = team_of;
  res.schedule = schedule_from_assignment(inst, *team_of);
  return res;
}

TimePdResult timepd_xp_varl_varr(const TimePdInstance& inst) {
  inst.validate();
  TimePdClasses cls = timepd_classes(inst);
  if (inst.target <= 0) {
    TimePdResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    return res;
  }
  if (cls.var_ex() == 0) return {};
  std::set<long long> lens;
  for (int x : inst.tree.taxa()) lens.insert(inst.rescue.at(x));
  std::vector<long long> ell_values(lens.begin(), lens.end());
  int vl = static_cast<int>(ell_values.size());
  int ve = cls.var_ex();
  int n_taxa = static_cast<int>(inst.tree.taxa().size());
  std::vector<int> radix(vl * ve, n_taxa + 1);
  auto ell_class = [&](int x) {
    return static_cast<int>(
        std::lower_bound(ell_values.begin(), ell_values.end(), inst.rescue.at(x)) -
        ell_values.begin());
  };
  VecTreeDp dp(inst, radix, false, [&](int x, const std::vector<int>& a) {
    return a[ell_class(x) * ve + cls.class_of.at(x)] >= 1;
  });
  dp.solve();
  const auto& tab = dp.table.at(inst.tree.root);
  long long best = -kInf;
  std::size_t best_state = 0;
  int best_b = 0;
  for (std::size_t s = 0; s < dp.n_states; ++s) {
    std::vector<int> a = dp.decode(s);
    // Feasibility per the matrix condition: (ell row) * A * prefix <= H.
    bool ok = true;
    for (int j = 0; j < ve && ok; ++j) {
      long long used = 0;
      for (int i = 0; i < vl; ++i)
        for (int j2 = 0; j2 <= j; ++j2) used += ell_values[i] * a[i * ve + j2];
      if (used > cls.hours[j]) ok = false;
    }
    if (!ok) continue;
    for (int b = 0; b <= 1; ++b)
      if (tab[b][s].value > best) {
        best = tab[b][s].value;
        best_state = s;
        best_b = b;
      }
  }
  if (best < inst.target) return {};
  std::vector<int> saved;
  dp.reconstruct(inst.tree.root, best_state, best_b, saved);
  return finish_nonstrict(inst, saved);
}

// ---------------------------------------------------------------------------
// Star trees: per-class knapsack + prefix combination.

TimePdResult timepd_star_solve(const TimePdInstance& inst, StarAxis axis) {
  inst.validate();
  if (!inst.tree.is_star()) throw input_error("timepd_star_solve: tree is not a star");
  TimePdClasses cls = timepd_classes(inst);
  if (inst.target <= 0) {
    TimePdResult res;
    res.yes = true;
    res.witness = std::vector<int>{};
    res.schedule = Schedule{};
    return res;
  }
  if (cls.var_ex() == 0) return {};
  Weight total = inst.tree.g.total_weight();
  switch (axis) {
    case StarAxis::MaxEx:
      check_budget(static_cast<std::uint64_t>(cls.max_ex()) * cls.max_ex() + 1,
                   "star dp (max_ex)");
      break;
    case StarAxis::Diversity:
      check_budget(static_cast<std::uint64_t>(inst.target) * inst.target + 1, "star dp (D)");
      break;
    case StarAxis::DiversityLoss: {
      long long loss = std::max<Weight>(0, total - inst.target);
      check_budget(static_cast<std::uint64_t>(loss) * loss + 1, "star dp (Dbar)");
      break;
    }
    case StarAxis::MaxLambda:
      if (total < inst.target) return {};
      check_budget(static_cast<std::uint64_t>(inst.tree.g.max_weight()) *
                       inst.tree.g.max_weight() * inst.tree.g.num_vertices() *
                       inst.tree.g.num_vertices(),
                   "star dp (max lambda)");
      break;
  }
  auto leaf_weight = [&](int x) {
    return inst.tree.g.edge(inst.tree.g.in_edges(x)[0]).weight;
  };

  // dp[c]: max diversity of a prefix-feasible set with total rescue length c.
  long long cap = cls.hours.back();
  std::vector<long long> dp(std::max<long long>(cap, 0) + 1, -kInf);
  std::vector<std::vector<int>> chosen(dp.size());
  dp[0] = 0;
  for (int j = 0; j < cls.var_ex(); ++j) {
    std::vector<long long> ndp = dp;
    std::vector<std::vector<int>> nchosen = chosen;
    for (int x : cls.classes[j]) {
      long long ell = inst.rescue.at(x);
      for (long long c = cls.hours[j]; c >= ell; --c) {
        if (ndp[c - ell] <= -kInf) continue;
        long long cand = ndp[c - ell] + leaf_weight(x);
        if (cand > ndp[c]) {
          ndp[c] = cand;
          nchosen[c] = nchosen[c - ell];
          nchosen[c].push_back(x);
        }
      }
    }
    for (long long c = cls.hours[j] + 1; c <= cap; ++c) {
      ndp[c] = -kInf;
      nchosen[c].clear();
    }
    dp = std::move(ndp);
    chosen = std::move(nchosen);
  }
  long long best = -kInf, best_c = 0;
  for (long long c = 0; c <= cap; ++c)
    if (dp[c] > best) {
      best = dp[c];
      best_c = c;
    }
  if (best < inst.target) return {};
  return finish_nonstrict(inst, chosen[best_c]);
}

// ---------------------------------------------------------------------------
// Brute force.

TimePdResult timepd_brute_force(const TimePdInstance& inst) {
  inst.validate();
  std::vector<int> taxa = inst.tree.taxa();
  int n = static_cast<int>(taxa.size());
  if (n > 62) throw capacity_error("timepd brute force: too many taxa");
  check_budget(std::uint64_t{1} << n, "timepd brute force");
  TimePdResult res;
  Weight best = -1;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << n); ++sub) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (sub & (std::uint64_t{1} << i)) s.push_back(taxa[i]);
    Weight pd = pd_value(inst.tree, s);
    if (pd <= best) continue;
    if (inst.strict) {
      auto team_of = strict_feasible_check(inst, s);
      if (!team_of) continue;
      best = pd;
      res.witness = s;
      res.team_of = team_of;
      res.schedule = schedule_from_assignment(inst, *team_of);
    } else {
      if (!feasible_set_check(inst, s)) continue;
      best = pd;
      res.witness = s;
      res.schedule = build_schedule(inst, s);
    }
  }
  res.yes = best >= inst.target;
  if (!res.yes) {
    res.witness.reset();
    res.schedule.reset();
    res.team_of.reset();
  }
  return res;
}

}  // namespace pdark
