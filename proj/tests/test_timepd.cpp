#include "doctest.h"

#include <set>

#include "build_helpers.hpp"
#include "pdark/timepd.hpp"
#include "pdark/util.hpp"

using namespace pdark;
using namespace pdark::testutil;

namespace {

TimePdInstance star_instance(const std::vector<Weight>& weights,
                             const std::vector<long long>& ell,
                             const std::vector<long long>& ex,
                             const std::vector<Team>& teams, Weight d, bool strict = false) {
  TimePdInstance inst;
  std::vector<EdgeSpec> edges;
  for (size_t i = 0; i < weights.size(); ++i)
    edges.push_back({"r", "x" + std::to_string(i + 1), weights[i]});
  inst.tree = tree_from_edges(edges);
  for (size_t i = 0; i < weights.size(); ++i) {
    int x = *inst.tree.g.vertex_by_label("x" + std::to_string(i + 1));
    inst.rescue[x] = ell[i];
    inst.extinction[x] = ex[i];
  }
  inst.teams = teams;
  inst.target = d;
  inst.strict = strict;
  return inst;
}

// First schedule figure: teams (0,18),(2,13),(3,15),(4,18) — the printed
// H-table (19,39,55) and the 18-column grid pin e_1 = 18.
TimePdInstance schedule_example_a(Weight d, bool strict = false) {
  return star_instance({1, 1, 1, 1, 1, 1}, {10, 9, 13, 8, 7, 5}, {7, 7, 18, 12, 12, 18},
                       {{0, 18}, {2, 13}, {3, 15}, {4, 18}}, d, strict);
}

// Second schedule figure: teams (2,15),(0,15),(0,11).
TimePdInstance schedule_example_b(Weight d, bool strict = false) {
  return star_instance({1, 1, 1, 1, 1, 1}, {8, 4, 7, 8, 6, 6}, {4, 7, 7, 15, 15, 15},
                       {{2, 15}, {0, 15}, {0, 11}}, d, strict);
}

TimePdInstance random_instance(Rng& rng, int max_taxa, int max_weight, int max_ell,
                               int max_ex, int max_teams, bool strict) {
  int n = rand_int(rng, 1, max_taxa);
  std::vector<EdgeSpec> edges;
  bool nest = n >= 3 && (rng() & 1);
  for (int i = 0; i < n; ++i) {
    std::string parent = nest && i < 2 ? "m" : "r";
    edges.push_back(
        {parent, "x" + std::to_string(i), static_cast<Weight>(rand_int(rng, 1, max_weight))});
  }
  if (nest) edges.push_back({"r", "m", static_cast<Weight>(rand_int(rng, 1, max_weight))});
  if (n == 1) edges.push_back({"r", "pad", 1});
  TimePdInstance inst;
  inst.tree = tree_from_edges(edges);
  for (int x : inst.tree.taxa()) {
    inst.rescue[x] = rand_int(rng, 1, max_ell);
    inst.extinction[x] = rand_int(rng, 1, max_ex);
  }
  int nt = rand_int(rng, 1, max_teams);
  for (int i = 0; i < nt; ++i) {
    long long s = rand_int(rng, 0, max_ex - 1);
    long long e = rand_int(rng, static_cast<int>(s) + 1, max_ex + 2);
    inst.teams.push_back({s, e});
  }
  inst.target = rand_int(rng, 0, 3 * max_weight);
  inst.strict = strict;
  return inst;
}

void check_witness(const TimePdInstance& inst, const TimePdResult& res) {
  if (!res.yes) return;
  REQUIRE(res.witness.has_value());
  CHECK(pd_value(inst.tree, *res.witness) >= inst.target);
  if (inst.strict) {
    REQUIRE(res.team_of.has_value());
    REQUIRE(res.schedule.has_value());
    CHECK(verify_schedule(inst, *res.witness, *res.schedule, true));
  } else {
    CHECK(feasible_set_check(inst, *res.witness));
    REQUIRE(res.schedule.has_value());
    CHECK(verify_schedule(inst, *res.witness, *res.schedule, false));
  }
}

}  // namespace

TEST_CASE("first schedule figure: H-vector and feasibility") {
  TimePdInstance inst = schedule_example_a(0);
  TimePdClasses cls = timepd_classes(inst);
  REQUIRE(cls.var_ex() == 3);
  CHECK(cls.ex_values == std::vector<long long>{7, 12, 18});
  CHECK(cls.hours == std::vector<long long>{19, 39, 55});
  CHECK(feasible_set_check(inst, inst.tree.taxa()));  // 19<=19, 34<=39, 52<=55
  Schedule sched = build_schedule(inst, inst.tree.taxa());
  CHECK(verify_schedule(inst, inst.tree.taxa(), sched, false));
}

TEST_CASE("second schedule figure: H-vector and tight feasibility") {
  TimePdInstance inst = schedule_example_b(0);
  TimePdClasses cls = timepd_classes(inst);
  REQUIRE(cls.var_ex() == 3);
  CHECK(cls.ex_values == std::vector<long long>{4, 7, 15});
  CHECK(cls.hours[0] == 10);
  CHECK(cls.hours[1] == 19);
  // The printed H_3 = 49 exceeds the teams' total capacity of 39; the
  // definitional value is 39 and the full taxa set packs it exactly.
  CHECK(cls.hours[2] == 39);
  CHECK(feasible_set_check(inst, inst.tree.taxa()));
  CHECK(cls.hbar[2] == 0);
}

TEST_CASE("empty set is always feasible and schedulable") {
  TimePdInstance inst = schedule_example_a(0);
  CHECK(feasible_set_check(inst, {}));
  Schedule empty = build_schedule(inst, {});
  CHECK(empty.assignment.empty());
  CHECK(strict_feasible_check(inst, {}).has_value());
}

TEST_CASE("one team makes strict and non-strict coincide") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    TimePdInstance inst = random_instance(rng, 5, 4, 4, 6, 1, false);
    std::vector<int> taxa = inst.tree.taxa();
    for (std::uint64_t sub = 0; sub < (1u << taxa.size()); ++sub) {
      std::vector<int> s;
      for (size_t i = 0; i < taxa.size(); ++i)
        if (sub & (1u << i)) s.push_back(taxa[i]);
      CHECK(feasible_set_check(inst, s) == strict_feasible_check(inst, s).has_value());
    }
  }
}

TEST_CASE("strict assignment search matches exhaustive team enumeration") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    TimePdInstance inst = random_instance(rng, 4, 3, 3, 5, 3, true);
    std::vector<int> taxa = inst.tree.taxa();
    int nt = static_cast<int>(inst.teams.size());
    for (std::uint64_t sub = 0; sub < (1u << taxa.size()); ++sub) {
      std::vector<int> s;
      for (size_t i = 0; i < taxa.size(); ++i)
        if (sub & (1u << i)) s.push_back(taxa[i]);
      // Oracle: try every |T|^|S| assignment; per team, earliest-deadline
      // prefix loads must fit into the team's hours.
      bool oracle = s.empty();
      if (!oracle) {
        std::vector<int> assign(s.size(), 0);
        while (true) {
          bool ok = true;
          for (int i = 0; i < nt && ok; ++i) {
            std::vector<std::pair<long long, long long>> jobs;
            for (size_t q = 0; q < s.size(); ++q)
              if (assign[q] == i)
                jobs.push_back({inst.extinction.at(s[q]), inst.rescue.at(s[q])});
            std::sort(jobs.begin(), jobs.end());
            long long load = 0;
            for (auto [ex, ell] : jobs) {
              load += ell;
              if (load > TimePdClasses::team_hours_until(inst.teams[i], ex)) ok = false;
            }
          }
          if (ok) {
            oracle = true;
            break;
          }
          int i = static_cast<int>(s.size()) - 1;
          while (i >= 0 && assign[i] + 1 == nt) assign[i--] = 0;
          if (i < 0) break;
          ++assign[i];
        }
      }
      CHECK(strict_feasible_check(inst, s).has_value() == oracle);
    }
  }
}

TEST_CASE("colored dp corner cases") {
  // D=1, one taxon coverable within H_1.
  TimePdInstance inst = star_instance({1, 1}, {1, 1}, {2, 2}, {{0, 2}}, 1);
  EdgeColorSets cs;
  cs.num_colors = 1;
  cs.edge_mask = {1, 1};
  TimePdResult res = timepd_colored_dp(inst, cs);
  CHECK(res.yes);
  check_witness(inst, res);
  // A coloring missing the color from every taxon says no.
  cs.edge_mask = {0, 0};
  CHECK_FALSE(timepd_colored_dp(inst, cs).yes);
}

TEST_CASE("solve_D with exact families equals brute force (non-strict)") {
  Rng rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    TimePdInstance inst = random_instance(rng, 5, 2, 3, 5, 2, false);
    inst.target = rand_int(rng, 0, 6);
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult cc = timepd_solve_D(inst);
    CHECK(cc.yes == bf.yes);
    check_witness(inst, cc);
  }
}

TEST_CASE("solve_D with exact families equals brute force (strict)") {
  Rng rng(9);
  for (int trial = 0; trial < 70; ++trial) {
    TimePdInstance inst = random_instance(rng, 4, 2, 3, 5, 2, true);
    inst.target = rand_int(rng, 0, 5);
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult cc = timepd_solve_D(inst);
    CHECK(cc.yes == bf.yes);
    check_witness(inst, cc);
  }
}

TEST_CASE("solve_D trivial pre-checks") {
  TimePdInstance heavy = star_instance({9, 1}, {1, 1}, {3, 3}, {{0, 3}}, 8);
  TimePdResult res = timepd_solve_D(heavy);
  CHECK(res.yes);  // a single edge of weight >= D wins without coloring
  check_witness(heavy, res);
  TimePdInstance tight = star_instance({2, 2}, {5, 5}, {2, 2}, {{0, 2}}, 2);
  CHECK_FALSE(timepd_solve_D(tight).yes);  // no taxon is schedulable at all
}

TEST_CASE("solve_Dbar equals brute force on random instances") {
  Rng rng(11);
  int ran = 0;
  for (int trial = 0; trial < 250 && ran < 110; ++trial) {
    TimePdInstance inst = random_instance(rng, 5, 2, 3, 5, 2, false);
    Weight total = inst.tree.g.total_weight();
    Weight dbar = rand_int(rng, 0, 3);
    inst.target = total - dbar;
    if (inst.target <= 0) continue;
    ++ran;
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult cc = timepd_solve_Dbar(inst);
    CHECK(cc.yes == bf.yes);
    check_witness(inst, cc);
  }
  CHECK(ran >= 100);
}

TEST_CASE("solve_Dbar with zero loss reduces to saving everything") {
  TimePdInstance inst = schedule_example_a(0);
  inst.target = inst.tree.g.total_weight();
  bool all_ok = feasible_set_check(inst, inst.tree.taxa());
  TimePdResult res = timepd_solve_Dbar(inst);
  CHECK(res.yes == all_ok);
}

TEST_CASE("person-hours strategies agree with brute force") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    TimePdInstance inst = random_instance(rng, 4, 3, 3, 4, 2, false);
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult a = timepd_dp_person_hours(inst, HoursStrategy::TeamsPerSlot);
    TimePdResult b = timepd_dp_person_hours(inst, HoursStrategy::HoursPerDeadline);
    CHECK(a.yes == bf.yes);
    CHECK(b.yes == bf.yes);
    check_witness(inst, a);
    check_witness(inst, b);
  }
  // Zero-team instances only reach D <= 0.
  TimePdInstance none = star_instance({2, 2}, {1, 1}, {2, 2}, {}, 1);
  CHECK_FALSE(timepd_dp_person_hours(none, HoursStrategy::TeamsPerSlot).yes);
  none.target = 0;
  CHECK(timepd_dp_person_hours(none, HoursStrategy::TeamsPerSlot).yes);
}

TEST_CASE("team-sets strategy decides the strict problem") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    TimePdInstance inst = random_instance(rng, 4, 3, 3, 4, 2, true);
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult c = timepd_dp_person_hours(inst, HoursStrategy::TeamSetsPerSlot);
    CHECK(c.yes == bf.yes);
    check_witness(inst, c);
  }
}

TEST_CASE("var_l x var_ex matrix dp agrees with brute force") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    TimePdInstance inst = random_instance(rng, 5, 3, 2, 4, 2, false);
    std::vector<long long> ells{1, rand_int(rng, 2, 3)};
    std::vector<long long> exs{rand_int(rng, 1, 2), rand_int(rng, 3, 4)};
    for (int x : inst.tree.taxa()) {
      inst.rescue[x] = ells[rng() % 2];
      inst.extinction[x] = exs[rng() % 2];
    }
    TimePdResult bf = timepd_brute_force(inst);
    TimePdResult m = timepd_xp_varl_varr(inst);
    CHECK(m.yes == bf.yes);
    check_witness(inst, m);
  }
  TimePdInstance single = star_instance({3, 2}, {2, 2}, {4, 4}, {{0, 4}}, 5);
  CHECK(timepd_xp_varl_varr(single).yes == timepd_brute_force(single).yes);
}

TEST_CASE("star solver agrees with brute force on all axes") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    TimePdInstance inst = random_instance(rng, 5, 3, 3, 5, 2, false);
    if (!inst.tree.is_star()) continue;
    TimePdResult bf = timepd_brute_force(inst);
    for (StarAxis axis : {StarAxis::MaxEx, StarAxis::Diversity, StarAxis::DiversityLoss,
                          StarAxis::MaxLambda}) {
      TimePdResult st = timepd_star_solve(inst, axis);
      CHECK(st.yes == bf.yes);
      check_witness(inst, st);
    }
  }
  // The first schedule figure is a star; D = 6 means saving all six taxa.
  TimePdInstance fig = schedule_example_a(6);
  CHECK(timepd_star_solve(fig).yes == timepd_brute_force(fig).yes);
  fig.target = 0;
  CHECK(timepd_star_solve(fig).yes);
}

TEST_CASE("hbar identity holds on parsed instances") {
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    TimePdInstance inst = random_instance(rng, 6, 3, 3, 6, 3, false);
    TimePdClasses cls = timepd_classes(inst);
    long long cum = 0;
    for (int j = 0; j < cls.var_ex(); ++j) {
      for (int x : cls.classes[j]) cum += inst.rescue.at(x);
      CHECK(cls.hbar[j] == cum - cls.hours[j]);
    }
  }
}
