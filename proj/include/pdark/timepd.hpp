#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pdark/colorcoding.hpp"
#include "pdark/phylo.hpp"

namespace pdark {

// Time-PD / s-Time-PD: save a set of taxa with a (strict) valid team schedule
// so that its phylogenetic diversity reaches D.

struct Team {
  long long start = 0;  // s_i < j <= e_i are the working timeslots
  long long end = 0;
};

struct TimePdInstance {
  PhyloTree tree;
  std::map<int, long long> rescue;      // ell(x), positive
  std::map<int, long long> extinction;  // ex(x), positive
  std::vector<Team> teams;
  Weight target = 0;  // D
  bool strict = false;

  void validate() const;
  Weight dbar() const { return tree.g.total_weight() - target; }
};

// Extinction classes: ex_1 < ... < ex_varex; Y_j holds the taxa of class j,
// H_j the person-hours available until ex_j, Hbar_j = ell(Z_j) - H_j.
struct TimePdClasses {
  std::vector<long long> ex_values;
  std::vector<std::vector<int>> classes;  // Y_j
  std::vector<long long> hours;           // H_j
  std::vector<long long> hbar;            // Hbar_j
  std::map<int, int> class_of;            // taxon -> class index (0-based)

  int var_ex() const { return static_cast<int>(ex_values.size()); }
  long long max_ex() const { return ex_values.empty() ? 0 : ex_values.back(); }
  // Person-hours of one team until ex_q.
  static long long team_hours_until(const Team& t, long long ex);
};

TimePdClasses timepd_classes(const TimePdInstance& inst);

// Lemma: a valid schedule saving S exists iff ell(S cap Z_j) <= H_j for all j.
bool feasible_set_check(const TimePdInstance& inst, const std::vector<int>& taxa);

struct Schedule {
  // (team index, timeslot) -> taxon vertex; slots not present are idle.
  std::map<std::pair<int, long long>, int> assignment;
};

// First-available greedy in extinction order; requires feasibility.
Schedule build_schedule(const TimePdInstance& inst, const std::vector<int>& taxa);

// Independent re-verification of a schedule (strictness checked when set).
bool verify_schedule(const TimePdInstance& inst, const std::vector<int>& taxa,
                     const Schedule& schedule, bool strict);

// Exact team-assignment search for strict feasibility (desk scale).
// Returns the per-taxon team when feasible.
std::optional<std::map<int, int>> strict_feasible_check(const TimePdInstance& inst,
                                                        const std::vector<int>& taxa);

struct TimePdResult {
  bool yes = false;
  std::optional<std::vector<int>> witness;          // saved taxa
  std::optional<Schedule> schedule;                 // valid schedule saving them
  std::optional<std::map<int, int>> team_of;        // strict mode assignment
};

// (C,p)-feasible DP for colored Time-PD; yes iff some set covering [D] is
// ex-compatible. The witness covers every color.
TimePdResult timepd_colored_dp(const TimePdInstance& inst, const EdgeColorSets& coloring);

// Three-table strict version; the per-team split uses naive 3^D subset
// enumeration (the convolution speedup is deliberately not used).
TimePdResult timepd_strict_colored_dp(const TimePdInstance& inst,
                                      const EdgeColorSets& coloring);

// Color-coding wrapper over a (total-weight, D)-perfect hash family;
// dispatches to the strict or non-strict colored DP.
TimePdResult timepd_solve_D(const TimePdInstance& inst, const FamilyOptions& fam = {},
                            int threads = 1);

// Acceptable-loss algorithm over extinction-Dbar-colored trees and anchored
// taxa sets (non-strict only).
TimePdResult timepd_solve_Dbar(const TimePdInstance& inst, const FamilyOptions& fam = {},
                               int threads = 1);

enum class HoursStrategy { TeamsPerSlot, HoursPerDeadline, TeamSetsPerSlot };

// Resource-vector DPs over the tree; TeamSetsPerSlot decides the strict
// problem, the other two the non-strict one.
TimePdResult timepd_dp_person_hours(const TimePdInstance& inst, HoursStrategy strategy);

// Matrix-indexed DP over (rescue length class) x (extinction class) counts.
TimePdResult timepd_xp_varl_varr(const TimePdInstance& inst);

enum class StarAxis { MaxEx, Diversity, DiversityLoss, MaxLambda };

// Star trees: per-class knapsack plus prefix combination.
TimePdResult timepd_star_solve(const TimePdInstance& inst, StarAxis axis = StarAxis::MaxEx);

// Subset enumeration (non-strict) / subset + assignment search (strict).
TimePdResult timepd_brute_force(const TimePdInstance& inst);

}  // namespace pdark
