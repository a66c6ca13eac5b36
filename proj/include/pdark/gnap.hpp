#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pdark/knapsack.hpp"
#include "pdark/phylo.hpp"
#include "pdark/rational.hpp"

namespace pdark {

// Generalized Noah's Ark Problem: pick exactly one project per taxon; a
// project is a (cost, survival probability) pair; maximize expected PD.

struct GnapProject {
  long long cost = 0;
  Rational prob;
};

struct GnapInstance {
  PhyloTree tree;
  std::map<int, std::vector<GnapProject>> projects;  // taxon vertex -> list
  long long budget = 0;
  Rational target;

  // Costs and probabilities strictly increasing within each list, probs in [0,1].
  void validate() const;
  // Sorts lists and drops dominated projects (same cost / not-better prob).
  GnapInstance normalized() const;
  int var_c() const;
  int var_w() const;
  int max_list() const;  // L
};

struct GnapSolution {
  std::map<int, int> choice;  // taxon vertex -> project index
  long long cost = 0;
  Rational value;
};

struct GnapResult {
  bool yes = false;
  std::optional<GnapSolution> solution;  // best feasible assignment
};

// Expected diversity of a full probability assignment (Sec. 3.2.1 measure).
inline Rational gnap_expected_pd(const PhyloTree& tree,
                                 const std::map<int, Rational>& survival) {
  return expected_pd(tree, survival);
}

Rational gnap_solution_value(const GnapInstance& inst, const std::map<int, int>& choice);

// Project cross-product enumeration; capacity-guarded ground truth.
GnapResult gnap_brute_force(const GnapInstance& inst);

// Two-table DP over multiplicity tuples of the non-maximal costs and
// survival probabilities (XP in var_c + var_w).
GnapResult gnap_dp_varc_varw(const GnapInstance& inst);

// Same DP with the cost axis replaced by the spent budget.
GnapResult gnap_dp_budget_varw(const GnapInstance& inst);

enum class Nap01Axis { Diversity, MaxWeight };

// 0/1 survival probabilities: minimal cost per achievable diversity.
GnapResult nap01_dp(const GnapInstance& inst, Nap01Axis axis = Nap01Axis::Diversity);

// Star tree: reduce to MCKP on the common probability denominator.
GnapResult gnap_star_solve(const GnapInstance& inst);

// Unit-cost projects on an ultrametric tree of height <= 2: per-child
// highest-probability-first profiles combined by a budget DP.
GnapResult unitcost_ultrametric_h2_greedy(const GnapInstance& inst);

// Height-2 unit-cost instance whose answer equals the Penalty Sum answer
// (root of out-degree 1; weights scale*Q and scale*a_i/(1-b_i)).
GnapInstance gen_unitcost_nap_from_penalty_sum(const PenaltySumInstance& ps);

}  // namespace pdark
