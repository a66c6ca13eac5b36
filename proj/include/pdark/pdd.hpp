#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pdark/colorcoding.hpp"
#include "pdark/phylo.hpp"
#include "pdark/treedecomp.hpp"

namespace pdark {

// Optimizing PD with Dependencies: pick a viable set of at most k taxa in a
// food-web (an edge u->v means v feeds on u) maximizing PD.

struct FoodWeb {
  // Vertex set equals the taxa of the accompanying tree; edges by taxon vertex id.
  std::vector<std::pair<int, int>> edges;  // (prey, predator)

  std::vector<int> prey_of(int x) const;
  std::vector<int> predators_of(int x) const;
  std::vector<int> sources(const std::vector<int>& taxa) const;
};

struct PddInstance {
  PhyloTree tree;
  FoodWeb web;
  int k = 0;
  Weight target = 0;

  void validate() const;  // acyclic web on exactly the taxa set
};

struct PddResult {
  bool yes = false;
  std::optional<std::vector<int>> witness;
};

// A set is viable iff the sources of the induced web are sources of the web.
bool viability_check(const PddInstance& inst, const std::vector<int>& taxa);

// Adds a star taxon feeding every source; k+1, D -> 2D+1, star edge D+1.
PddInstance normalize_single_source(const PddInstance& inst);

// RR 1 (taxa out of reach of any k-chain), RR 2 (heavy edge short-circuit),
// RR 3 (redundant web edges). Returns the reduced instance or an early yes.
struct PddReduced {
  std::optional<PddInstance> instance;       // absent when early yes fired
  std::optional<std::vector<int>> early_yes;  // witness for the heavy edge
};
PddReduced apply_reduction_rules(const PddInstance& inst);

enum class PddBruteAxis { K, KBar };

// Enumerates subsets of size min(k, n); ground truth. Witness padded to
// exactly that size when possible.
PddResult pdd_brute_force(const PddInstance& inst, PddBruteAxis axis = PddBruteAxis::K);

// Colored star DP: max diversity of colorful viable sets per color subset;
// requires a star tree and a single source (normalize first).
// taxon_color[x] in [0,k).
PddResult spdd_colored_dp(const PddInstance& inst, const std::map<int, int>& taxon_color);

// Color-coding wrapper for s-PDD with parameter k.
PddResult spdd_solve_k(const PddInstance& inst, const FamilyOptions& fam = {},
                       int threads = 1);

// Pattern-tree algorithm for PDD with parameter k + tree height.
PddResult pdd_solve_k_height(const PddInstance& inst, const FamilyOptions& fam = {});

// Colored DP with edge color sets over [D] and taxon colors over [k].
struct PddColoring {
  EdgeColorSets edges;                 // masks over [D]
  std::map<int, int> taxon_color;     // over [k]
  int k = 0;
};
PddResult pdd_colored_D_dp(const PddInstance& inst, const PddColoring& coloring);

// Color-coding wrapper for PDD with parameter D (pre-applies the heavy-edge
// rule and the single-source normalization).
PddResult pdd_solve_D(const PddInstance& inst, const FamilyOptions& fam = {});

// Treewidth DP over a nice decomposition of the food-web (star trees).
PddResult spdd_treewidth_dp(const PddInstance& inst);
PddResult spdd_treewidth_dp(const PddInstance& inst, const NiceTreeDecomposition& decomp,
                            const UGraph& web_graph);

// Cluster modulator: Y with web - Y a disjoint union of single-source
// components (star tree).
PddResult spdd_cluster_solver(const PddInstance& inst, const std::vector<int>& modulator);

// Co-cluster modulator: enumerate surviving modulator subsets and the first
// survivors; solve hitting-set-with-tree-profits subinstances.
PddResult spdd_cocluster_solver(const PddInstance& inst, const std::vector<int>& modulator);

// Auxiliary problem for the co-cluster solver (exposed for tests).
struct HittingSetTreeProfitInstance {
  PhyloTree tree;                       // universe = taxa of this tree
  std::vector<std::set<int>> family;    // subsets to hit (taxon vertex ids)
  int k = 0;
  Weight target = 0;
};
PddResult hitting_set_tree_profits(const HittingSetTreeProfitInstance& inst);

// Source-separating instances whose web has components of at most 2 vertices:
// minimum-cost flow over both spanning trees.
PddResult pdd_flow_solver(const PddInstance& inst);

// Out-forest webs (every taxon has at most one prey): 2-coloring knapsack
// wrapped in an (n, 3*kbar)-universal set.
PddResult pdd_kbar_outforest_solver(const PddInstance& inst, const FamilyOptions& fam = {});
// The colored subproblem (exposed for tests), colors in {0,1}.
PddResult pdd_2colored_outforest(const PddInstance& inst, const std::vector<char>& color);

// Source-dominant webs: force the source, then greedy Max-PD.
PddResult pdd_source_dominant_solve(const PddInstance& inst);

}  // namespace pdark
