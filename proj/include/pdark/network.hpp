#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pdark/colorcoding.hpp"
#include "pdark/gnap.hpp"
#include "pdark/phylo.hpp"
#include "pdark/treedecomp.hpp"

namespace pdark {

// Max-All-Paths-PD on networks, Max-Net-PD with inheritance proportions, and
// Item-Weighted Partial Set Cover.

struct MapPdInstance {
  PhyloNetwork network;  // no inheritance
  int k = 0;
  Weight target = 0;

  void validate() const;
};

struct MaxNetPdInstance {
  PhyloNetwork network;  // inheritance on every reticulation edge
  int k = 0;
  Rational target;

  void validate() const;
};

struct WpscInstance {
  std::vector<Weight> item_weight;            // universe = indices
  std::vector<std::vector<int>> family;       // subsets of the universe
  int k = 0;
  Weight target = 0;

  void validate() const;
  // Every item must occur in some set; offenders are dropped.
  WpscInstance normalized() const;
};

struct NetResult {
  bool yes = false;
  std::optional<std::vector<int>> witness;  // taxa (MapPD) or set indices (wpSC)
};

// Equivalent binary instance: weights scaled by |E|+1, high degrees split
// into ladders of weight-1 edges; treewidth preserved.
MapPdInstance binarize(const MapPdInstance& inst);

// wpSC -> MapPD: root-layer item vertices (weight lambda(u) * Q with
// Q = m(n+1)), one reticulation per set, D' = DQ + 1. The unit-weight variant
// subdivides heavy edges and attaches false leaves.
MapPdInstance reduce_wpsc_to_mappd(const WpscInstance& inst, bool unit_weights = false);

// MapPD -> wpSC: one item per edge (weight lambda(e)), one set per taxon
// (its affected edges); k and D unchanged.
WpscInstance reduce_mappd_to_wpsc(const MapPdInstance& inst);

NetResult wpsc_brute_force(const WpscInstance& inst);

NetResult mappd_brute_force(const MapPdInstance& inst);

// take/leave branching on reticulations; tree base case solved greedily.
NetResult mappd_branch_ret(const MapPdInstance& inst);

// The take operation (exposed for the figure regression): merges the
// ancestors of the reticulation v into the root, bundles parallel weights,
// and adds Dbar to both D and the edge toward v's child.
MapPdInstance mappd_take(const MapPdInstance& inst, int reticulation);
MapPdInstance mappd_leave(const MapPdInstance& inst, int reticulation);

// Treewidth DP over a nice decomposition (with introduce-edge nodes) of the
// underlying undirected network graph; feasibility (F1)-(F5).
NetResult mappd_treewidth_dp(const MapPdInstance& inst);
NetResult mappd_treewidth_dp(const MapPdInstance& inst, const NiceTreeDecomposition& decomp,
                             const UGraph& graph);

// Dbar algorithm: green/red taxon colorings from an (n, kbar+Dbar)-universal
// set, component contraction, and a knapsack over the component items.
NetResult mappd_solve_Dbar(const MapPdInstance& inst, const FamilyOptions& fam = {});

// Component items (weight, value) of the colored transformation (exposed for
// the figure regression). green[x] marks green taxa.
std::vector<std::pair<Weight, int>> dbar_component_items(const MapPdInstance& inst,
                                                         const std::set<int>& green);

// Kernelization for the reticulation-edge parameter.
struct KernelStats {
  int vertices = 0;
  int edges = 0;
  int k = 0;
  int reticulation_edges = 0;
  int rule_applications = 0;
};

struct KernelResult {
  MapPdInstance instance;
  KernelStats stats;
};

// The seven reduction rules applied exhaustively in order, followed by the
// normalization pass (weights scaled by m+1, zero weights set to 1, vertices
// with in- and out-degree > 1 split).
KernelResult mappd_kernelize(const MapPdInstance& inst);

// Individual rules for the per-rule acceptance suites; each applies the rule
// at most once and reports whether it fired.
enum class KernelRule {
  TwinLeaves,     // replace the edge vy
  Degree2,        // contract a degree-2 vertex
  SidePath,       // side-vertex pair comparison
  LongString,     // reroute a side-path of length >= 2
  TopStrings,     // save x* or y* when k > |B| + |Y|
  TrimRootLeaves, // remove x_{k+1},...
  PathLength      // shortcut z_{k-1} z_{k+1}
};
bool mappd_apply_rule(MapPdInstance& inst, KernelRule rule);

NetResult maxnetpd_brute_force(const MaxNetPdInstance& inst);

// unit-cost NAP (height 2) -> level-1 Max-Net-PD via the leaf gadget
// p(x v2) = q/(2-q), p(v1 v2) = q/2, lambda(v2 x*) = Q M^2, D' = kQ(M^2+D).
MaxNetPdInstance gen_maxnetpd_level1_from_unitcost_nap(const GnapInstance& nap);

}  // namespace pdark
