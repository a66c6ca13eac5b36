#pragma once

#include <cstdint>
#include <vector>

#include "pdark/util.hpp"

namespace pdark {

enum class FamilyMode { Exact, Randomized };

struct FamilyOptions {
  FamilyMode mode = FamilyMode::Exact;
  std::uint64_t seed = 0;
  double delta = 1e-6;  // randomized mode: Pr[some fixed k-set missed] <= delta
};

// A family of colorings [n] -> [k] (hash family) or of subsets of [n]
// (universal set). Exact mode guarantees the covering property by
// construction; randomized mode records delta and the trial count.
struct ColoringFamily {
  int n = 0;
  int k = 0;
  FamilyMode mode = FamilyMode::Exact;
  std::uint64_t seed = 0;
  double delta = 0;
  // Hash family: members[i][x] = color of x in [0,k).
  std::vector<std::vector<int>> functions;
  // Universal set: members as bitmasks over [n] (n <= 64 for subsets mode).
  std::vector<std::uint64_t> subsets;

  std::size_t size() const {
    return functions.empty() ? subsets.size() : functions.size();
  }
};

// Edge coloring used by the colored tree problems: per-edge color sets with
// |c(e)| = lambda(e), colors drawn from [num_colors].
struct EdgeColorSets {
  int num_colors = 0;
  std::vector<std::uint64_t> edge_mask;  // per edge id
};

// (n,k)-perfect hash family: every k-subset of [n] is injectively colored by
// some member. Exact mode uses a greedy covering construction; randomized
// mode draws ceil(e^k (k ln k + ln(1/delta))) independent uniform colorings.
ColoringFamily perfect_hash_family(int n, int k, const FamilyOptions& opts = {});

// (n,k)-universal set: for every k-subset S, all 2^k traces A cap S occur.
// Randomized mode draws ceil(2^k (k ln n + k ln 2 + ln(1/delta))) subsets.
ColoringFamily universal_set(int n, int k, const FamilyOptions& opts = {});

// Full covering verification (exponential; for tests and exact-mode checks).
bool verify_perfect_hash_family(const ColoringFamily& fam);
bool verify_universal_set(const ColoringFamily& fam);

}  // namespace pdark
