#include "pdark/colorcoding.hpp"

#include <algorithm>
#include <cmath>

namespace pdark {

namespace {

bool injective_on(const std::vector<int>& fn, const std::vector<int>& subset) {
  std::uint64_t used = 0;
  for (int x : subset) {
    std::uint64_t bit = std::uint64_t{1} << fn[x];
    if (used & bit) return false;
    used |= bit;
  }
  return true;
}

}  // namespace

ColoringFamily perfect_hash_family(int n, int k, const FamilyOptions& opts) {
  if (k < 1 || k > n) throw input_error("perfect_hash_family requires 1 <= k <= n");
  if (k > 62) throw capacity_error("perfect_hash_family: k too large");
  ColoringFamily fam;
  fam.n = n;
  fam.k = k;
  fam.mode = opts.mode;
  fam.seed = opts.seed;
  fam.delta = opts.mode == FamilyMode::Randomized ? opts.delta : 0;

  if (opts.mode == FamilyMode::Randomized) {
    double t = std::ceil(std::exp(k) * (k * std::log(std::max(2, k)) + std::log(1.0 / opts.delta)));
    check_budget(static_cast<std::uint64_t>(t), "perfect_hash_family trials");
    Rng rng(opts.seed);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(t); ++i) {
      std::vector<int> fn(n);
      for (int x = 0; x < n; ++x) fn[x] = rand_int(rng, 0, k - 1);
      fam.functions.push_back(std::move(fn));
    }
    return fam;
  }

  check_budget(binom(n, k), "perfect_hash_family subsets");
  // Greedy covering: walk the k-subsets in lexicographic order; whenever one is
  // not yet injectively colored, add a coloring tailored to it (ranks on the
  // subset, x mod k elsewhere) which usually covers many later subsets too.
  for_each_subset_of_size(n, k, [&](const std::vector<int>& subset) {
    for (const auto& fn : fam.functions)
      if (injective_on(fn, subset)) return;
    std::vector<int> fn(n);
    for (int x = 0; x < n; ++x) fn[x] = x % k;
    for (int i = 0; i < k; ++i) fn[subset[i]] = i;
    fam.functions.push_back(std::move(fn));
  });
  if (fam.functions.empty()) {  // k == n == 1 style corner: one constant map
    fam.functions.push_back(std::vector<int>(n, 0));
  }
  return fam;
}

ColoringFamily universal_set(int n, int k, const FamilyOptions& opts) {
  if (k < 1 || k > n) throw input_error("universal_set requires 1 <= k <= n");
  if (n > 64) throw capacity_error("universal_set: n > 64 unsupported");
  ColoringFamily fam;
  fam.n = n;
  fam.k = k;
  fam.mode = opts.mode;
  fam.seed = opts.seed;
  fam.delta = opts.mode == FamilyMode::Randomized ? opts.delta : 0;

  if (opts.mode == FamilyMode::Randomized) {
    double t = std::ceil(std::pow(2.0, k) *
                         (k * std::log(std::max(2, n)) + k * std::log(2.0) +
                          std::log(1.0 / opts.delta)));
    check_budget(static_cast<std::uint64_t>(t), "universal_set trials");
    Rng rng(opts.seed);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(t); ++i) {
      std::uint64_t a = 0;
      for (int x = 0; x < n; ++x)
        if (rng() & 1) a |= std::uint64_t{1} << x;
      fam.subsets.push_back(a);
    }
    return fam;
  }

  check_budget(binom(n, k) << k, "universal_set patterns");
  // Greedy covering over (k-subset, trace pattern) pairs.
  for_each_subset_of_size(n, k, [&](const std::vector<int>& subset) {
    std::uint64_t smask = 0;
    for (int x : subset) smask |= std::uint64_t{1} << x;
    std::vector<char> covered(std::size_t{1} << k, 0);
    std::size_t remaining = std::size_t{1} << k;
    auto trace = [&](std::uint64_t a) {
      std::uint64_t p = 0;
      for (int i = 0; i < k; ++i)
        if (a & (std::uint64_t{1} << subset[i])) p |= std::uint64_t{1} << i;
      return p;
    };
    for (std::uint64_t a : fam.subsets) {
      std::uint64_t p = trace(a);
      if (!covered[p]) {
        covered[p] = 1;
        --remaining;
      }
      if (remaining == 0) return;
    }
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << k); ++p) {
      if (covered[p]) continue;
      // Seed a member realizing pattern p on this subset; mirror p onto the
      // rest of the ground set so later subsets often get covered for free.
      std::uint64_t a = 0;
      for (int x = 0; x < n; ++x)
        if (p & (std::uint64_t{1} << (x % k))) a |= std::uint64_t{1} << x;
      a &= ~smask;
      for (int i = 0; i < k; ++i)
        if (p & (std::uint64_t{1} << i)) a |= std::uint64_t{1} << subset[i];
      fam.subsets.push_back(a);
    }
  });
  return fam;
}

bool verify_perfect_hash_family(const ColoringFamily& fam) {
  bool ok = true;
  for_each_subset_of_size(fam.n, fam.k, [&](const std::vector<int>& subset) {
    if (!ok) return;
    for (const auto& fn : fam.functions)
      if (injective_on(fn, subset)) return;
    ok = false;
  });
  return ok;
}

bool verify_universal_set(const ColoringFamily& fam) {
  bool ok = true;
  for_each_subset_of_size(fam.n, fam.k, [&](const std::vector<int>& subset) {
    if (!ok) return;
    std::vector<char> covered(std::size_t{1} << fam.k, 0);
    std::size_t remaining = std::size_t{1} << fam.k;
    for (std::uint64_t a : fam.subsets) {
      std::uint64_t p = 0;
      for (int i = 0; i < fam.k; ++i)
        if (a & (std::uint64_t{1} << subset[i])) p |= std::uint64_t{1} << i;
      if (!covered[p]) {
        covered[p] = 1;
        if (--remaining == 0) break;
      }
    }
    if (remaining != 0) ok = false;
  });
  return ok;
}

}  // namespace pdark
