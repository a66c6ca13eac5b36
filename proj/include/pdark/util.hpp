#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdark {

// Raised when an instance or argument violates a documented precondition.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an enumeration would exceed the configured budget.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a supplied structure (e.g. a tree decomposition) fails validation.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration budget (number of states a brute-force search may visit).
// PDARK_BUDGET overrides the default of 2^20.
inline std::uint64_t enum_budget() {
  static const std::uint64_t budget = [] {
    if (const char* env = std::getenv("PDARK_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 20;
  }();
  return budget;
}

inline void check_budget(std::uint64_t states, const char* what) {
  if (states > enum_budget())
    throw capacity_error(std::string(what) + ": " + std::to_string(states) +
                         " states exceed budget " + std::to_string(enum_budget()));
}

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {  // inclusive bounds
  return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// C(n,k) with saturation at 2^63-1, for capacity guards.
inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > (UINT64_MAX / 4) / n) return UINT64_MAX / 2;
    r = r * (n - k + i) / i;
  }
  return r;
}

// Visits all k-subsets of [0..n-1] in lexicographic order.
template <typename F>
void for_each_subset_of_size(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(const_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Visits all submasks of `mask`, including mask itself and 0.
template <typename F>
void for_each_submask(std::uint64_t mask, F&& f) {
  std::uint64_t sub = mask;
  while (true) {
    f(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace pdark
