#include "doctest.h"
#include <set>

#include "pdark/colorcoding.hpp"
#include "pdark/util.hpp"

using namespace pdark;

TEST_CASE("exact hash families cover all small parameter pairs") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      ColoringFamily fam = perfect_hash_family(n, k);
      CHECK(verify_perfect_hash_family(fam));
    }
  }
}

TEST_CASE("n=3 k=3 exact family contains a bijective coloring") {
  ColoringFamily fam = perfect_hash_family(3, 3);
  bool bijective = false;
  for (const auto& fn : fam.functions) {
    std::uint64_t mask = 0;
    for (int c : fn) mask |= std::uint64_t{1} << c;
    if (mask == 0b111) bijective = true;
  }
  CHECK(bijective);
}

TEST_CASE("n=5 k=2 exact family splits every pair") {
  ColoringFamily fam = perfect_hash_family(5, 2);
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      bool split = false;
      for (const auto& fn : fam.functions)
        if (fn[a] != fn[b]) split = true;
      CHECK(split);
    }
}

TEST_CASE("n=1 k=1 is a single constant function") {
  ColoringFamily fam = perfect_hash_family(1, 1);
  CHECK(fam.functions.size() == 1);
  CHECK(fam.functions[0][0] == 0);
}

TEST_CASE("k > n is an input error") {
  CHECK_THROWS_AS(perfect_hash_family(2, 3), input_error);
  CHECK_THROWS_AS(universal_set(2, 3), input_error);
}

TEST_CASE("exact universal sets cover all traces") {
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= std::min(n, 4); ++k) {
      ColoringFamily fam = universal_set(n, k);
      CHECK(verify_universal_set(fam));
    }
}

TEST_CASE("n=k universal set realizes the power set") {
  ColoringFamily fam = universal_set(4, 4);
  std::set<std::uint64_t> traces(fam.subsets.begin(), fam.subsets.end());
  CHECK(traces.size() == 16);
}

TEST_CASE("n=4 k=2 universal set verified over all pairs and patterns") {
  ColoringFamily fam = universal_set(4, 2);
  CHECK(verify_universal_set(fam));
}

TEST_CASE("randomized families are reproducible from the seed") {
  FamilyOptions opts;
  opts.mode = FamilyMode::Randomized;
  opts.seed = 1234;
  ColoringFamily a = perfect_hash_family(6, 2, opts);
  ColoringFamily b = perfect_hash_family(6, 2, opts);
  CHECK(a.functions == b.functions);
  CHECK(a.delta == opts.delta);
  opts.seed = 99;
  ColoringFamily c = perfect_hash_family(6, 2, opts);
  CHECK(a.functions != c.functions);

  ColoringFamily u1 = universal_set(6, 2, opts);
  ColoringFamily u2 = universal_set(6, 2, opts);
  CHECK(u1.subsets == u2.subsets);
}

TEST_CASE("excessive exact enumeration raises capacity errors") {
  CHECK_THROWS_AS(perfect_hash_family(60, 20), capacity_error);
  CHECK_THROWS_AS(universal_set(64, 30), capacity_error);
}
