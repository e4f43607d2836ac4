#include "secgraph/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"

using namespace secgraph;

TEST_CASE("same seed, same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("below stays in range and hits every value") {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(6);
    CHECK(v < 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
  CHECK(testutil::code_of([&] { return rng.below(0); }) == Errc::domain_error);
}

TEST_CASE("unit is in [0,1)") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("derive gives distinct reproducible streams") {
  CHECK(Rng::derive(5, 0) == Rng::derive(5, 0));
  std::set<std::uint64_t> derived;
  for (std::uint64_t i = 0; i < 100; ++i) derived.insert(Rng::derive(5, i));
  CHECK(derived.size() == 100);
}

TEST_CASE("seeded_permutation is a permutation and seed-sensitive") {
  const auto perm = seeded_permutation(20, 9);
  std::vector<std::uint32_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < 20; ++i) CHECK(sorted[i] == i);
  CHECK(seeded_permutation(20, 9) == perm);
  CHECK(seeded_permutation(20, 10) != perm);
  CHECK(seeded_permutation(0, 1).empty());
  CHECK(seeded_permutation(1, 1) == std::vector<std::uint32_t>{0});
}
