#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "odd/rng.hpp"

using odd::Rng;

TEST_SUITE("rng") {
  TEST_CASE("same seed, same sequence") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  }

  TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
      if (a.next() == b.next()) ++same;
    CHECK(same == 0);
  }

  TEST_CASE("streams are independent lanes of one seed") {
    Rng a = Rng::stream(7, 0);
    Rng b = Rng::stream(7, 1);
    CHECK(a.next() != b.next());
    Rng a2 = Rng::stream(7, 0);
    a = Rng::stream(7, 0);
    for (int i = 0; i < 16; ++i) CHECK(a.next() == a2.next());
  }

  TEST_CASE("below stays in range and hits every value") {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) {
      const auto v = rng.below(5);
      CHECK(v < 5);
      seen.insert(v);
    }
    CHECK(seen.size() == 5);
  }

  TEST_CASE("unit is in [0,1)") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
      const double u = rng.unit();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("shuffle permutes") {
    Rng rng(11);
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<int> original = v;
    rng.shuffle(v);
    CHECK(v != original);  // 1/8! chance of a false alarm, fixed seed
    std::sort(v.begin(), v.end());
    CHECK(v == original);
  }

  TEST_CASE("sample picks k distinct sorted indices") {
    Rng rng(13);
    const std::vector<int> picked = rng.sample(10, 4);
    CHECK(picked.size() == 4);
    CHECK(std::is_sorted(picked.begin(), picked.end()));
    for (std::size_t i = 1; i < picked.size(); ++i) CHECK(picked[i - 1] != picked[i]);
    for (int p : picked) {
      CHECK(p >= 0);
      CHECK(p < 10);
    }
    CHECK(rng.sample(5, 5).size() == 5);
  }
}
