#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace odd {

// Deterministic random source. std::shuffle and std::uniform_int_distribution
// produce different sequences across standard library implementations, so the
// reductions and shuffles are spelled out here: a fixed seed yields the same
// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, index) pairs, e.g. one per restart.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform draw from [0, n). Modulo reduction: the bias is far below any
  // tolerance used here and the result is implementation-independent.
  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : engine_() % n; }

  double unit() {  // uniform in [0, 1)
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // k distinct values from [0, n), ascending.
  std::vector<int> sample(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {  // partial Fisher-Yates
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(i) +
                     below(static_cast<std::uint64_t>(n - i))]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace odd
