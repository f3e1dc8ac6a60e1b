#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rainbow/errors.hpp"

namespace rainbow {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of stream `index` under `master`, optionally namespaced by `tag`, so
// per-trial results do not depend on how trials are scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag = 0) {
  return mix64(mix64(master ^ mix64(tag)) + index);
}

// mt19937_64 with distributions written out by hand: the standard library's
// distributions are implementation-defined, which would break cross-platform
// reproducibility of recorded seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("Rng::below(0)");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rainbow
