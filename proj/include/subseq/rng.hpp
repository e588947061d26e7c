#pragma once

#include <cstdint>
#include <random>

namespace subseq {

// Seeded RNG with engine-defined (and therefore reproducible) output streams.
// Distribution helpers are hand-rolled because the std::*_distribution
// adapters are implementation-defined and would break byte-identical CSVs
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  // uniform in [lo, hi] inclusive
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double real(double lo, double hi) { return lo + unit() * (hi - lo); }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace subseq
