#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace evflow {

// Counter-based splitmix64. Every draw is a pure function of (seed, stream,
// index), so generated datasets are bit-identical no matter how the draws are
// ordered or split across workers.
namespace detail {
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : base_(detail::splitmix64(detail::splitmix64(seed) ^
                                 (0x6a09e667f3bcc909ULL + stream))),
        counter_(0) {}

  uint64_t next_u64() {
    return detail::splitmix64(base_ + 0x9e3779b97f4a7c15ULL * (++counter_));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Unbiased integer in [0, n) by rejection.
  uint64_t below(uint64_t n) {
    uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller (both values used).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t base_;
  uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace evflow
