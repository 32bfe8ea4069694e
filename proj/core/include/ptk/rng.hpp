#pragma once

#include <cmath>
#include <cstdint>

namespace ptk::num {

// Splittable counter-seeded stream: xoshiro256++ state derived from
// (seed, path ids) through splitmix64, so child streams are independent
// of evaluation order and thread scheduling.
class RngStream {
 public:
  static RngStream root(std::uint64_t seed) { return RngStream(seed, 0x9e3779b97f4a7c15ULL); }

  RngStream child(std::uint64_t id) const {
    return RngStream(mix_ ^ (0xbf58476d1ce4e5b9ULL * (id + 1)), mix_);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on (0,1), never returns 0 or 1
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential() { return -std::log(uniform()); }

  // Marsaglia polar method with one cached deviate
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  RngStream(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b * 0x94d049bb133111ebULL);
    for (auto& w : s_) w = splitmix(x);
    mix_ = splitmix(x);
    // avoid the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
  std::uint64_t mix_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ptk::num
