#ifndef FUNCVB_RNG_HPP_
#define FUNCVB_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace funcvb {

// splitmix64 finalizer; used to derive independent stream seeds from a
// base seed plus stream indices so that parallel workers draw identical
// values regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ (a + 0x100000001b3ULL));
  s = splitmix64(s ^ (b + 0xcbf29ce484222325ULL));
  s = splitmix64(s ^ (c + 0x2545f4914f6cdd1dULL));
  return s;
}

// Deterministic sampler on top of mt19937_64. The standard distribution
// objects are implementation-defined, so uniform and normal draws are
// generated explicitly to keep outputs byte-identical across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; draws are consumed in pairs
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace funcvb

#endif  // FUNCVB_RNG_HPP_
