#pragma once

#include <cmath>
#include <cstdint>

namespace hanrec {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic generator used everywhere randomness is needed. The stdlib
// distributions are implementation-defined, so uniform/normal are spelled
// out here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Per-item stream: same (seed, index) gives the same stream no matter
  // which worker draws it.
  static Rng stream(uint64_t seed, uint64_t index) {
    return Rng(mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
  }

  // Named substream, for stages that must not perturb each other's draws.
  Rng fork(uint64_t tag) const {
    return Rng(mix64(state_ ^ mix64(tag)));
  }

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), n > 0
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  int range_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // standard normal via Box-Muller; one draw per pair of uniforms
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

}  // namespace hanrec
