#pragma once

#include <cmath>
#include <cstdint>

namespace recage {

// SplitMix64 step (Steele/Lea/Vigna); used only to expand seed material.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna).  Chosen over the std engines because its
// output is fully specified, so draws are bit-identical on every platform.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1): (k + 1/2) * 2^-53 never hits 0 or 1.
  double uniform_open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller from two uniforms; the second member of each
  // pair is cached so consumption stays deterministic per stream.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform_open01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream for replica i: seeded by splitmix64(master + (i+1)*phi64), so the
// draw sequence depends only on (master_seed, stream_index), never on which
// worker thread runs the replica or in what order.
inline Xoshiro256 make_stream(std::uint64_t master_seed,
                              std::uint64_t stream_index) {
  std::uint64_t s = master_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
  return Xoshiro256(splitmix64_next(s));
}

}  // namespace recage
