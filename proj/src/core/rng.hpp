#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sentikit {

// xoshiro256** 1.0 (Blackman & Vigna). State update per draw:
//   result = rotl(s1 * 5, 7) * 9
//   t = s1 << 17
//   s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
// Seeding expands the 64-bit seed with splitmix64 (increment
// 0x9e3779b97f4a7c15, multipliers 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb).
// The sequence is fixed across platforms and compilers; shuffles and bounded
// draws below use no std:: distribution so they are reproducible too.
class Rng {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit Rng(std::uint64_t seed);
  // Independent stream for a (seed, stream) pair, e.g. one per tree.
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound); bound must be > 0. Lemire's method.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T> &items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t &state);

}  // namespace sentikit
