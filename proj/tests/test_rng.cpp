#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rng.hpp"

using namespace sentikit;

namespace {

// Reference xoshiro256** step written straight from the published algorithm.
struct RefXoshiro {
  std::uint64_t s[4];
  std::uint64_t next() {
    const std::uint64_t out = std::rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = std::rotl(s[3], 45);
    return out;
  }
};

}  // namespace

TEST_CASE("splitmix64 matches published outputs for seed 0") {
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64(state) == 0x06c45d188009454fULL);
}

TEST_CASE("reference xoshiro256** from state 1,2,3,4") {
  RefXoshiro ref{{1, 2, 3, 4}};
  CHECK(ref.next() == 11520ULL);
  CHECK(ref.next() == 0ULL);
  CHECK(ref.next() == 1509978240ULL);
  CHECK(ref.next() == 1215971899390074240ULL);
}

TEST_CASE("Rng equals splitmix-seeded reference generator") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    std::uint64_t sm = seed;
    RefXoshiro ref{};
    for (auto &v : ref.s) v = splitmix64(sm);
    Rng rng(seed);
    for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_u64() == ref.next());
  }
}

TEST_CASE("streams differ and are reproducible") {
  Rng a(7, 0), b(7, 1), c(7, 0);
  const auto x = a.next_u64();
  CHECK(x != b.next_u64());
  CHECK(x == c.next_u64());
}

TEST_CASE("uniform lies in [0,1) with mean near 1/2") {
  Rng rng(3);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(11);
  std::vector<int> hist(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  // chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile
  double chi = 0;
  for (int h : hist) chi += (h - 10000.0) * (h - 10000.0) / 10000.0;
  CHECK(chi < 22.46);
  CHECK(rng.below(1) == 0);
}

TEST_CASE("shuffle yields a permutation and depends on the seed") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto a = v, b = v, c = v;
  Rng r1(5), r2(5), r3(6);
  r1.shuffle(a);
  r2.shuffle(b);
  r3.shuffle(c);
  CHECK(a == b);
  CHECK(a != c);
  std::sort(a.begin(), a.end());
  CHECK(a == v);
}
