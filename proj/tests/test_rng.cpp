#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rlim/rng.hpp"

using rlim::Philox;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published test vectors for the 10-round variant.
  auto z = Philox::block({0u, 0u}, {0u, 0u, 0u, 0u});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);

  auto f = Philox::block({0xffffffffu, 0xffffffffu},
                         {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  CHECK(f[0] == 0x408f276du);
  CHECK(f[1] == 0x41c83b0eu);
  CHECK(f[2] == 0xa20bc7c6u);
  CHECK(f[3] == 0x6d5451fdu);

  auto pi = Philox::block({0xa4093822u, 0x299f31d0u},
                          {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("counter streams are independent and replayable") {
  Philox a(42, rlim::stream::kind(rlim::stream::kBinomial, 7));
  Philox b(42, rlim::stream::kind(rlim::stream::kBinomial, 7));
  Philox c(42, rlim::stream::kind(rlim::stream::kBinomial, 8));
  Philox d(43, rlim::stream::kind(rlim::stream::kBinomial, 7));

  bool replay_ok = true, stream_differs = false, seed_differs = false;
  for (int i = 0; i < 256; ++i) {
    uint64_t va = a.next_u64();
    replay_ok &= (va == b.next_u64());
    stream_differs |= (va != c.next_u64());
    seed_differs |= (va != d.next_u64());
  }
  CHECK(replay_ok);
  CHECK(stream_differs);
  CHECK(seed_differs);
}

TEST_CASE("stream tags occupy disjoint id ranges") {
  using namespace rlim::stream;
  CHECK(kind(kBinomial, 0) != kind(kGaussian, 0));
  CHECK(kind(kNoise, 5) != kind(kDrift, 5));
  // A large index must not bleed into the tag byte.
  CHECK((kind(kTie, 0x00FFFFFFFFFFFFFFull) >> 56) == kTie);
}

TEST_CASE("next_unit stays in (0, 1]") {
  Philox g(9, 0);
  for (int i = 0; i < 100000; ++i) {
    double u = g.next_unit();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("normal() moments") {
  Philox g(1234, 1);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = g.normal();
    s += x;
    s2 += x * x;
  }
  double mean = s / n;
  double var = s2 / n - mean * mean;
  // 3-sigma bands: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n).
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("binomial edge cases") {
  Philox g(5, 2);
  CHECK(g.binomial(0, 0.3) == 0);
  CHECK(g.binomial(100, 0.0) == 0);
  CHECK(g.binomial(100, 1.0) == 100);
  CHECK(g.binomial(100, -0.5) == 0);
  CHECK(g.binomial(100, 1.5) == 100);
  CHECK_THROWS(g.binomial(-1, 0.5));
}

TEST_CASE("binomial moments match n*p and n*p*(1-p)") {
  Philox g(77, 3);
  const int reps = 100000, n = 100;
  const double p = 0.3;
  double s = 0.0, s2 = 0.0;
  int lo = n, hi = 0;
  for (int i = 0; i < reps; ++i) {
    int k = g.binomial(n, p);
    REQUIRE(k >= 0);
    REQUIRE(k <= n);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    s += k;
    s2 += double(k) * k;
  }
  double mean = s / reps;
  double var = s2 / reps - mean * mean;
  double sd = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(mean - n * p) < 3.0 * sd / std::sqrt(double(reps)));
  // Sample variance of a binomial concentrates fast; 0.5 is ~5x its 3SE
  // band but still far below the nearest wrong answer (Poisson var = 30).
  CHECK(std::abs(var - n * p * (1 - p)) < 0.5);
  CHECK(lo < n * p);
  CHECK(hi > n * p);
}

TEST_CASE("binomial recursive split keeps moments and determinism") {
  // n * -log1p(-p) = 3015 > 700, so this exercises the split path.
  const int n = 300000;
  const double p = 0.01;
  Philox g(11, 4);
  const int reps = 2000;
  double s = 0.0;
  for (int i = 0; i < reps; ++i) s += g.binomial(n, p);
  double mean = s / reps;
  double sd = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(mean - n * p) < 3.0 * sd / std::sqrt(double(reps)));

  Philox g1(11, 4), g2(11, 4);
  for (int i = 0; i < 50; ++i) REQUIRE(g1.binomial(n, p) == g2.binomial(n, p));
}
