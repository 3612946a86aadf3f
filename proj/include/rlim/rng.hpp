#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rlim {

// Philox4x32-10 counter-based generator (the 10-round standard constants).
// The 64-bit seed is the key; `stream` selects an independent substream and
// sits in the upper counter words, so any (seed, stream) pair yields the same
// sequence no matter where or in what order it is consumed. That property is
// what makes the OpenMP kernels bit-identical to the serial references.
class Philox {
 public:
  Philox() : Philox(0, 0) {}
  Philox(uint64_t seed, uint64_t stream) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    ctr_ = {0, 0, static_cast<uint32_t>(stream),
            static_cast<uint32_t>(stream >> 32)};
    pos_ = 4;
    have_normal_ = false;
  }

  static std::array<uint32_t, 4> block(std::array<uint32_t, 2> key,
                                       std::array<uint32_t, 4> c) {
    for (int r = 0; r < 10; ++r) {
      uint64_t m0 = uint64_t{0xD2511F53u} * c[0];
      uint64_t m1 = uint64_t{0xCD9E8D57u} * c[2];
      c = {static_cast<uint32_t>(m1 >> 32) ^ c[1] ^ key[0],
           static_cast<uint32_t>(m1),
           static_cast<uint32_t>(m0 >> 32) ^ c[3] ^ key[1],
           static_cast<uint32_t>(m0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return c;
  }

  uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = block(key_, ctr_);
      if (++ctr_[0] == 0) ++ctr_[1];
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on (0, 1]; never returns 0 so log() is always safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the second value, so the draw count is deterministic.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(th);
    have_normal_ = true;
    return r * std::cos(th);
  }

  // Exact Binomial(n, p) by CDF inversion, one uniform per draw. When
  // (1-p)^n would lose all precision the range is split recursively, which
  // keeps the sampler exact for every (n, p) used here (no normal shortcut).
  int binomial(int n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n < 0");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (static_cast<double>(n) * -std::log1p(-p) > 700.0) {
      int h = n / 2;
      return binomial(h, p) + binomial(n - h, p);
    }
    double q = std::pow(1.0 - p, n);  // pmf at 0
    double cdf = q;
    double u = next_unit();
    int k = 0;
    double ratio = p / (1.0 - p);
    while (u > cdf && k < n) {
      ++k;
      q *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
      cdf += q;
    }
    return k;
  }

 private:
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> ctr_;
  std::array<uint32_t, 4> buf_{};
  int pos_;
  double cached_normal_ = 0.0;
  bool have_normal_;
};

// Stream-id layout shared by the simulators: top byte tags the purpose so
// substreams never collide across kernels under one seed.
namespace stream {
constexpr uint64_t kind(uint64_t tag, uint64_t index) {
  return (tag << 56) | (index & 0x00FFFFFFFFFFFFFFull);
}
constexpr uint64_t kBinomial = 1;
constexpr uint64_t kGaussian = 2;
constexpr uint64_t kNoise = 3;
constexpr uint64_t kDrift = 4;
constexpr uint64_t kMolecule = 5;
constexpr uint64_t kInfoPilot = 6;
constexpr uint64_t kInfoTest = 7;
constexpr uint64_t kRunSeed = 8;
constexpr uint64_t kTie = 9;
}  // namespace stream

}  // namespace rlim
