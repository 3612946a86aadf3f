#pragma once

#include <cstdint>
#include <vector>

namespace rlim {

// Physical channel description. t_s and M here are the values actually used
// by a simulator call; cross-scheme normalization happens before they are
// filled in.
struct ChannelParams {
  double D = 79.4;        // diffusion coefficient, um^2/s
  double r_r = 5.0;       // receiver radius, um
  double r_0 = 10.0;      // emitter-to-receiver-center distance, um
  double t_s = 0.2;       // signal interval, s
  int M = 1000;           // molecules per 1-bit emission
  double sigma_n2 = 0.0;  // counting-noise variance
  int memory = 200;       // ISI taps L
};

void validate_channel(const ChannelParams& p);

// F(t): probability a molecule emitted at t=0 is absorbed by time t.
double hitting_probability(double t, const ChannelParams& p);

// p_j = F(j*t_s) - F((j-1)*t_s) for j = 1..L.
std::vector<double> channel_coefficients(const ChannelParams& p);

// Count at interval t sums an exact Binomial(M, p_j) per 1-emission within
// the last L intervals, plus N(0, sigma_n2) counting noise. OpenMP kernel;
// per-interval counter streams make it bit-identical to the serial reference.
std::vector<double> simulate_binomial(const std::vector<uint8_t>& tx,
                                      const ChannelParams& p, uint64_t seed);
std::vector<double> simulate_binomial_serial_ref(const std::vector<uint8_t>& tx,
                                                 const ChannelParams& p,
                                                 uint64_t seed);

// Per-interval draw from Normal(sum b M p_j, sum b M p_j (1-p_j) + sigma_n2).
// Values can come out negative; downstream thresholding copes.
std::vector<double> simulate_gaussian(const std::vector<uint8_t>& tx,
                                      const ChannelParams& p, uint64_t seed);
std::vector<double> simulate_gaussian_serial_ref(const std::vector<uint8_t>& tx,
                                                 const ChannelParams& p,
                                                 uint64_t seed);

// Size/weight totals of a scheme over its full k-bit information set.
struct SchemeStats {
  uint64_t symbols;  // channel bits transmitted for all 2^k blocks
  uint64_t ones;     // 1-bits over the same set
  int k;             // info bits per block
};

struct NormalizedResources {
  double t_s;
  int M;
};

// Uncoded anchor over the same info set: symbols k*2^k, ones k*2^(k-1).
// t_s scales by symbol ratio, M by ones ratio with round-half-to-even.
NormalizedResources normalize_resources(const SchemeStats& s, double anchor_ts,
                                        int anchor_M);

double round_half_even(double x);

}  // namespace rlim
