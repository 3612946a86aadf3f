#include "rlim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "rlim/rng.hpp"

namespace rlim {

void validate_channel(const ChannelParams& p) {
  if (!(p.r_0 > p.r_r) || !(p.r_r > 0.0))
    throw std::invalid_argument("need r_0 > r_r > 0");
  if (!(p.D > 0.0)) throw std::invalid_argument("need D > 0");
  if (!(p.t_s > 0.0)) throw std::invalid_argument("need t_s > 0");
  if (p.sigma_n2 < 0.0) throw std::invalid_argument("need sigma_n2 >= 0");
  if (p.M < 0) throw std::invalid_argument("need M >= 0");
  if (p.memory < 1) throw std::invalid_argument("need memory >= 1");
}

double hitting_probability(double t, const ChannelParams& p) {
  if (t <= 0.0) return 0.0;
  return (p.r_r / p.r_0) * std::erfc((p.r_0 - p.r_r) / std::sqrt(4.0 * p.D * t));
}

std::vector<double> channel_coefficients(const ChannelParams& p) {
  validate_channel(p);
  std::vector<double> coeff(p.memory);
  double prev = 0.0;
  for (int j = 1; j <= p.memory; ++j) {
    double cur = hitting_probability(j * p.t_s, p);
    coeff[j - 1] = cur - prev;
    prev = cur;
  }
  return coeff;
}

namespace {

double interval_count_binomial(const std::vector<uint8_t>& tx,
                               const std::vector<double>& coeff,
                               const ChannelParams& p, uint64_t seed, long t) {
  Philox rng(seed, stream::kind(stream::kBinomial, static_cast<uint64_t>(t)));
  double c = 0.0;
  long max_j = std::min<long>(p.memory, t + 1);
  for (long j = 1; j <= max_j; ++j)
    if (tx[t - j + 1]) c += rng.binomial(p.M, coeff[j - 1]);
  if (p.sigma_n2 > 0.0) {
    Philox noise(seed, stream::kind(stream::kNoise, static_cast<uint64_t>(t)));
    c += std::sqrt(p.sigma_n2) * noise.normal();
  }
  return c;
}

}  // namespace

std::vector<double> simulate_binomial(const std::vector<uint8_t>& tx,
                                      const ChannelParams& p, uint64_t seed) {
  validate_channel(p);
  auto coeff = channel_coefficients(p);
  std::vector<double> counts(tx.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(tx.size()); ++t)
    counts[t] = interval_count_binomial(tx, coeff, p, seed, t);
  return counts;
}

std::vector<double> simulate_binomial_serial_ref(const std::vector<uint8_t>& tx,
                                                 const ChannelParams& p,
                                                 uint64_t seed) {
  validate_channel(p);
  auto coeff = channel_coefficients(p);
  std::vector<double> counts(tx.size());
  for (size_t t = 0; t < tx.size(); ++t) {
    Philox rng(seed, stream::kind(stream::kBinomial, t));
    double c = 0.0;
    size_t max_j = std::min<size_t>(p.memory, t + 1);
    for (size_t j = 1; j <= max_j; ++j)
      if (tx[t - j + 1]) c += rng.binomial(p.M, coeff[j - 1]);
    if (p.sigma_n2 > 0.0) {
      Philox noise(seed, stream::kind(stream::kNoise, t));
      c += std::sqrt(p.sigma_n2) * noise.normal();
    }
    counts[t] = c;
  }
  return counts;
}

namespace {

double interval_count_gaussian(const std::vector<uint8_t>& tx,
                               const std::vector<double>& coeff,
                               const ChannelParams& p, uint64_t seed, long t) {
  double mean = 0.0, var = p.sigma_n2;
  long max_j = std::min<long>(p.memory, t + 1);
  for (long j = 1; j <= max_j; ++j) {
    if (!tx[t - j + 1]) continue;
    double mp = static_cast<double>(p.M) * coeff[j - 1];
    mean += mp;
    var += mp * (1.0 - coeff[j - 1]);
  }
  if (var <= 0.0) return mean;
  Philox rng(seed, stream::kind(stream::kGaussian, static_cast<uint64_t>(t)));
  return mean + std::sqrt(var) * rng.normal();
}

}  // namespace

std::vector<double> simulate_gaussian(const std::vector<uint8_t>& tx,
                                      const ChannelParams& p, uint64_t seed) {
  validate_channel(p);
  auto coeff = channel_coefficients(p);
  std::vector<double> counts(tx.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(tx.size()); ++t)
    counts[t] = interval_count_gaussian(tx, coeff, p, seed, t);
  return counts;
}

std::vector<double> simulate_gaussian_serial_ref(const std::vector<uint8_t>& tx,
                                                 const ChannelParams& p,
                                                 uint64_t seed) {
  validate_channel(p);
  auto coeff = channel_coefficients(p);
  std::vector<double> counts(tx.size());
  for (size_t t = 0; t < tx.size(); ++t) {
    double mean = 0.0, var = p.sigma_n2;
    size_t max_j = std::min<size_t>(p.memory, t + 1);
    for (size_t j = 1; j <= max_j; ++j) {
      if (!tx[t - j + 1]) continue;
      double mp = static_cast<double>(p.M) * coeff[j - 1];
      mean += mp;
      var += mp * (1.0 - coeff[j - 1]);
    }
    if (var <= 0.0) {
      counts[t] = mean;
    } else {
      Philox rng(seed, stream::kind(stream::kGaussian, t));
      counts[t] = mean + std::sqrt(var) * rng.normal();
    }
  }
  return counts;
}

double round_half_even(double x) {
  double f = std::floor(x);
  double frac = x - f;
  if (frac > 0.5) return f + 1.0;
  if (frac < 0.5) return f;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

NormalizedResources normalize_resources(const SchemeStats& s, double anchor_ts,
                                        int anchor_M) {
  if (s.ones == 0) throw std::invalid_argument("scheme has zero 1-bits");
  if (s.symbols == 0) throw std::invalid_argument("scheme has zero symbols");
  if (s.k < 1 || s.k > 32) throw std::invalid_argument("block length out of range");
  double anchor_symbols = static_cast<double>(uint64_t(s.k) << s.k);
  double anchor_ones = static_cast<double>(uint64_t(s.k) << (s.k - 1));
  NormalizedResources out;
  out.t_s = anchor_ts * anchor_symbols / static_cast<double>(s.symbols);
  out.M = static_cast<int>(round_half_even(
      anchor_ones / static_cast<double>(s.ones) * anchor_M));
  return out;
}

}  // namespace rlim
