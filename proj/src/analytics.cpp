#include "rlim/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace rlim {

SymbolClassProbs symbol_class_probs(const Codebook& cb) {
  if (cb.words.empty()) throw std::invalid_argument("empty codebook");
  SymbolClassProbs out;
  out.denom = static_cast<uint64_t>(cb.words.size()) *
              static_cast<uint64_t>(cb.length);
  for (size_t idx = 0; idx < cb.size(); ++idx) {
    Word w = cb.at(idx);
    for (int t = 1; t <= cb.length; ++t) {
      if (w.bit(t)) {
        ++out.ones_num;
        continue;
      }
      if (t <= cb.order) continue;
      bool clean = true;
      for (int back = t - cb.order; back < t; ++back) {
        if (w.bit(back)) {
          clean = false;
          break;
        }
      }
      if (clean) ++out.isolated_zeros_num;
    }
  }
  return out;
}

ThresholdMoments interference_moments(const ChannelParams& p, int order,
                                      int terms) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (terms < 1) throw std::invalid_argument("terms must be >= 1");
  int last_tap = 1 + (order + 1) * terms;
  if (p.memory < last_tap)
    throw std::invalid_argument("channel memory shorter than moment taps");
  std::vector<double> coef = channel_coefficients(p);
  ThresholdMoments m;
  double scale = static_cast<double>(p.M);
  for (int k = 1; k <= terms; ++k) {
    double pc = coef[static_cast<size_t>((order + 1) * (k - 1))];
    double pa = coef[static_cast<size_t>((order + 1) * k)];
    m.c += scale * pc;
    m.d += scale * pc * (1.0 - pc);
    m.a += scale * pa;
    m.b += scale * pa * (1.0 - pa);
  }
  m.b += p.sigma_n2;
  m.d += p.sigma_n2;
  return m;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double success_probability(const ThresholdMoments& m,
                           const SymbolClassProbs& probs, double tau) {
  if (probs.denom == 0) throw std::invalid_argument("empty symbol classes");
  if (!(m.b > 0.0) || !(m.d > 0.0))
    throw std::invalid_argument("variances must be positive");
  double p0 = static_cast<double>(probs.isolated_zeros_num) /
              static_cast<double>(probs.denom);
  double p1 = static_cast<double>(probs.ones_num) /
              static_cast<double>(probs.denom);
  double miss0 = q_function((tau - m.a) / std::sqrt(m.b));
  double catch1 = q_function((tau - m.c) / std::sqrt(m.d));
  return p0 * (1.0 - miss0) + p1 * catch1;
}

ThresholdEstimate estimate_threshold(const ThresholdMoments& m,
                                     const SymbolClassProbs& probs) {
  ThresholdEstimate est;
  if (probs.ones_num == 0 || probs.isolated_zeros_num == 0) {
    est.note = "degenerate symbol classes";
    return est;
  }
  if (!(m.b > 0.0) || !(m.d > 0.0)) {
    est.note = "non-positive count variance";
    return est;
  }
  if (!(m.c > m.a)) {
    est.note = "no separation between slot classes";
    return est;
  }
  // Ratio of class probabilities from the integer numerators; the common
  // denominator cancels.
  double ratio = static_cast<double>(probs.isolated_zeros_num) /
                 static_cast<double>(probs.ones_num);
  double rel_gap = std::fabs(m.d - m.b) / std::max(m.b, m.d);
  if (rel_gap <= 1e-9) {
    est.ok = true;
    est.tau = 0.5 * (m.a + m.c) + m.b * std::log(ratio) / (m.c - m.a);
    est.note = "equal-variance form";
  } else {
    double gap = m.c - m.a;
    double log_term = std::log(std::sqrt(m.d / m.b) * ratio);
    double disc = m.b * m.d * (gap * gap - 2.0 * (m.b - m.d) * log_term);
    if (disc < 0.0) {
      est.note = "negative discriminant";
      return est;
    }
    est.tau = (m.d * m.a - m.b * m.c + std::sqrt(disc)) / (m.d - m.b);
    est.ok = true;
  }
  if (!(est.tau > m.a) || !(est.tau < m.c)) {
    est.ok = false;
    est.note = "stationary point outside (mean0, mean1)";
    return est;
  }
  if (est.tau < 0.0) {
    est.ok = false;
    est.note = "negative threshold";
  }
  return est;
}

}  // namespace rlim
