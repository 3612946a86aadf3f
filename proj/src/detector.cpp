#include "rlim/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "rlim/corrector.hpp"

namespace rlim {

namespace {

void check_window(std::span<const double> m, int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (m.size() <= static_cast<size_t>(order) || m.size() > 64)
    throw std::invalid_argument("count window must have order < n <= 64");
}

void check_pilot(const PilotSet& pilot) {
  if (pilot.counts.empty() || pilot.counts.size() != pilot.truth.size())
    throw std::invalid_argument("pilot set is empty or misaligned");
}

}  // namespace

std::vector<uint8_t> threshold_stream(std::span<const double> m, double tau) {
  std::vector<uint8_t> bits(m.size());
  for (size_t j = 0; j < m.size(); ++j) bits[j] = m[j] >= tau ? 1 : 0;
  return bits;
}

Word detect_static(std::span<const double> m, double tau, int order) {
  check_window(m, order);
  int n = static_cast<int>(m.size());
  Word w{0, n};
  for (int t = 1; t <= n; ++t)
    if (m[t - 1] >= tau) w.set_bit(t, 1);

  bool any = false;
  for (int t = order + 1; t <= n && !any; ++t) any = w.bit(t);
  if (any) return w;

  bool all_zero = std::all_of(m.begin(), m.end(),
                              [](double x) { return x == 0.0; });
  if (all_zero) {
    Word z{0, n};
    z.set_bit(order + 1, 1);
    return z;
  }
  int best = order + 1;
  for (int t = order + 2; t <= n; ++t)
    if (m[t - 1] > m[best - 1]) best = t;
  w.set_bit(best, 1);
  return w;
}

Word detect_adaptive(std::span<const double> m, double a, int order) {
  check_window(m, order);
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("a must be in [0, 1]");
  int n = static_cast<int>(m.size());
  double mn = m[order], mx = m[order];
  for (int t = order + 1; t < n; ++t) {
    mn = std::min(mn, m[t]);
    mx = std::max(mx, m[t]);
  }
  double tau = a * mn + (1.0 - a) * mx;
  Word w{0, n};
  for (int t = 1; t <= n; ++t)
    if (m[t - 1] >= tau) w.set_bit(t, 1);
  return w;
}

std::vector<uint8_t> detect_baseline_dynamic(std::span<const double> m,
                                             double a, double floor_min,
                                             int spacing) {
  if (spacing < 1) throw std::invalid_argument("spacing must be >= 1");
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("a must be in [0, 1]");
  std::vector<uint8_t> bits(m.size(), 0);
  for (size_t w0 = 0; w0 < m.size(); w0 += spacing) {
    size_t w1 = std::min(w0 + spacing, m.size());
    double mn = m[w0], mx = m[w0];
    for (size_t j = w0 + 1; j < w1; ++j) {
      mn = std::min(mn, m[j]);
      mx = std::max(mx, m[j]);
    }
    if (mx < floor_min) continue;
    double tau = a * mn + (1.0 - a) * mx;
    for (size_t j = w0; j < w1; ++j) bits[j] = m[j] >= tau ? 1 : 0;
  }
  return bits;
}

std::vector<double> eval_grid(size_t count,
                              const std::function<double(size_t)>& f,
                              Execution exec) {
  std::vector<double> values(count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long g = 0; g < static_cast<long>(count); ++g)
      values[g] = f(static_cast<size_t>(g));
  } else {
    for (size_t g = 0; g < count; ++g) values[g] = f(g);
  }
  return values;
}

size_t argmin_index(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty grid");
  size_t best = 0;
  for (size_t g = 1; g < values.size(); ++g)
    if (values[g] < values[best]) best = g;
  return best;
}

namespace {

// Shared pilot-BER core; `detect` maps one count window to a word.
double pipeline_ber(const PilotSet& pilot, const BlockMapping& map,
                    const std::function<Word(std::span<const double>)>& detect) {
  check_pilot(pilot);
  const int n = map.word_bits();
  const int k = map.block_bits();
  const int order = map.order();
  uint64_t errors = 0, bits = 0;
  for (size_t r = 0; r < pilot.counts.size(); ++r) {
    const auto& m = pilot.counts[r];
    const auto& truth = pilot.truth[r];
    if (m.size() % n != 0 || truth.size() % k != 0 ||
        m.size() / n != truth.size() / k)
      throw std::invalid_argument("pilot stream sizes do not match scheme");
    size_t blocks = m.size() / n;
    for (size_t b = 0; b < blocks; ++b) {
      Word det = detect(std::span<const double>(m).subspan(b * n, n));
      Word corr = correct_greedy(det, order);
      Word proj = project_to_codebook(corr, map.codebook());
      uint64_t got = map.decode(proj);
      uint64_t want = 0;
      for (int j = 0; j < k; ++j)
        want = (want << 1) | (truth[b * k + j] & 1);
      got ^= want;
      errors += std::popcount(got);
      bits += k;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(bits);
}

}  // namespace

double pipeline_ber_static(const PilotSet& pilot, const BlockMapping& map,
                           double tau, bool constrained_guard) {
  int order = map.order();
  return pipeline_ber(pilot, map, [&](std::span<const double> m) {
    if (constrained_guard) return detect_static(m, tau, order);
    auto bits = threshold_stream(m, tau);
    Word w{0, static_cast<int>(bits.size())};
    for (size_t t = 0; t < bits.size(); ++t)
      if (bits[t]) w.set_bit(static_cast<int>(t) + 1, 1);
    return w;
  });
}

double pipeline_ber_adaptive(const PilotSet& pilot, const BlockMapping& map,
                             double a) {
  int order = map.order();
  return pipeline_ber(pilot, map, [&](std::span<const double> m) {
    return detect_adaptive(m, a, order);
  });
}

int tune_static(const PilotSet& pilot, const BlockMapping& map, int m_norm,
                bool constrained_guard, Execution exec) {
  check_pilot(pilot);
  if (m_norm < 1) throw std::invalid_argument("threshold range is empty");
  auto values = eval_grid(
      static_cast<size_t>(m_norm),
      [&](size_t g) {
        return pipeline_ber_static(pilot, map, static_cast<double>(g + 1),
                                   constrained_guard);
      },
      exec);
  return static_cast<int>(argmin_index(values)) + 1;
}

double tune_adaptive(const PilotSet& pilot, const BlockMapping& map,
                     double step, Execution exec) {
  check_pilot(pilot);
  if (step <= 0.0 || step > 1.0) throw std::invalid_argument("bad step");
  size_t count = static_cast<size_t>(std::floor(1.0 / step + 0.5)) + 1;
  auto values = eval_grid(
      count,
      [&](size_t g) {
        double a = std::min(1.0, static_cast<double>(g) * step);
        return pipeline_ber_adaptive(pilot, map, a);
      },
      exec);
  return std::min(1.0, static_cast<double>(argmin_index(values)) * step);
}

}  // namespace rlim
