#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rlim/codec.hpp"
#include "rlim/execution.hpp"
#include "rlim/word.hpp"

namespace rlim {

// Plain per-position thresholding, no structural guard (baseline schemes).
std::vector<uint8_t> threshold_stream(std::span<const double> m, double tau);

// Static detection for constrained words: threshold everywhere; if positions
// order+1..n come out all zero, promote the argmax of that window (ties to
// the smallest index); an all-zero count vector maps straight to the word
// with its single 1 at position order+1.
Word detect_static(std::span<const double> m, double tau, int order);

// Per-word threshold a*m_min + (1-a)*m_max, extrema taken over positions
// order+1..n only.
Word detect_adaptive(std::span<const double> m, double a, int order);

// Windowed detection for schemes without the one-1 guarantee: per window of
// `spacing` counts, all zeros when the window max is below floor_min,
// otherwise threshold at a*wmin + (1-a)*wmax. A short tail window is
// processed by the same rule.
std::vector<uint8_t> detect_baseline_dynamic(std::span<const double> m,
                                             double a, double floor_min,
                                             int spacing);

// Evaluate f over [0, count); Parallel runs the OpenMP sweep, Serial the
// reference loop. Output is identical either way (f must be pure).
std::vector<double> eval_grid(size_t count,
                              const std::function<double(size_t)>& f,
                              Execution exec);

// Ties resolve to the smallest index.
size_t argmin_index(const std::vector<double>& values);

// Receiver-known pilot transmissions: one count stream per run with the
// matching info bits.
struct PilotSet {
  std::vector<std::vector<double>> counts;
  std::vector<std::vector<uint8_t>> truth;
};

// BER of the detect -> greedy-correct -> project -> decode pipeline on a
// pilot set, with either a fixed static threshold or an adaptive scale.
double pipeline_ber_static(const PilotSet& pilot, const BlockMapping& map,
                           double tau, bool constrained_guard);
double pipeline_ber_adaptive(const PilotSet& pilot, const BlockMapping& map,
                             double a);

// Grid tuners: integer thresholds 1..m_norm, or a in {0, step, .., 1}.
// Ties go to the smallest candidate; empty pilots are rejected.
int tune_static(const PilotSet& pilot, const BlockMapping& map, int m_norm,
                bool constrained_guard, Execution exec = Execution::Parallel);
double tune_adaptive(const PilotSet& pilot, const BlockMapping& map,
                     double step = 0.005, Execution exec = Execution::Parallel);

}  // namespace rlim
