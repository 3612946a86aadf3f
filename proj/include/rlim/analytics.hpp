#pragma once

#include <cstdint>
#include <string>

#include "rlim/channel.hpp"
#include "rlim/codebook.hpp"

namespace rlim {

// Exact occupancy statistics of a codebook, expressed as integer numerators
// over a common denominator (|codebook| * n) so callers can form ratios
// without rounding.  "isolated zeros" are zero positions that cannot collect
// interference from a 1 in the preceding `order` slots of the same word.
struct SymbolClassProbs {
  uint64_t ones_num = 0;
  uint64_t isolated_zeros_num = 0;
  uint64_t denom = 0;
};

SymbolClassProbs symbol_class_probs(const Codebook& cb);

// First and second moments of the received count at the two decision-relevant
// slot classes, derived from the channel taps.  `a`/`b` are mean/variance at
// an isolated zero, `c`/`d` at a transmitted one.  `terms` controls how many
// worst-case interferers (spaced order+1 apart) are included.
struct ThresholdMoments {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

ThresholdMoments interference_moments(const ChannelParams& p, int order,
                                      int terms = 3);

// Upper-tail probability of a standard normal.
double q_function(double x);

// Probability that a threshold `tau` classifies both slot classes correctly,
// weighted by the codebook occupancy probabilities.
double success_probability(const ThresholdMoments& m,
                           const SymbolClassProbs& probs, double tau);

struct ThresholdEstimate {
  bool ok = false;
  double tau = 0.0;
  std::string note;
};

// Closed-form stationary point of success_probability in tau.  Falls back to
// the equal-variance formula when b and d coincide, and reports failure (with
// a reason) when the geometry admits no interior optimum.
ThresholdEstimate estimate_threshold(const ThresholdMoments& m,
                                     const SymbolClassProbs& probs);

}  // namespace rlim
