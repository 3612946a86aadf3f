#include "rlim/corrector.hpp"

#include <algorithm>
#include <vector>

namespace rlim {

Word correct_greedy(Word y, int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  Word out{0, y.n};
  int last = 0;  // virtual 1 at position 0 enforces the leading-zero prefix
  for (int t = 1; t <= y.n; ++t) {
    if (y.bit(t) && t - last > order) {
      out.set_bit(t, 1);
      last = t;
    }
  }
  return out;
}

Word correct_viterbi(Word y, int order, TiePolicy policy, Philox* rng) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (policy == TiePolicy::Random && rng == nullptr)
    throw std::invalid_argument("random tie policy needs a generator");

  const int S = order + 1;
  const int n = y.n;
  constexpr int kInf = 1 << 20;

  std::vector<int> cost(S, kInf), ncost(S);
  std::vector<std::vector<int8_t>> pred(n, std::vector<int8_t>(S, -1));
  cost[0] = 0;

  for (int t = 1; t <= n; ++t) {
    int miss0 = y.bit(t);      // emitting 0 against y_t
    int miss1 = 1 - y.bit(t);  // emitting 1 against y_t
    auto& bp = pred[t - 1];

    // state 0 is reachable only from the top state via the 1-edge
    ncost[0] = cost[order] + miss1;
    bp[0] = static_cast<int8_t>(order);
    // states 1..order-1 have the single 0-edge predecessor s-1
    for (int s = 1; s < order; ++s) {
      ncost[s] = cost[s - 1] + miss0;
      bp[s] = static_cast<int8_t>(s - 1);
    }
    // the top state merges the 0-edges from order-1 and its own self-loop
    {
      int from_prev = cost[order - 1];
      int from_self = cost[order];
      int keep;  // predecessor index
      if (from_prev < from_self) keep = order - 1;
      else if (from_self < from_prev) keep = order;
      else switch (policy) {
        case TiePolicy::FirstWins: keep = order - 1; break;
        case TiePolicy::LastWins: keep = order; break;
        default: keep = (rng->next_unit() <= 0.5) ? order - 1 : order; break;
      }
      ncost[order] = cost[keep] + miss0;
      bp[order] = static_cast<int8_t>(keep);
    }
    cost = ncost;
  }

  // terminal selection over all states
  int best = *std::min_element(cost.begin(), cost.end());
  std::vector<int> tied;
  for (int s = 0; s < S; ++s)
    if (cost[s] == best) tied.push_back(s);
  int term;
  if (tied.size() == 1) term = tied[0];
  else switch (policy) {
    case TiePolicy::FirstWins: term = tied.front(); break;
    case TiePolicy::LastWins: term = tied.back(); break;
    default: {
      double u = rng->next_unit();
      size_t idx = std::min(tied.size() - 1,
                            static_cast<size_t>(u * tied.size()));
      term = tied[idx];
      break;
    }
  }

  // backtrack; a step into state 0 is the only 1-emission
  Word out{0, n};
  int s = term;
  for (int t = n; t >= 1; --t) {
    if (s == 0) out.set_bit(t, 1);
    s = pred[t - 1][s];
  }
  return out;
}

Word project_to_codebook(Word x, const Codebook& cb) {
  if (x.n != cb.length)
    throw std::invalid_argument("word length does not match codebook");
  uint64_t v = x.bits;
  while (v != 0 && !cb.contains(v)) v &= v - 1;  // drop rightmost 1
  if (v != 0 || cb.contains(0)) return Word{v, cb.length};
  uint64_t fallback = uint64_t(1) << (cb.length - cb.order - 1);
  if (cb.contains(fallback)) return Word{fallback, cb.length};
  return Word{cb.words.front(), cb.length};
}

}  // namespace rlim
