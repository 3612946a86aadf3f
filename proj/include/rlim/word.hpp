#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlim {

// Fixed-width binary word, at most 64 bits. Position 1 is the first
// transmitted bit and the MSB for value ordering; position n is the last.
struct Word {
  uint64_t bits = 0;
  int n = 0;

  bool operator==(const Word&) const = default;

  int bit(int pos) const { return static_cast<int>((bits >> (n - pos)) & 1u); }

  void set_bit(int pos, int v) {
    uint64_t m = uint64_t(1) << (n - pos);
    if (v) bits |= m; else bits &= ~m;
  }

  int weight() const { return std::popcount(bits); }

  std::string str() const {
    std::string s(n, '0');
    for (int t = 1; t <= n; ++t)
      if (bit(t)) s[t - 1] = '1';
    return s;
  }
};

inline Word word_from_string(const std::string& s) {
  if (s.empty() || s.size() > 64)
    throw std::invalid_argument("word string must have 1..64 characters");
  Word w{0, static_cast<int>(s.size())};
  for (size_t t = 0; t < s.size(); ++t) {
    if (s[t] != '0' && s[t] != '1')
      throw std::invalid_argument("word string may contain only 0/1");
    if (s[t] == '1') w.set_bit(static_cast<int>(t) + 1, 1);
  }
  return w;
}

// True when every 1 at position t is followed by min(i, n-t) zeros.
inline bool is_d_limited(Word w, int order) {
  for (int t = 1; t <= w.n; ++t) {
    if (!w.bit(t)) continue;
    int need = std::min(order, w.n - t);
    for (int s = t + 1; s <= t + need; ++s)
      if (w.bit(s)) return false;
  }
  return true;
}

inline bool is_rll_word(Word w, int order) {
  for (int t = 1; t <= std::min(order, w.n); ++t)
    if (w.bit(t)) return false;
  return is_d_limited(w, order);
}

inline bool is_rlim_word(Word w, int order) {
  return w.bits != 0 && is_rll_word(w, order);
}

}  // namespace rlim
