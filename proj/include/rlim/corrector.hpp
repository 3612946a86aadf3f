#pragma once

#include "rlim/codebook.hpp"
#include "rlim/rng.hpp"
#include "rlim/word.hpp"

namespace rlim {

enum class TiePolicy { FirstWins, LastWins, Random };

// One-pass greedy correction: keep a 1 only if it is more than `order`
// positions past the last kept 1 (position 0 acts as a virtual 1, which
// forces the leading zeros). Output is a minimum-Hamming-distance member of
// the leading-zeros RLL family.
Word correct_greedy(Word y, int order);

// Reference trellis decoder over states {0..order}: 0-edges s -> min(s+1,
// order), a 1-edge only from the top state back to 0. Minimum Hamming
// distance with explicit tie handling; LastWins prefers the self-loop and the
// largest terminal state and reproduces correct_greedy bit-for-bit. Random
// draws one uniform per realized tie from `rng` (required for that policy).
Word correct_viterbi(Word y, int order, TiePolicy policy, Philox* rng = nullptr);

// Clear the rightmost 1 until the word is a codebook member. From the zero
// word, fall back to the codeword with its single 1 at position order+1
// (or the smallest codeword if a tiny subset lacks it).
Word project_to_codebook(Word x, const Codebook& cb);

}  // namespace rlim
