#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlim/word.hpp"

namespace rlim {

// Ordered codeword set with shared length. `words` holds the binary values
// (MSB-first over `length` bits), sorted ascending, no duplicates.
struct Codebook {
  std::vector<uint64_t> words;
  int order = 0;
  int length = 0;
  std::optional<int> block_k;
  uint64_t total_ones = 0;

  size_t size() const { return words.size(); }
  Word at(size_t idx) const { return Word{words[idx], length}; }
  bool contains(uint64_t value) const;
  std::optional<size_t> index_of(uint64_t value) const;
};

// |C_i(n)|: words of length n where every 1 is followed by at least
// min(i, bits remaining) zeros. Recursion with overflow checks, n <= 64.
uint64_t count_d_limited(int order, int n);

// All codewords with `order` leading zeros and at least one 1 (zero word
// dropped), sorted ascending by binary value.
Codebook generate_rlim(int order, int n);

// Same family but the all-zero word is kept (classical RLL form).
Codebook generate_rll(int order, int n);

enum class SubsetPolicy { MinWeight, Lexicographic };

// 2^k-element subset: MinWeight takes whole weight classes from the lightest
// up, breaking the boundary class by smallest binary value; Lexicographic
// takes the 2^k smallest values. Result is sorted ascending with block_k set.
Codebook select_subset(const Codebook& cb, int k, SubsetPolicy policy);

// Smallest n with |RLIM_i(n)| >= 2^k.
int min_length_for_block(int order, int k);

struct Capacity {
  double lambda;  // real root > 1 of x^(i+1) = x^i + 1
  double c;       // log2(lambda)
};
Capacity shannon_capacity(int order);

// Text format: `RLIM i=<i> n=<n> k=<k> ones=<total>` then one ASCII 0/1
// codeword per line, ascending. k=0 means no block subset was selected.
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

}  // namespace rlim
