#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rlim/codebook.hpp"

namespace rlim {

// Raised when decode sees a word outside the codebook -- that means the
// corrector's projection step was skipped or broken upstream.
struct CodewordNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bijection between k-bit info blocks and the sorted codebook: the info
// block read as an MSB-first integer is the codeword's sorted index.
class BlockMapping {
 public:
  explicit BlockMapping(Codebook cb);

  int block_bits() const { return k_; }
  int word_bits() const { return cb_.length; }
  int order() const { return cb_.order; }
  const Codebook& codebook() const { return cb_; }

  Word encode(uint64_t info) const;
  uint64_t decode(Word cw) const;

  // Bit streams as vectors of 0/1 bytes; lengths must divide evenly.
  std::vector<uint8_t> encode_stream(const std::vector<uint8_t>& info) const;
  std::vector<uint8_t> decode_stream(const std::vector<uint8_t>& coded) const;

 private:
  Codebook cb_;
  int k_;
};

}  // namespace rlim
