#include "rlim/codec.hpp"

namespace rlim {

BlockMapping::BlockMapping(Codebook cb) : cb_(std::move(cb)) {
  if (!cb_.block_k)
    throw std::invalid_argument("mapping requires a block codebook (k set)");
  k_ = *cb_.block_k;
  if (cb_.words.size() != (size_t(1) << k_))
    throw std::invalid_argument("block codebook size is not 2^k");
}

Word BlockMapping::encode(uint64_t info) const {
  if (info >= cb_.words.size())
    throw std::invalid_argument("info block out of range");
  return cb_.at(info);
}

uint64_t BlockMapping::decode(Word cw) const {
  if (cw.n != cb_.length)
    throw std::invalid_argument("codeword length mismatch");
  auto idx = cb_.index_of(cw.bits);
  if (!idx) throw CodewordNotFound("codeword not in block codebook: " + cw.str());
  return *idx;
}

std::vector<uint8_t> BlockMapping::encode_stream(
    const std::vector<uint8_t>& info) const {
  if (info.size() % k_ != 0)
    throw std::invalid_argument("info stream length not a multiple of k");
  std::vector<uint8_t> out;
  out.reserve(info.size() / k_ * cb_.length);
  for (size_t b = 0; b < info.size(); b += k_) {
    uint64_t v = 0;
    for (int j = 0; j < k_; ++j) v = (v << 1) | (info[b + j] & 1);
    Word cw = encode(v);
    for (int t = 1; t <= cw.n; ++t) out.push_back(static_cast<uint8_t>(cw.bit(t)));
  }
  return out;
}

std::vector<uint8_t> BlockMapping::decode_stream(
    const std::vector<uint8_t>& coded) const {
  size_t n = static_cast<size_t>(cb_.length);
  if (coded.size() % n != 0)
    throw std::invalid_argument("coded stream length not a multiple of n");
  std::vector<uint8_t> out;
  out.reserve(coded.size() / n * k_);
  for (size_t b = 0; b < coded.size(); b += n) {
    Word w{0, cb_.length};
    for (int t = 1; t <= cb_.length; ++t)
      if (coded[b + t - 1]) w.set_bit(t, 1);
    uint64_t v = decode(w);
    for (int j = k_ - 1; j >= 0; --j)
      out.push_back(static_cast<uint8_t>((v >> j) & 1));
  }
  return out;
}

}  // namespace rlim
