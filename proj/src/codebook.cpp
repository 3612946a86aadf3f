#include "rlim/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rlim {

namespace {

constexpr uint64_t kMaterializeLimit = uint64_t(1) << 24;

void check_order(int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
}

// Ascending values of all d-limited words of length m. Built bottom-up:
// words starting with 0 are C_i(m-1) unchanged; words starting with 1 have
// min(i, m-1) forced zeros and then any word of length m-1-i.
std::vector<uint64_t> gen_values(int order, int m) {
  std::vector<std::vector<uint64_t>> memo(m + 1);
  memo[0] = {0};
  for (int len = 1; len <= m; ++len) {
    const auto& zero_part = memo[len - 1];
    const auto& one_part = memo[std::max(len - 1 - order, 0)];
    if (zero_part.size() + one_part.size() > kMaterializeLimit)
      throw std::runtime_error("codebook too large to materialize");
    auto& out = memo[len];
    out.reserve(zero_part.size() + one_part.size());
    out = zero_part;
    uint64_t top = uint64_t(1) << (len - 1);
    for (uint64_t v : one_part) out.push_back(top | v);
  }
  return std::move(memo[m]);
}

uint64_t sum_ones(const std::vector<uint64_t>& words) {
  uint64_t total = 0;
  for (uint64_t v : words) total += std::popcount(v);
  return total;
}

}  // namespace

bool Codebook::contains(uint64_t value) const {
  return std::binary_search(words.begin(), words.end(), value);
}

std::optional<size_t> Codebook::index_of(uint64_t value) const {
  auto it = std::lower_bound(words.begin(), words.end(), value);
  if (it == words.end() || *it != value) return std::nullopt;
  return static_cast<size_t>(it - words.begin());
}

uint64_t count_d_limited(int order, int n) {
  check_order(order);
  if (n < 0 || n > 64) throw std::invalid_argument("length must be in [0, 64]");
  std::vector<uint64_t> c(static_cast<size_t>(n) + 1);
  c[0] = 1;
  for (int j = 1; j <= n; ++j) {
    if (j <= order + 1) {
      c[j] = static_cast<uint64_t>(j) + 1;
    } else {
      uint64_t s;
      if (__builtin_add_overflow(c[j - 1], c[j - 1 - order], &s))
        throw std::overflow_error("d-limited count overflows 64 bits");
      c[j] = s;
    }
  }
  return c[n];
}

Codebook generate_rll(int order, int n) {
  check_order(order);
  if (n <= order) throw std::invalid_argument("length must exceed order");
  if (n > 64) throw std::invalid_argument("length must be <= 64");
  Codebook cb;
  cb.order = order;
  cb.length = n;
  cb.words = gen_values(order, n - order);
  cb.total_ones = sum_ones(cb.words);
  return cb;
}

Codebook generate_rlim(int order, int n) {
  Codebook cb = generate_rll(order, n);
  // zero word is always the first element of the ascending list
  cb.words.erase(cb.words.begin());
  cb.total_ones = sum_ones(cb.words);
  return cb;
}

Codebook select_subset(const Codebook& cb, int k, SubsetPolicy policy) {
  if (k < 1 || k > 30) throw std::invalid_argument("block length out of range");
  size_t want = size_t(1) << k;
  if (cb.words.size() < want)
    throw std::invalid_argument("codebook smaller than 2^k");

  Codebook out;
  out.order = cb.order;
  out.length = cb.length;
  out.block_k = k;

  if (policy == SubsetPolicy::Lexicographic) {
    out.words.assign(cb.words.begin(), cb.words.begin() + want);
  } else {
    // Whole weight classes from the lightest up; each bucket inherits the
    // ascending value order from the scan, so the boundary class is already
    // cut at the smallest binary values.
    int max_w = 0;
    for (uint64_t v : cb.words) max_w = std::max(max_w, std::popcount(v));
    std::vector<std::vector<uint64_t>> buckets(max_w + 1);
    for (uint64_t v : cb.words) buckets[std::popcount(v)].push_back(v);
    out.words.reserve(want);
    for (int w = 0; w <= max_w && out.words.size() < want; ++w) {
      size_t room = want - out.words.size();
      size_t take = std::min(room, buckets[w].size());
      out.words.insert(out.words.end(), buckets[w].begin(),
                       buckets[w].begin() + take);
    }
    std::sort(out.words.begin(), out.words.end());
  }
  out.total_ones = sum_ones(out.words);
  return out;
}

int min_length_for_block(int order, int k) {
  check_order(order);
  if (k < 1) throw std::invalid_argument("block length must be >= 1");
  uint64_t want = uint64_t(1) << k;
  for (int n = order + 1;; ++n) {
    if (count_d_limited(order, n - order) - 1 >= want) return n;
  }
}

Capacity shannon_capacity(int order) {
  check_order(order);
  auto f = [order](double x) {
    return std::pow(x, order + 1) - std::pow(x, order) - 1.0;
  };
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  double lambda = 0.5 * (lo + hi);
  return {lambda, std::log2(lambda)};
}

void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "RLIM i=" << cb.order << " n=" << cb.length
      << " k=" << cb.block_k.value_or(0) << " ones=" << cb.total_ones << "\n";
  for (uint64_t v : cb.words) out << Word{v, cb.length}.str() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("empty codebook file: " + path);

  int i = -1, n = -1, k = -1;
  uint64_t ones = 0;
  {
    std::istringstream hs(header);
    std::string magic, tok;
    hs >> magic;
    if (magic != "RLIM")
      throw std::runtime_error("bad codebook header in " + path);
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      std::string key = tok.substr(0, eq);
      std::string val = tok.substr(eq + 1);
      if (key == "i") i = std::stoi(val);
      else if (key == "n") n = std::stoi(val);
      else if (key == "k") k = std::stoi(val);
      else if (key == "ones") ones = std::stoull(val);
    }
  }
  if (i < 1 || n <= i || k < 0)
    throw std::runtime_error("bad codebook header fields in " + path);

  Codebook cb;
  cb.order = i;
  cb.length = n;
  if (k > 0) cb.block_k = k;

  std::string line;
  uint64_t prev = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != n)
      throw std::runtime_error("codeword length mismatch in " + path);
    Word w = word_from_string(line);
    if (!is_rll_word(w, i))
      throw std::runtime_error("constraint violation in " + path + ": " + line);
    if (!first && w.bits <= prev)
      throw std::runtime_error("codewords not strictly ascending in " + path);
    prev = w.bits;
    first = false;
    cb.words.push_back(w.bits);
  }
  cb.total_ones = sum_ones(cb.words);
  if (cb.total_ones != ones)
    throw std::runtime_error("ones total mismatch in " + path);
  if (cb.block_k && cb.words.size() != (size_t(1) << *cb.block_k))
    throw std::runtime_error("block codebook has wrong size in " + path);
  return cb;
}

}  // namespace rlim
