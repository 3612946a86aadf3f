#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rlim/channel.hpp"
#include "rlim/particle.hpp"

namespace rlim {

// ASCII bit files: '0'/'1' characters, all whitespace ignored.
std::vector<uint8_t> read_bits_file(const std::string& path);
void write_bits_file(const std::string& path, const std::vector<uint8_t>& bits,
                     int wrap = 64);

// Per-interval observation trace.  The seed that produced the trace rides
// along in a comment line so a run can be reproduced from the file alone.
struct CountsFile {
  uint64_t seed = 0;
  std::vector<uint8_t> tx;
  std::vector<double> counts;
};

void write_counts_csv(const std::string& path, uint64_t seed,
                      const std::vector<uint8_t>& tx,
                      const std::vector<double>& counts);
CountsFile read_counts_csv(const std::string& path);

// Minimal key=value config reader: one pair per line, '#' starts a comment,
// values may be comma-separated lists.
using KvMap = std::map<std::string, std::string>;

KvMap read_kv_file(const std::string& path);
KvMap parse_kv_text(const std::string& text);

bool kv_has(const KvMap& kv, const std::string& key);
std::string kv_get(const KvMap& kv, const std::string& key);
std::string kv_get_or(const KvMap& kv, const std::string& key,
                      const std::string& fallback);
double kv_double(const KvMap& kv, const std::string& key, double fallback);
int64_t kv_int(const KvMap& kv, const std::string& key, int64_t fallback);
std::vector<std::string> split_list(const std::string& value);
std::vector<double> kv_double_list(const KvMap& kv, const std::string& key);

// Channel / tracking parameter blocks from a config map.  Unknown keys are
// ignored so one file can feed several consumers.
ChannelParams channel_from_kv(const KvMap& kv);
DriftParams drift_from_kv(const KvMap& kv);

}  // namespace rlim
