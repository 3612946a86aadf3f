#include "rlim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rlim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric value for " + what + ": '" + s +
                             "'");
  }
}

int64_t to_int(const std::string& s, const std::string& what) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("bad integer value for " + what + ": '" + s +
                             "'");
  return v;
}

}  // namespace

std::vector<uint8_t> read_bits_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<uint8_t> bits;
  char c;
  while (in.get(c)) {
    if (c == '0')
      bits.push_back(0);
    else if (c == '1')
      bits.push_back(1);
    else if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
      continue;
    else
      throw std::runtime_error("unexpected character '" + std::string(1, c) +
                               "' in bits file " + path);
  }
  return bits;
}

void write_bits_file(const std::string& path, const std::vector<uint8_t>& bits,
                     int wrap) {
  std::ofstream out = open_out(path);
  for (size_t i = 0; i < bits.size(); ++i) {
    out << (bits[i] ? '1' : '0');
    if (wrap > 0 && (i + 1) % static_cast<size_t>(wrap) == 0) out << '\n';
  }
  if (bits.empty() || wrap <= 0 || bits.size() % static_cast<size_t>(wrap))
    out << '\n';
}

void write_counts_csv(const std::string& path, uint64_t seed,
                      const std::vector<uint8_t>& tx,
                      const std::vector<double>& counts) {
  if (tx.size() != counts.size())
    throw std::invalid_argument("tx/count length mismatch");
  std::ofstream out = open_out(path);
  out << "# generator=philox4x32-10 seed=" << seed << "\n";
  out << "interval_index,tx_bit,count\n";
  out.precision(17);
  for (size_t i = 0; i < counts.size(); ++i)
    out << i << ',' << int(tx[i]) << ',' << counts[i] << "\n";
}

CountsFile read_counts_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  CountsFile cf;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      size_t pos = t.find("seed=");
      if (pos != std::string::npos)
        cf.seed = static_cast<uint64_t>(
            to_int(trim(t.substr(pos + 5)), "seed comment"));
      continue;
    }
    if (!header_seen) {
      if (t != "interval_index,tx_bit,count")
        throw std::runtime_error("unexpected counts header in " + path);
      header_seen = true;
      continue;
    }
    std::vector<std::string> cols = split_list(t);
    if (cols.size() != 3)
      throw std::runtime_error("malformed counts row in " + path);
    size_t idx = static_cast<size_t>(to_int(cols[0], "interval_index"));
    if (idx != cf.counts.size())
      throw std::runtime_error("non-contiguous interval_index in " + path);
    int bit = static_cast<int>(to_int(cols[1], "tx_bit"));
    if (bit != 0 && bit != 1)
      throw std::runtime_error("tx_bit must be 0/1 in " + path);
    cf.tx.push_back(static_cast<uint8_t>(bit));
    cf.counts.push_back(to_double(cols[2], "count"));
  }
  if (!header_seen) throw std::runtime_error("missing counts header in " + path);
  return cf;
}

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("expected key=value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("empty key in config line");
    kv[key] = value;
  }
  return kv;
}

KvMap read_kv_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

bool kv_has(const KvMap& kv, const std::string& key) {
  return kv.find(key) != kv.end();
}

std::string kv_get(const KvMap& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing config key: " + key);
  return it->second;
}

std::string kv_get_or(const KvMap& kv, const std::string& key,
                      const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double kv_double(const KvMap& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : to_double(it->second, key);
}

int64_t kv_int(const KvMap& kv, const std::string& key, int64_t fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : to_int(it->second, key);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(value);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  if (!value.empty() && value.back() == ',') out.push_back("");
  return out;
}

std::vector<double> kv_double_list(const KvMap& kv, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(kv_get(kv, key)))
    out.push_back(to_double(item, key));
  return out;
}

ChannelParams channel_from_kv(const KvMap& kv) {
  ChannelParams p;
  p.D = kv_double(kv, "D", p.D);
  p.r_r = kv_double(kv, "r_r", p.r_r);
  p.r_0 = kv_double(kv, "r_0", p.r_0);
  p.t_s = kv_double(kv, "t_s", p.t_s);
  p.M = static_cast<int>(kv_int(kv, "M", p.M));
  p.sigma_n2 = kv_double(kv, "sigma_n2", p.sigma_n2);
  p.memory = static_cast<int>(kv_int(kv, "memory", p.memory));
  validate_channel(p);
  return p;
}

DriftParams drift_from_kv(const KvMap& kv) {
  DriftParams dp;
  dp.dt = kv_double(kv, "dt", dp.dt);
  dp.tau_drift = kv_double(kv, "tau_drift", dp.tau_drift);
  dp.sigma_v = kv_double(kv, "sigma_v", dp.sigma_v);
  dp.max_age = kv_double(kv, "max_age", dp.max_age);
  if (kv_has(kv, "v_mean")) {
    std::vector<double> v = kv_double_list(kv, "v_mean");
    if (v.size() != 3)
      throw std::runtime_error("v_mean needs three components");
    dp.v_mean = {v[0], v[1], v[2]};
  }
  return dp;
}

}  // namespace rlim
