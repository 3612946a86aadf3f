#include "rlim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>

#include "rlim/corrector.hpp"

namespace rlim {

namespace {

constexpr uint64_t kTestRunOffset = uint64_t(1) << 32;

uint64_t subseed(uint64_t master, uint64_t run_index) {
  return Philox(master, stream::kind(stream::kRunSeed, run_index)).next_u64();
}

std::vector<uint8_t> random_bits(uint64_t count, Philox rng) {
  std::vector<uint8_t> bits(count);
  for (auto& b : bits) b = static_cast<uint8_t>(rng.next_u32() & 1u);
  return bits;
}

uint64_t mismatches(const std::vector<uint8_t>& a,
                    const std::vector<uint8_t>& b) {
  if (a.size() != b.size())
    throw std::logic_error("bit stream length mismatch");
  uint64_t d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Shortest round-trip text for a double; keeps the CSV byte-stable across
// rewrites of the same record.
std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

int parity(int a, int b, int c) { return (a + b + c) & 1; }

Word word_from_bits(std::span<const uint8_t> bits) {
  Word w{0, static_cast<int>(bits.size())};
  for (int t = 1; t <= w.n; ++t)
    if (bits[static_cast<size_t>(t) - 1]) w.set_bit(t, 1);
  return w;
}

void append_block_bits(std::vector<uint8_t>& out, uint64_t value, int k) {
  for (int b = k - 1; b >= 0; --b)
    out.push_back(static_cast<uint8_t>((value >> b) & 1u));
}

}  // namespace

Scheme make_scheme(const std::string& name, int k) {
  if (k < 1 || k > 32) throw std::invalid_argument("k must be in 1..32");
  Scheme sc;
  sc.name = name;
  sc.k = k;
  uint64_t blocks = uint64_t(1) << k;
  if (name == "uncoded") {
    sc.family = Family::Uncoded;
    sc.n = k;
    sc.stats = {blocks * static_cast<uint64_t>(k),
                blocks / 2 * static_cast<uint64_t>(k), k};
    return sc;
  }
  if (name == "hamming74") {
    if (k % 4)
      throw std::invalid_argument("hamming74 needs k divisible by 4");
    sc.family = Family::Hamming74;
    sc.n = 7 * k / 4;
    // Each 4-bit sub-block contributes 56 ones over its own 16 words; a
    // sub-block value repeats 2^(k-4) times across the full info set.
    sc.stats = {blocks * static_cast<uint64_t>(sc.n),
                static_cast<uint64_t>(k / 4) * 56u * (blocks >> 4), k};
    return sc;
  }
  if (name == "isifree") {
    if (k % 2) throw std::invalid_argument("isifree needs k divisible by 2");
    sc.family = Family::IsiFree;
    sc.n = 2 * k;
    sc.stats = {blocks * static_cast<uint64_t>(sc.n),
                blocks * static_cast<uint64_t>(k), k};
    return sc;
  }
  Family fam;
  std::string base;
  if (name.rfind("rlim", 0) == 0) {
    fam = Family::Rlim;
    base = name.substr(4);
  } else if (name.rfind("rll", 0) == 0) {
    fam = Family::Rll;
    base = name.substr(3);
  } else {
    throw std::invalid_argument("unknown scheme: " + name);
  }
  if (base.size() != 1 || base[0] < '1' || base[0] > '4')
    throw std::invalid_argument("scheme order must be 1..4: " + name);
  int order = base[0] - '0';
  int n = min_length_for_block(order, k);
  Codebook full = fam == Family::Rlim ? generate_rlim(order, n)
                                      : generate_rll(order, n);
  Codebook sub = select_subset(full, k,
                               fam == Family::Rlim ? SubsetPolicy::MinWeight
                                                   : SubsetPolicy::Lexicographic);
  sc.family = fam;
  sc.order = order;
  sc.n = n;
  sc.stats = {static_cast<uint64_t>(n) * blocks, sub.total_ones, k};
  sc.map.emplace(std::move(sub));
  return sc;
}

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names = {
      "rlim1", "rlim2", "rlim3", "rlim4", "rll1",     "rll2",
      "rll3",  "rll4",  "uncoded", "hamming74", "isifree"};
  return names;
}

std::vector<uint8_t> hamming74_encode(const std::vector<uint8_t>& data) {
  if (data.size() != 4) throw std::invalid_argument("hamming74: need 4 bits");
  int d1 = data[0], d2 = data[1], d3 = data[2], d4 = data[3];
  std::vector<uint8_t> c(7);
  c[0] = static_cast<uint8_t>(parity(d1, d2, d4));  // p1
  c[1] = static_cast<uint8_t>(parity(d1, d3, d4));  // p2
  c[2] = static_cast<uint8_t>(d1);
  c[3] = static_cast<uint8_t>(parity(d2, d3, d4));  // p3
  c[4] = static_cast<uint8_t>(d2);
  c[5] = static_cast<uint8_t>(d3);
  c[6] = static_cast<uint8_t>(d4);
  return c;
}

std::vector<uint8_t> hamming74_decode(const std::vector<uint8_t>& code) {
  if (code.size() != 7) throw std::invalid_argument("hamming74: need 7 bits");
  std::vector<uint8_t> c = code;
  int s1 = c[0] ^ c[2] ^ c[4] ^ c[6];
  int s2 = c[1] ^ c[2] ^ c[5] ^ c[6];
  int s3 = c[3] ^ c[4] ^ c[5] ^ c[6];
  int pos = s1 + 2 * s2 + 4 * s3;  // 1-based position of the flipped bit
  if (pos) c[pos - 1] ^= 1;
  return {c[2], c[4], c[5], c[6]};
}

std::vector<uint8_t> scheme_encode(const Scheme& sc,
                                   const std::vector<uint8_t>& info) {
  if (info.size() % static_cast<size_t>(sc.k))
    throw std::invalid_argument("info length must divide by k");
  switch (sc.family) {
    case Family::Uncoded:
      return info;
    case Family::Hamming74: {
      std::vector<uint8_t> out;
      out.reserve(info.size() / 4 * 7);
      for (size_t off = 0; off < info.size(); off += 4) {
        std::vector<uint8_t> block(info.begin() + off, info.begin() + off + 4);
        std::vector<uint8_t> code = hamming74_encode(block);
        out.insert(out.end(), code.begin(), code.end());
      }
      return out;
    }
    case Family::Rlim:
    case Family::Rll:
      return sc.map->encode_stream(info);
    case Family::IsiFree:
      break;
  }
  throw std::runtime_error(
      "isifree is registered for resource accounting only; its codeword "
      "construction is out of scope for this library");
}

std::string TunedDetection::str() const {
  std::ostringstream os;
  switch (mode) {
    case DetectionMode::Static:
      os << "tau=" << fmt(tau);
      break;
    case DetectionMode::Adaptive:
      os << "a=" << fmt(a);
      break;
    case DetectionMode::Baseline:
      os << "a=" << fmt(a) << ";min=" << fmt(floor_min)
         << ";spacing=" << spacing;
      break;
  }
  return os.str();
}

std::string tuned_to_text(const TunedDetection& td) {
  std::ostringstream os;
  os << "mode=" << detection_label(td.mode) << "\n";
  switch (td.mode) {
    case DetectionMode::Static:
      os << "tau=" << fmt(td.tau) << "\n";
      break;
    case DetectionMode::Adaptive:
      os << "a=" << fmt(td.a) << "\n";
      break;
    case DetectionMode::Baseline:
      os << "a=" << fmt(td.a) << "\n"
         << "min=" << fmt(td.floor_min) << "\n"
         << "spacing=" << td.spacing << "\n";
      break;
  }
  return os.str();
}

TunedDetection tuned_from_kv(const KvMap& kv) {
  TunedDetection td;
  td.mode = parse_detection(kv_get(kv, "mode"));
  td.tau = kv_double(kv, "tau", td.tau);
  td.a = kv_double(kv, "a", td.a);
  td.floor_min = kv_double(kv, "min", td.floor_min);
  td.spacing = static_cast<int>(kv_int(kv, "spacing", td.spacing));
  if (td.mode == DetectionMode::Baseline && td.spacing < 1)
    throw std::runtime_error("baseline detection needs spacing >= 1");
  return td;
}

std::vector<uint8_t> decode_counts(const Scheme& sc,
                                   const std::vector<double>& counts,
                                   const TunedDetection& td,
                                   CorrectorKind corrector, Philox* tie_rng) {
  if (counts.empty() || counts.size() % static_cast<size_t>(sc.n))
    throw std::invalid_argument("count stream must divide into blocks");
  std::span<const double> all(counts.data(), counts.size());

  if (sc.family == Family::Uncoded || sc.family == Family::Hamming74) {
    if (corrector != CorrectorKind::Greedy)
      throw std::invalid_argument(
          "tie-break correctors apply to the constrained families only");
    std::vector<uint8_t> raw;
    if (td.mode == DetectionMode::Static)
      raw = threshold_stream(all, td.tau);
    else if (td.mode == DetectionMode::Baseline)
      raw = detect_baseline_dynamic(all, td.a, td.floor_min, td.spacing);
    else
      throw std::invalid_argument(
          "adaptive detection needs a constrained scheme");
    if (sc.family == Family::Uncoded) return raw;
    std::vector<uint8_t> out;
    out.reserve(raw.size() / 7 * 4);
    for (size_t off = 0; off < raw.size(); off += 7) {
      std::vector<uint8_t> block(raw.begin() + off, raw.begin() + off + 7);
      std::vector<uint8_t> data = hamming74_decode(block);
      out.insert(out.end(), data.begin(), data.end());
    }
    return out;
  }
  if (sc.family == Family::IsiFree)
    throw std::invalid_argument("isifree cannot be decoded");

  if (td.mode == DetectionMode::Adaptive && sc.family != Family::Rlim)
    throw std::invalid_argument(
        "adaptive detection relies on the exactly-one-1 structure");
  if (td.mode == DetectionMode::Baseline && sc.family == Family::Rlim)
    throw std::invalid_argument(
        "baseline detection is for schemes without the one-1 guarantee");
  if (corrector == CorrectorKind::ViterbiRandom && !tie_rng)
    throw std::invalid_argument("random tie-break needs an rng");

  std::vector<uint8_t> pre;
  if (td.mode == DetectionMode::Baseline)
    pre = detect_baseline_dynamic(all, td.a, td.floor_min, td.spacing);

  const Codebook& cb = sc.map->codebook();
  std::vector<uint8_t> out;
  out.reserve(counts.size() / static_cast<size_t>(sc.n) *
              static_cast<size_t>(sc.k));
  for (size_t off = 0; off < counts.size();
       off += static_cast<size_t>(sc.n)) {
    std::span<const double> window = all.subspan(off, sc.n);
    Word w{0, sc.n};
    switch (td.mode) {
      case DetectionMode::Static:
        if (sc.family == Family::Rlim)
          w = detect_static(window, td.tau, sc.order);
        else
          w = word_from_bits(threshold_stream(window, td.tau));
        break;
      case DetectionMode::Adaptive:
        w = detect_adaptive(window, td.a, sc.order);
        break;
      case DetectionMode::Baseline:
        w = word_from_bits(
            std::span<const uint8_t>(pre.data() + off,
                                     static_cast<size_t>(sc.n)));
        break;
    }
    Word fixed{0, sc.n};
    switch (corrector) {
      case CorrectorKind::Greedy:
        fixed = correct_greedy(w, sc.order);
        break;
      case CorrectorKind::ViterbiFirst:
        fixed = correct_viterbi(w, sc.order, TiePolicy::FirstWins);
        break;
      case CorrectorKind::ViterbiLast:
        fixed = correct_viterbi(w, sc.order, TiePolicy::LastWins);
        break;
      case CorrectorKind::ViterbiRandom:
        fixed = correct_viterbi(w, sc.order, TiePolicy::Random, tie_rng);
        break;
    }
    Word member = project_to_codebook(fixed, cb);
    append_block_bits(out, sc.map->decode(member), sc.k);
  }
  return out;
}

namespace {

void validate_config(const ExperimentConfig& cfg, const Scheme& sc) {
  if (sc.family == Family::IsiFree)
    throw std::invalid_argument(
        "isifree is registered for resource accounting only; it cannot be "
        "simulated");
  if (cfg.detection == DetectionMode::Adaptive && sc.family != Family::Rlim)
    throw std::invalid_argument(
        "adaptive detection requires an rlim scheme");
  if (cfg.detection == DetectionMode::Baseline && sc.family == Family::Rlim)
    throw std::invalid_argument(
        "baseline detection is the unconstrained-scheme path; use static or "
        "adaptive with rlim");
  if (cfg.corrector != CorrectorKind::Greedy && sc.family != Family::Rlim &&
      sc.family != Family::Rll)
    throw std::invalid_argument(
        "tie-break correctors apply to rlim/rll schemes only");
  if (cfg.pilot_runs < 1 || cfg.test_runs < 1)
    throw std::invalid_argument("run counts must be positive");
  if (!cfg.fixed_detection) {
    if (cfg.pilot_bits == 0 ||
        cfg.pilot_bits % static_cast<uint64_t>(cfg.pilot_runs))
      throw std::invalid_argument("pilot_bits must divide by pilot_runs");
    if ((cfg.pilot_bits / cfg.pilot_runs) % static_cast<uint64_t>(sc.k))
      throw std::invalid_argument("pilot bits per run must divide by k");
  }
  if (cfg.test_bits == 0 ||
      cfg.test_bits % static_cast<uint64_t>(cfg.test_runs))
    throw std::invalid_argument("test_bits must divide by test_runs");
  if ((cfg.test_bits / cfg.test_runs) % static_cast<uint64_t>(sc.k))
    throw std::invalid_argument("test bits per run must divide by k");
}

std::vector<double> simulate_counts(const ExperimentConfig& cfg,
                                    const ChannelParams& run_p,
                                    const std::vector<uint8_t>& tx,
                                    uint64_t sim_seed) {
  switch (cfg.backend) {
    case Backend::Binomial:
      return simulate_binomial(tx, run_p, sim_seed);
    case Backend::Gaussian:
      return simulate_gaussian(tx, run_p, sim_seed);
    case Backend::Particle:
      return run_transmission(tx, run_p, cfg.drift, cfg.receiver,
                              cfg.drift_on, sim_seed)
          .counts;
  }
  throw std::logic_error("unreachable backend");
}

ChannelParams normalized_params(const ExperimentConfig& cfg,
                                const Scheme& sc) {
  NormalizedResources nr =
      normalize_resources(sc.stats, cfg.channel.t_s, cfg.channel.M);
  ChannelParams run_p = cfg.channel;
  run_p.t_s = nr.t_s;
  run_p.M = nr.M;
  validate_channel(run_p);
  if (cfg.backend == Backend::Particle && run_p.t_s < cfg.drift.dt)
    throw std::invalid_argument(
        "particle backend: normalized t_s is below one tracking step");
  return run_p;
}

PilotSet collect_pilot(const ExperimentConfig& cfg, const Scheme& sc,
                       const ChannelParams& run_p) {
  PilotSet pilot;
  uint64_t bits_per_run = cfg.pilot_bits / cfg.pilot_runs;
  for (int r = 0; r < cfg.pilot_runs; ++r) {
    std::vector<uint8_t> info = random_bits(
        bits_per_run,
        Philox(cfg.seed, stream::kind(stream::kInfoPilot,
                                      static_cast<uint64_t>(r))));
    std::vector<uint8_t> tx = scheme_encode(sc, info);
    pilot.counts.push_back(simulate_counts(
        cfg, run_p, tx, subseed(cfg.seed, static_cast<uint64_t>(r))));
    pilot.truth.push_back(std::move(info));
  }
  return pilot;
}

double pilot_ber_with(const Scheme& sc, const PilotSet& pilot,
                      const TunedDetection& td) {
  uint64_t errs = 0, bits = 0;
  for (size_t r = 0; r < pilot.counts.size(); ++r) {
    std::vector<uint8_t> dec =
        decode_counts(sc, pilot.counts[r], td, CorrectorKind::Greedy);
    errs += mismatches(dec, pilot.truth[r]);
    bits += pilot.truth[r].size();
  }
  return static_cast<double>(errs) / static_cast<double>(bits);
}

std::vector<int> baseline_spacing_grid(const Scheme& sc) {
  switch (sc.family) {
    case Family::Uncoded:
      return {4, 8, 16, 32};
    case Family::Hamming74:
      return {7, 14, 28};
    default:
      return {sc.n};
  }
}

TunedDetection tune_for(const Scheme& sc, const PilotSet& pilot,
                        DetectionMode mode, int m_norm, Execution exec) {
  TunedDetection td;
  td.mode = mode;
  switch (mode) {
    case DetectionMode::Static: {
      if (sc.family == Family::Rlim || sc.family == Family::Rll) {
        td.tau = tune_static(pilot, *sc.map, m_norm,
                             sc.family == Family::Rlim, exec);
        return td;
      }
      std::vector<double> bers = eval_grid(
          static_cast<size_t>(m_norm),
          [&](size_t g) {
            TunedDetection t = td;
            t.tau = static_cast<double>(g + 1);
            return pilot_ber_with(sc, pilot, t);
          },
          exec);
      td.tau = static_cast<double>(argmin_index(bers) + 1);
      return td;
    }
    case DetectionMode::Adaptive:
      td.a = tune_adaptive(pilot, *sc.map, 0.005, exec);
      return td;
    case DetectionMode::Baseline: {
      static const std::vector<double> kFloorGrid = {0,  1,  2,  5,
                                                     10, 20, 50, 100};
      const std::vector<int> spacings = baseline_spacing_grid(sc);
      const size_t na = 201, nm = kFloorGrid.size(), ns = spacings.size();
      std::vector<double> bers = eval_grid(
          na * nm * ns,
          [&](size_t g) {
            TunedDetection t = td;
            t.a = std::min(1.0, static_cast<double>(g / (nm * ns)) * 0.005);
            t.floor_min = kFloorGrid[(g / ns) % nm];
            t.spacing = spacings[g % ns];
            return pilot_ber_with(sc, pilot, t);
          },
          exec);
      size_t best = argmin_index(bers);
      td.a = std::min(1.0, static_cast<double>(best / (nm * ns)) * 0.005);
      td.floor_min = kFloorGrid[(best / ns) % nm];
      td.spacing = spacings[best % ns];
      return td;
    }
  }
  throw std::logic_error("unreachable detection mode");
}

}  // namespace

TunedDetection tune_from_pilot(const ExperimentConfig& cfg) {
  Scheme sc = make_scheme(cfg.scheme, cfg.k);
  validate_config(cfg, sc);
  if (cfg.fixed_detection) return *cfg.fixed_detection;
  ChannelParams run_p = normalized_params(cfg, sc);
  PilotSet pilot = collect_pilot(cfg, sc, run_p);
  return tune_for(sc, pilot, cfg.detection, run_p.M, cfg.exec);
}

BerRecord run_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Scheme sc = make_scheme(cfg.scheme, cfg.k);
  validate_config(cfg, sc);
  ChannelParams run_p = normalized_params(cfg, sc);

  TunedDetection tuned;
  if (cfg.fixed_detection) {
    tuned = *cfg.fixed_detection;
  } else {
    PilotSet pilot = collect_pilot(cfg, sc, run_p);
    tuned = tune_for(sc, pilot, cfg.detection, run_p.M, cfg.exec);
  }

  uint64_t errors = 0, bits = 0;
  uint64_t bits_per_run = cfg.test_bits / cfg.test_runs;
  for (int r = 0; r < cfg.test_runs; ++r) {
    std::vector<uint8_t> info = random_bits(
        bits_per_run,
        Philox(cfg.seed,
               stream::kind(stream::kInfoTest, static_cast<uint64_t>(r))));
    std::vector<uint8_t> tx = scheme_encode(sc, info);
    std::vector<double> counts = simulate_counts(
        cfg, run_p, tx,
        subseed(cfg.seed, kTestRunOffset + static_cast<uint64_t>(r)));
    Philox tie(cfg.seed, stream::kind(stream::kTie, static_cast<uint64_t>(r)));
    std::vector<uint8_t> decoded =
        decode_counts(sc, counts, tuned, cfg.corrector, &tie);
    errors += mismatches(decoded, info);
    bits += info.size();
  }

  BerRecord rec;
  rec.scheme = sc.name;
  rec.order = sc.order;
  rec.n = sc.n;
  rec.k = sc.k;
  rec.backend = backend_label(cfg.backend, cfg.receiver, cfg.drift_on);
  rec.detection = detection_label(cfg.detection);
  rec.t_s_ms = cfg.channel.t_s * 1000.0;  // anchor values: rows from
  rec.M = cfg.channel.M;                  // different schemes line up
  rec.r0_um = cfg.channel.r_0;
  rec.sigma_n2 = cfg.channel.sigma_n2;
  rec.tuned_params = tuned.str();
  rec.bits = bits;
  rec.errors = errors;
  rec.ber = static_cast<double>(errors) / static_cast<double>(bits);
  rec.seed = cfg.seed;
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

std::string results_csv_header() {
  return "schema_version,scheme,order,n,k,backend,detection,t_s_ms,M,r0_um,"
         "sigma_n2,tuned_params,bits,errors,ber,seed,wall_ms";
}

namespace {

std::string record_line(const BerRecord& r) {
  std::ostringstream os;
  os << r.schema_version << ',' << r.scheme << ',' << r.order << ',' << r.n
     << ',' << r.k << ',' << r.backend << ',' << r.detection << ','
     << fmt(r.t_s_ms) << ',' << r.M << ',' << fmt(r.r0_um) << ','
     << fmt(r.sigma_n2) << ',' << r.tuned_params << ',' << r.bits << ','
     << r.errors << ',' << fmt(r.ber) << ',' << r.seed << ','
     << fmt(r.wall_ms);
  return os.str();
}

}  // namespace

void append_results_csv(const std::string& path,
                        const std::vector<BerRecord>& rows) {
  bool need_header = true;
  {
    std::error_code ec;
    auto size = std::filesystem::file_size(path, ec);
    need_header = ec || size == 0;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (need_header) out << results_csv_header() << "\n";
  for (const auto& r : rows) out << record_line(r) << "\n";
}

std::vector<BerRecord> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::vector<BerRecord> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header) {
      if (line != results_csv_header())
        throw std::runtime_error("unexpected results header in " + path);
      header = true;
      continue;
    }
    std::vector<std::string> c = split_list(line);
    if (c.size() != 17)
      throw std::runtime_error("malformed results row in " + path);
    BerRecord r;
    r.schema_version = std::stoi(c[0]);
    r.scheme = c[1];
    r.order = std::stoi(c[2]);
    r.n = std::stoi(c[3]);
    r.k = std::stoi(c[4]);
    r.backend = c[5];
    r.detection = c[6];
    r.t_s_ms = std::stod(c[7]);
    r.M = std::stoi(c[8]);
    r.r0_um = std::stod(c[9]);
    r.sigma_n2 = std::stod(c[10]);
    r.tuned_params = c[11];
    r.bits = std::stoull(c[12]);
    r.errors = std::stoull(c[13]);
    r.ber = std::stod(c[14]);
    r.seed = std::stoull(c[15]);
    r.wall_ms = std::stod(c[16]);
    rows.push_back(std::move(r));
  }
  if (!header) throw std::runtime_error("missing results header in " + path);
  return rows;
}

namespace {

bool same_point(const BerRecord& a, const BerRecord& b) {
  return a.k == b.k && a.backend == b.backend && a.detection == b.detection &&
         a.t_s_ms == b.t_s_ms && a.M == b.M && a.r0_um == b.r0_um &&
         a.sigma_n2 == b.sigma_n2 && a.seed == b.seed;
}

}  // namespace

CompareSummary compare_elementwise(const std::vector<BerRecord>& a,
                                   const std::vector<BerRecord>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument(
        "comparison needs two non-empty result sets of equal size");
  CompareSummary cs;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!same_point(a[i], b[i]))
      throw std::invalid_argument(
          "result sets do not cover identical config points (row " +
          std::to_string(i) + ")");
    CompareBucket& bucket = cs.by_order[a[i].order];
    auto tally = [&](CompareBucket& t) {
      if (a[i].ber == b[i].ber) {
        ++t.ties;
      } else if (a[i].ber < b[i].ber) {
        ++t.wins_a;
        if (a[i].ber > 0) {
          t.fold_sum_a += b[i].ber / a[i].ber;
          ++t.fold_n_a;
        }
      } else {
        ++t.wins_b;
        if (b[i].ber > 0) {
          t.fold_sum_b += a[i].ber / b[i].ber;
          ++t.fold_n_b;
        }
      }
    };
    tally(cs.total);
    tally(bucket);
  }
  return cs;
}

namespace {

std::string fold_text(double sum, uint64_t n) {
  if (n == 0) return "-";
  std::ostringstream os;
  os.precision(4);
  os << std::fixed << (sum / static_cast<double>(n)) << "x";
  return os.str();
}

void bucket_line(std::ostringstream& os, const std::string& label,
                 const CompareBucket& b) {
  os << label << ": a_wins=" << b.wins_a << " b_wins=" << b.wins_b
     << " ties=" << b.ties << " mean_fold_a=" << fold_text(b.fold_sum_a,
                                                           b.fold_n_a)
     << " mean_fold_b=" << fold_text(b.fold_sum_b, b.fold_n_b) << "\n";
}

}  // namespace

std::string format_comparison(const CompareSummary& cs) {
  std::ostringstream os;
  bucket_line(os, "total", cs.total);
  for (const auto& [order, bucket] : cs.by_order)
    bucket_line(os, "order " + std::to_string(order), bucket);
  return os.str();
}

Interval wilson_interval(uint64_t errors, uint64_t bits, double z) {
  if (bits == 0) throw std::invalid_argument("empty sample");
  double n = static_cast<double>(bits);
  double p = static_cast<double>(errors) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SweepConfig sweep_from_kv(const KvMap& kv) {
  SweepConfig sc;
  sc.schemes = split_list(kv_get(kv, "schemes"));
  if (sc.schemes.empty() || sc.schemes.front().empty())
    throw std::runtime_error("schemes list is empty");
  sc.k = static_cast<int>(kv_int(kv, "k", sc.k));
  parse_backend(kv_get_or(kv, "backend", "binomial"), sc.backend, sc.receiver,
                sc.drift_on);
  sc.detection = parse_detection(kv_get_or(kv, "detection", "static"));
  sc.corrector = parse_corrector(kv_get_or(kv, "corrector", "greedy"));
  KvMap chan_kv = kv;  // M and sigma_n2 are sweep axes here, not scalars
  chan_kv.erase("M");
  chan_kv.erase("sigma_n2");
  sc.channel = channel_from_kv(chan_kv);
  sc.drift = drift_from_kv(kv);
  if (kv_has(kv, "t_s_ms")) sc.ts_ms = kv_double_list(kv, "t_s_ms");
  if (kv_has(kv, "M")) {
    sc.emissions.clear();
    for (double m : kv_double_list(kv, "M"))
      sc.emissions.push_back(static_cast<int>(m));
  }
  if (kv_has(kv, "r0_um")) sc.r0 = kv_double_list(kv, "r0_um");
  if (kv_has(kv, "sigma_n2")) sc.sigma = kv_double_list(kv, "sigma_n2");
  sc.pilot_bits = static_cast<uint64_t>(
      kv_int(kv, "pilot_bits", static_cast<int64_t>(sc.pilot_bits)));
  sc.pilot_runs = static_cast<int>(kv_int(kv, "pilot_runs", sc.pilot_runs));
  sc.test_bits = static_cast<uint64_t>(
      kv_int(kv, "test_bits", static_cast<int64_t>(sc.test_bits)));
  sc.test_runs = static_cast<int>(kv_int(kv, "test_runs", sc.test_runs));
  sc.seed = static_cast<uint64_t>(kv_int(kv, "seed", 1));
  if (kv_has(kv, "tuned_file"))
    sc.fixed_detection = tuned_from_kv(read_kv_file(kv_get(kv, "tuned_file")));
  return sc;
}

std::vector<BerRecord> run_sweep(const SweepConfig& sc,
                                 const std::string& out_path) {
  std::vector<BerRecord> rows;
  for (const std::string& scheme : sc.schemes) {
    for (double ts_ms : sc.ts_ms) {
      for (int M : sc.emissions) {
        for (double r0 : sc.r0) {
          for (double sg : sc.sigma) {
            ExperimentConfig cfg;
            cfg.scheme = scheme;
            cfg.k = sc.k;
            cfg.backend = sc.backend;
            cfg.receiver = sc.receiver;
            cfg.drift_on = sc.drift_on;
            cfg.detection = sc.detection;
            cfg.corrector = sc.corrector;
            cfg.channel = sc.channel;
            cfg.channel.t_s = ts_ms / 1000.0;
            cfg.channel.M = M;
            cfg.channel.r_0 = r0;
            cfg.channel.sigma_n2 = sg;
            cfg.drift = sc.drift;
            cfg.pilot_bits = sc.pilot_bits;
            cfg.pilot_runs = sc.pilot_runs;
            cfg.test_bits = sc.test_bits;
            cfg.test_runs = sc.test_runs;
            cfg.seed = sc.seed;
            cfg.fixed_detection = sc.fixed_detection;
            BerRecord rec = run_experiment(cfg);
            if (!out_path.empty()) append_results_csv(out_path, {rec});
            rows.push_back(std::move(rec));
          }
        }
      }
    }
  }
  return rows;
}

std::string detection_label(DetectionMode m) {
  switch (m) {
    case DetectionMode::Static:
      return "static";
    case DetectionMode::Adaptive:
      return "adaptive";
    case DetectionMode::Baseline:
      return "baseline";
  }
  throw std::logic_error("unreachable");
}

DetectionMode parse_detection(const std::string& s) {
  if (s == "static") return DetectionMode::Static;
  if (s == "adaptive") return DetectionMode::Adaptive;
  if (s == "baseline") return DetectionMode::Baseline;
  throw std::invalid_argument("unknown detection mode: " + s);
}

std::string corrector_label(CorrectorKind c) {
  switch (c) {
    case CorrectorKind::Greedy:
      return "greedy";
    case CorrectorKind::ViterbiFirst:
      return "viterbi-first";
    case CorrectorKind::ViterbiLast:
      return "viterbi-last";
    case CorrectorKind::ViterbiRandom:
      return "viterbi-random";
  }
  throw std::logic_error("unreachable");
}

CorrectorKind parse_corrector(const std::string& s) {
  if (s == "greedy") return CorrectorKind::Greedy;
  if (s == "viterbi-first" || s == "first") return CorrectorKind::ViterbiFirst;
  if (s == "viterbi-last" || s == "last") return CorrectorKind::ViterbiLast;
  if (s == "viterbi-random" || s == "random")
    return CorrectorKind::ViterbiRandom;
  throw std::invalid_argument("unknown corrector: " + s);
}

std::string backend_label(Backend b, ReceiverMode mode, bool drift_on) {
  switch (b) {
    case Backend::Binomial:
      return "binomial";
    case Backend::Gaussian:
      return "gaussian";
    case Backend::Particle: {
      std::string s = "particle";
      if (mode == ReceiverMode::Transparent) s += "-transparent";
      if (drift_on) s += "-drift";
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

void parse_backend(const std::string& s, Backend& b, ReceiverMode& mode,
                   bool& drift_on) {
  mode = ReceiverMode::Absorbing;
  drift_on = false;
  if (s == "binomial") {
    b = Backend::Binomial;
    return;
  }
  if (s == "gaussian") {
    b = Backend::Gaussian;
    return;
  }
  if (s.rfind("particle", 0) == 0) {
    b = Backend::Particle;
    std::string rest = s.substr(8);
    if (rest.empty()) return;
    if (rest == "-transparent") {
      mode = ReceiverMode::Transparent;
      return;
    }
    if (rest == "-drift") {
      drift_on = true;
      return;
    }
    if (rest == "-transparent-drift") {
      mode = ReceiverMode::Transparent;
      drift_on = true;
      return;
    }
  }
  throw std::invalid_argument("unknown backend: " + s);
}

}  // namespace rlim
