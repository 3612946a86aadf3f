#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlim/channel.hpp"
#include "rlim/codec.hpp"
#include "rlim/detector.hpp"
#include "rlim/io.hpp"
#include "rlim/particle.hpp"

namespace rlim {

enum class Family { Rlim, Rll, Uncoded, Hamming74, IsiFree };
enum class Backend { Binomial, Gaussian, Particle };
enum class DetectionMode { Static, Adaptive, Baseline };
enum class CorrectorKind { Greedy, ViterbiFirst, ViterbiLast, ViterbiRandom };

// A registered transmission scheme: per-block geometry, the ones/symbols
// totals used for resource normalization, and (for the constrained families)
// the info<->codeword mapping. IsiFree carries stats only.
struct Scheme {
  std::string name;
  Family family = Family::Uncoded;
  int order = 0;  // 0 for the unconstrained families
  int n = 0;      // channel bits per block
  int k = 0;      // info bits per block
  SchemeStats stats{0, 0, 0};
  std::optional<BlockMapping> map;
};

// Names: rlim1..rlim4 (min-weight subsets), rll1..rll4 (lexicographic, same
// block length as the matching rlim), uncoded, hamming74, isifree.
Scheme make_scheme(const std::string& name, int k);
const std::vector<std::string>& scheme_names();

// Single-block (7,4) Hamming with positional parity layout
// (p1,p2,d1,p3,d2,d3,d4); decode corrects any single flipped bit.
std::vector<uint8_t> hamming74_encode(const std::vector<uint8_t>& data);
std::vector<uint8_t> hamming74_decode(const std::vector<uint8_t>& code);

// Info bit stream -> channel bit stream for any implemented scheme.
std::vector<uint8_t> scheme_encode(const Scheme& sc,
                                   const std::vector<uint8_t>& info);

// Detection parameters produced by tuning (or loaded from a file).
struct TunedDetection {
  DetectionMode mode = DetectionMode::Static;
  double tau = 1.0;      // static
  double a = 0.0;        // adaptive / baseline
  double floor_min = 0;  // baseline
  int spacing = 0;       // baseline window length
  std::string str() const;
};

std::string tuned_to_text(const TunedDetection& td);
TunedDetection tuned_from_kv(const KvMap& kv);

// Count stream -> decoded info bits. Constrained families run
// detect -> correct -> project -> decode per block; the unconstrained ones
// threshold and (for hamming74) syndrome-decode. `tie_rng` is only needed
// for CorrectorKind::ViterbiRandom.
std::vector<uint8_t> decode_counts(const Scheme& sc,
                                   const std::vector<double>& counts,
                                   const TunedDetection& td,
                                   CorrectorKind corrector,
                                   Philox* tie_rng = nullptr);

struct ExperimentConfig {
  std::string scheme = "rlim2";
  int k = 16;
  Backend backend = Backend::Binomial;
  ReceiverMode receiver = ReceiverMode::Absorbing;
  bool drift_on = false;
  DetectionMode detection = DetectionMode::Static;
  CorrectorKind corrector = CorrectorKind::Greedy;
  ChannelParams channel;  // t_s and M here are the uncoded anchor values
  DriftParams drift;
  uint64_t pilot_bits = 53760;
  int pilot_runs = 7;
  uint64_t test_bits = 100000;
  int test_runs = 1;
  uint64_t seed = 1;
  std::optional<TunedDetection> fixed_detection;  // skip pilot tuning
  Execution exec = Execution::Parallel;
};

struct BerRecord {
  int schema_version = 1;
  std::string scheme;
  int order = 0, n = 0, k = 0;
  std::string backend, detection;
  double t_s_ms = 0;  // anchor, so rows align across schemes
  int M = 0;          // anchor
  double r0_um = 0, sigma_n2 = 0;
  std::string tuned_params;
  uint64_t bits = 0, errors = 0;
  double ber = 0;
  uint64_t seed = 0;
  double wall_ms = 0;
};

// Pilot phase only: simulate the pilot runs and grid-tune the detection
// parameters for this config.
TunedDetection tune_from_pilot(const ExperimentConfig& cfg);

// Full pipeline: pilot tuning (unless fixed_detection is set), then the test
// transmission(s), returning one record. Deterministic given cfg.
BerRecord run_experiment(const ExperimentConfig& cfg);

// results.csv (schema_version column, append-friendly).
std::string results_csv_header();
void append_results_csv(const std::string& path,
                        const std::vector<BerRecord>& rows);
std::vector<BerRecord> read_results_csv(const std::string& path);

// Elementwise BER comparison of two result sets over identical config
// points (matched row by row). Fold ratio = loser/winner BER, skipped when
// the winner is error-free.
struct CompareBucket {
  uint64_t wins_a = 0, wins_b = 0, ties = 0;
  double fold_sum_a = 0;  // folds for points a won
  uint64_t fold_n_a = 0;
  double fold_sum_b = 0;
  uint64_t fold_n_b = 0;
};

struct CompareSummary {
  CompareBucket total;
  std::map<int, CompareBucket> by_order;  // keyed by the a-side order column
};

CompareSummary compare_elementwise(const std::vector<BerRecord>& a,
                                   const std::vector<BerRecord>& b);
std::string format_comparison(const CompareSummary& cs);

// 95% (default) score interval for an error proportion.
struct Interval {
  double lo = 0, hi = 0;
};
Interval wilson_interval(uint64_t errors, uint64_t bits, double z = 1.96);

// Sweep driver: cross product of the listed axes, one record per point,
// appended to `out_path` as they finish (empty path = no file).
struct SweepConfig {
  std::vector<std::string> schemes;
  int k = 16;
  Backend backend = Backend::Binomial;
  ReceiverMode receiver = ReceiverMode::Absorbing;
  bool drift_on = false;
  DetectionMode detection = DetectionMode::Static;
  CorrectorKind corrector = CorrectorKind::Greedy;
  ChannelParams channel;
  DriftParams drift;
  std::vector<double> ts_ms{200.0};
  std::vector<int> emissions{500};
  std::vector<double> r0{10.0};
  std::vector<double> sigma{0.0};
  uint64_t pilot_bits = 53760;
  int pilot_runs = 7;
  uint64_t test_bits = 100000;
  int test_runs = 1;
  uint64_t seed = 1;
  std::optional<TunedDetection> fixed_detection;
};

SweepConfig sweep_from_kv(const KvMap& kv);
std::vector<BerRecord> run_sweep(const SweepConfig& sc,
                                 const std::string& out_path);

// Label <-> enum plumbing shared by the CSV schema and the CLI.
std::string detection_label(DetectionMode m);
DetectionMode parse_detection(const std::string& s);
std::string corrector_label(CorrectorKind c);
CorrectorKind parse_corrector(const std::string& s);
std::string backend_label(Backend b, ReceiverMode mode, bool drift_on);
void parse_backend(const std::string& s, Backend& b, ReceiverMode& mode,
                   bool& drift_on);

}  // namespace rlim
