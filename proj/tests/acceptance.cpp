// Acceptance gate: every release-blocking numeric claim in one binary.
// Each criterion prints exactly one [PASS]/[FAIL] line (plus indented
// details) and the process exits nonzero if anything failed.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "rlim/analytics.hpp"
#include "rlim/channel.hpp"
#include "rlim/codebook.hpp"
#include "rlim/codec.hpp"
#include "rlim/corrector.hpp"
#include "rlim/detector.hpp"
#include "rlim/harness.hpp"
#include "rlim/particle.hpp"
#include "rlim/rng.hpp"
#include "rlim/word.hpp"

using namespace rlim;

namespace {

int g_checks_failed = 0;

// Always-on requirement: never compiled out in Release.
#define REQUIRE_OK(cond, ...)                        \
  do {                                               \
    if (!(cond)) {                                   \
      std::printf("       check failed: ");          \
      std::printf(__VA_ARGS__);                      \
      std::printf("  [%s:%d]\n", __FILE__, __LINE__);\
      ++g_checks_failed;                             \
    }                                                \
  } while (0)

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Criterion {
  int id;
  const char* title;
  bool (*run)();
};

// ---------------------------------------------------------------- 1
bool c1_family_sizes() {
  double t0 = now_s();
  const uint64_t want[] = {75024, 85625, 82628, 67984};
  const int n_for[] = {24, 31, 37, 42};
  for (int i = 1; i <= 4; ++i) {
    uint64_t got = generate_rlim(i, n_for[i - 1]).size();
    REQUIRE_OK(got == want[i - 1], "order %d family size %llu != %llu", i,
               (unsigned long long)got, (unsigned long long)want[i - 1]);
  }
  double dt = now_s() - t0;
  std::printf("       family sizes 75024/85625/82628/67984, %.3f s\n", dt);
  REQUIRE_OK(dt < 1.0, "runtime %.3f s exceeds 1 s budget", dt);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 2
bool c2_subset_weights() {
  double t0 = now_s();
  const uint64_t min_ones[] = {405251, 353228, 329724, 323397};
  const uint64_t lex_ones[] = {416350, 370310, 343276, 325735};
  const int n_for[] = {24, 31, 37, 42};
  for (int i = 1; i <= 4; ++i) {
    uint64_t a = select_subset(generate_rlim(i, n_for[i - 1]), 16,
                               SubsetPolicy::MinWeight)
                     .total_ones;
    uint64_t b = select_subset(generate_rll(i, n_for[i - 1]), 16,
                               SubsetPolicy::Lexicographic)
                     .total_ones;
    REQUIRE_OK(a == min_ones[i - 1], "min-weight ones order %d: %llu", i,
               (unsigned long long)a);
    REQUIRE_OK(b == lex_ones[i - 1], "lexicographic ones order %d: %llu", i,
               (unsigned long long)b);
  }
  double dt = now_s() - t0;
  std::printf("       eight block-16 one-totals reproduced, %.3f s\n", dt);
  REQUIRE_OK(dt < 10.0, "runtime %.3f s exceeds 10 s budget", dt);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 3
bool c3_block_lengths() {
  const int want[4][4] = {{7, 13, 18, 24},
                          {9, 16, 24, 31},
                          {11, 20, 28, 37},
                          {13, 23, 33, 42}};
  for (int i = 1; i <= 4; ++i)
    for (int kk = 0; kk < 4; ++kk) {
      int k = 4 * (kk + 1);
      int got = min_length_for_block(i, k);
      REQUIRE_OK(got == want[i - 1][kk], "(order %d, k %d) -> %d != %d", i, k,
                 got, want[i - 1][kk]);
    }
  std::printf("       all 16 shortest block lengths match\n");
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 4
bool c4_normalization_constants() {
  const uint64_t k16 = uint64_t(1) << 16;
  const uint64_t anchor_ones = 8 * k16;
  struct Row {
    const char* name;
    uint64_t ones;
    double printed;
  };
  // The reference multipliers are printed truncated (not rounded) to four
  // decimal places; three rows differ in the fourth place if rounded.
  const Row rows[] = {
      {"min-weight order 1", 405251, 1.2937},
      {"min-weight order 2", 353228, 1.4842},
      {"min-weight order 3", 329724, 1.5900},
      {"min-weight order 4", 323397, 1.6211},
      {"lexicographic order 1", 416350, 1.2592},
      {"lexicographic order 2", 370310, 1.4158},
      {"lexicographic order 3", 343276, 1.5273},
      {"lexicographic order 4", 325735, 1.6095},
      {"(7,4) parity blocks", 917504, 0.5714},
      {"two-slot reference", 1048576, 0.5000},
  };
  for (const Row& r : rows) {
    double mult = double(anchor_ones) / double(r.ones);
    double trunc4 = std::floor(mult * 1e4) / 1e4;
    REQUIRE_OK(std::abs(trunc4 - r.printed) < 1e-12,
               "%s multiplier %.6f truncates to %.4f, table says %.4f",
               r.name, mult, trunc4, r.printed);
  }
  std::printf("       ten multipliers reproduce the table to 4 decimals"
              " (truncation semantics)\n");
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 5
bool c5_greedy_optimality() {
  double t0 = now_s();
  uint64_t words_checked = 0;
  for (int i = 1; i <= 4; ++i)
    for (int n = i + 1; n <= 14; ++n) {
      // Distance table over the valid family beats re-enumeration per word.
      std::vector<uint64_t> family;
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
        if (is_rll_word(Word{v, n}, i)) family.push_back(v);
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        Word y{v, n};
        Word g = correct_greedy(y, i);
        if (!is_rll_word(g, i)) {
          REQUIRE_OK(false, "invalid output at order %d, y=%s", i,
                     y.str().c_str());
          return false;
        }
        int got = std::popcount(g.bits ^ v);
        int best = n + 1;
        for (uint64_t w : family)
          best = std::min(best, std::popcount(w ^ v));
        if (got != best) {
          REQUIRE_OK(false, "order %d y=%s: distance %d, optimum %d", i,
                     y.str().c_str(), got, best);
          return false;
        }
        ++words_checked;
      }
    }
  double dt = now_s() - t0;
  std::printf("       %llu words exhaustively verified optimal, %.1f s\n",
              (unsigned long long)words_checked, dt);
  REQUIRE_OK(dt < 120.0, "runtime %.1f s exceeds 2 min budget", dt);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 6
bool c6_trellis_equivalence() {
  double t0 = now_s();
  uint64_t checked = 0;
  for (int i = 1; i <= 4; ++i)
    for (int n = i + 1; n <= 12; ++n)
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        Word y{v, n};
        if (correct_viterbi(y, i, TiePolicy::LastWins) != correct_greedy(y, i)) {
          REQUIRE_OK(false, "mismatch at order %d, y=%s", i, y.str().c_str());
          return false;
        }
        ++checked;
      }
  Philox rng(2718, 0);
  for (int i = 1; i <= 4; ++i)
    for (int rep = 0; rep < 100000; ++rep) {
      Word y{rng.next_u64() >> (64 - 42), 42};
      if (correct_viterbi(y, i, TiePolicy::LastWins) != correct_greedy(y, i)) {
        REQUIRE_OK(false, "mismatch at order %d on random 42-bit word", i);
        return false;
      }
      ++checked;
    }
  std::printf("       %llu words bit-identical (exhaustive n<=12 plus 4x1e5"
              " random at n=42), %.1f s\n",
              (unsigned long long)checked, now_s() - t0);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 7
bool c7_threshold_estimate() {
  ChannelParams p;
  p.M = 1621;
  p.t_s = (16.0 / 42.0) * 0.2;
  Codebook cb = select_subset(generate_rlim(4, 42), 16, SubsetPolicy::MinWeight);
  SymbolClassProbs sp = symbol_class_probs(cb);
  ThresholdMoments m = interference_moments(p, 4);
  ThresholdEstimate est = estimate_threshold(m, sp);
  REQUIRE_OK(est.ok, "estimator reported: %s", est.note.c_str());
  if (!est.ok) return false;
  REQUIRE_OK(std::abs(est.tau - 92.13) < 0.5, "tau %.5f not within 92.13+-0.5",
             est.tau);

  double lo = m.a - 3 * std::sqrt(m.b), hi = m.c + 3 * std::sqrt(m.d);
  double best_tau = lo, best = -1.0;
  for (double tau = lo; tau <= hi; tau += 0.01) {
    double val = success_probability(m, sp, tau);
    if (val > best) {
      best = val;
      best_tau = tau;
    }
  }
  REQUIRE_OK(std::abs(best_tau - est.tau) <= 0.01,
             "grid argmax %.5f vs closed form %.5f", best_tau, est.tau);
  std::printf("       closed form tau=%.5f, grid argmax %.5f, success %.6f\n",
              est.tau, best_tau, success_probability(m, sp, est.tau));
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 8
bool c8_slot_class_numerators() {
  Codebook cb = select_subset(generate_rlim(4, 42), 16, SubsetPolicy::MinWeight);
  SymbolClassProbs sp = symbol_class_probs(cb);
  REQUIRE_OK(sp.isolated_zeros_num == 996497, "isolated zeros %llu != 996497",
             (unsigned long long)sp.isolated_zeros_num);
  REQUIRE_OK(sp.ones_num == 323397, "ones %llu != 323397",
             (unsigned long long)sp.ones_num);
  REQUIRE_OK(sp.denom == uint64_t(42) << 16, "denominator mismatch");
  std::printf("       numerators 996497 and 323397 over 42*2^16\n");
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 9
bool c9_tail_coefficient() {
  ChannelParams p;
  p.r_0 = 11.5;
  p.t_s = (16.0 / 42.0) * 0.2;
  std::vector<double> pj = channel_coefficients(p);
  double got = pj[199];
  REQUIRE_OK(std::abs(got - 1.14e-4) <= 0.02 * 1.14e-4,
             "p_200 = %.8e outside 1.14e-4 +- 2%%", got);
  std::printf("       p_200 = %.6e (target 1.14e-4 +- 2%%)\n", got);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 10
bool c10_tracker_cross_validation() {
  double t0 = now_s();

  // Absorption law: one emission of 1e4 molecules, no drift. The tracker
  // detects absorption by post-step membership, which biases the hit rate
  // low as the step grows; at the default 1 ms step the bias alone is ~5
  // standard errors at this population, so the check runs at 0.1 ms where
  // the measured bias sits near -1 SE (documented design limitation).
  ChannelParams p;
  p.t_s = 0.5;
  p.M = 10000;
  DriftParams dp;
  dp.dt = 1e-4;
  TransmissionResult r = run_transmission({1, 0, 0, 0}, p, dp,
                                          ReceiverMode::Absorbing, false, 42);
  double cum = 0.0;
  for (int j = 0; j < 4; ++j) {
    cum += r.counts[j];
    double t = 0.5 * (j + 1);
    if (t != 0.5 && t != 1.0 && t != 2.0) continue;
    double want = hitting_probability(t, p);
    double se = std::sqrt(p.M * want * (1 - want));
    double dev = (cum - p.M * want) / se;
    std::printf("       t=%.1f s: absorbed %.0f, expected %.1f (%+.2f SE)\n",
                t, cum, p.M * want, dev);
    REQUIRE_OK(std::abs(dev) <= 3.0, "absorption at t=%.1f off by %.2f SE", t,
               dev);
  }

  // Drift stationarity over 1e6 steps at the default parameters. These
  // samples are strongly autocorrelated (correlation time tau/dt = 1e4
  // steps), so standard errors use the effective sample size
  // N*dt/(2*tau) = 50 rather than N.
  DriftParams ou;  // defaults: dt=1 ms, tau=10 s, sigma_v=10, mean (1,0,0)
  Philox rng(7, stream::kind(stream::kDrift, 0));
  Vec3 v = ou.v_mean;
  for (int s = 0; s < 50000; ++s) v = drift_step(v, ou, rng);
  const int N = 1000000;
  double s1[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
  for (int s = 0; s < N; ++s) {
    v = drift_step(v, ou, rng);
    for (int c = 0; c < 3; ++c) {
      s1[c] += v[c];
      s2[c] += v[c] * v[c];
    }
  }
  const double n_eff = N * ou.dt / (2.0 * ou.tau_drift);
  const double se_mean = ou.sigma_v / std::sqrt(n_eff);
  const double se_var =
      ou.sigma_v * ou.sigma_v * std::sqrt(2.0 / n_eff);
  for (int c = 0; c < 3; ++c) {
    double mean = s1[c] / N;
    double var = s2[c] / N - mean * mean;
    double dm = (mean - ou.v_mean[c]) / se_mean;
    double dv = (var - ou.sigma_v * ou.sigma_v) / se_var;
    std::printf("       drift axis %d: mean %+.3f (%+.2f SE),"
                " variance %.2f (%+.2f SE)\n", c, mean, dm, var, dv);
    REQUIRE_OK(std::abs(dm) <= 3.0, "drift mean axis %d off by %.2f SE", c, dm);
    REQUIRE_OK(std::abs(dv) <= 3.0, "drift variance axis %d off by %.2f SE", c,
               dv);
  }
  std::printf("       cross-validation took %.1f s\n", now_s() - t0);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 11
struct NamedRecord {
  std::string name;
  BerRecord rec;
};

ExperimentConfig desk_config(const std::string& scheme, uint64_t test_bits) {
  ExperimentConfig cfg;
  cfg.scheme = scheme;
  cfg.k = 16;
  cfg.backend = Backend::Binomial;
  cfg.detection = DetectionMode::Static;
  cfg.channel.t_s = 0.2;
  cfg.channel.M = 500;
  cfg.channel.r_0 = 10.0;
  cfg.channel.sigma_n2 = 0.0;
  cfg.pilot_bits = 53760;
  cfg.pilot_runs = 7;
  cfg.test_bits = test_bits;
  cfg.seed = 3;
  return cfg;
}

// PASS when the intervals are disjoint in the right order; INCONCLUSIVE when
// they overlap; FAIL when they are disjoint the wrong way round.
int ordering_verdict(const BerRecord& better, const BerRecord& worse,
                     const char* label) {
  Interval b = wilson_interval(better.errors, better.bits);
  Interval w = wilson_interval(worse.errors, worse.bits);
  std::printf("       %s: %.5f [%.5f,%.5f] vs %.5f [%.5f,%.5f]",
              label, better.ber, b.lo, b.hi, worse.ber, w.lo, w.hi);
  if (b.hi < w.lo) {
    std::printf("  ordered, CIs disjoint\n");
    return 0;
  }
  if (w.hi < b.lo) {
    std::printf("  REVERSED with disjoint CIs\n");
    return 2;
  }
  std::printf("  inconclusive: intervals overlap; rerun with a larger"
              " ACCEPT_TEST_BITS\n");
  return 1;
}

bool c11_desk_scale_orderings() {
  double t0 = now_s();
  uint64_t test_bits = 100000;
  if (const char* env = std::getenv("ACCEPT_TEST_BITS")) {
    long long v = std::atoll(env);
    if (v >= 1600) test_bits = uint64_t(v) / 16 * 16;
  }
  std::printf("       binomial backend, t_s=200 ms, M=500, r_0=10 um,"
              " sigma_n2=0, k=16, seed 3, %llu test bits\n",
              (unsigned long long)test_bits);

  std::vector<NamedRecord> recs;
  for (const char* s : {"uncoded", "rlim1", "rlim2", "rlim3", "rlim4", "rll2"})
    recs.push_back({s, run_experiment(desk_config(s, test_bits))});
  auto find = [&](const std::string& n) -> const BerRecord& {
    for (const NamedRecord& r : recs)
      if (r.name == n) return r.rec;
    std::abort();
  };

  int failures = 0, inconclusive = 0;

  // (a) every constrained scheme beats the uncoded reference
  for (const char* s : {"rlim1", "rlim2", "rlim3", "rlim4"}) {
    int v = ordering_verdict(find(s), find("uncoded"),
                             (std::string(s) + " < uncoded").c_str());
    failures += v == 2;
    inconclusive += v == 1;
  }

  // (b) min-weight subset beats the lexicographic baseline at order 2
  {
    int v = ordering_verdict(find("rlim2"), find("rll2"), "rlim2 < rll2");
    failures += v == 2;
    inconclusive += v == 1;
  }

  // (c) tie-break policy ordering on the order-2 baseline codebook
  {
    ExperimentConfig first_cfg = desk_config("rll2", test_bits);
    first_cfg.corrector = CorrectorKind::ViterbiFirst;
    ExperimentConfig random_cfg = desk_config("rll2", test_bits);
    random_cfg.corrector = CorrectorKind::ViterbiRandom;
    BerRecord first = run_experiment(first_cfg);
    BerRecord random = run_experiment(random_cfg);
    int v1 = ordering_verdict(find("rll2"), first, "last-wins < first-wins");
    int v2 = ordering_verdict(find("rll2"), random, "last-wins < random");
    failures += (v1 == 2) + (v2 == 2);
    inconclusive += (v1 == 1) + (v2 == 1);
  }

  std::printf("       %d ordering(s) inconclusive, %d reversed; %.1f s\n",
              inconclusive, failures, now_s() - t0);
  REQUIRE_OK(failures == 0, "%d ordering(s) reversed with disjoint CIs",
             failures);
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 12
bool c12_record_regeneration() {
  namespace fs = std::filesystem;
  // Small budgets: determinism does not need statistical power.
  ExperimentConfig cfg = desk_config("rlim2", 16000);
  cfg.pilot_bits = 7680;
  cfg.pilot_runs = 2;
  BerRecord first = run_experiment(cfg);

  fs::path p = fs::temp_directory_path() / "rlim_acceptance_results.csv";
  fs::remove(p);
  append_results_csv(p.string(), {first});
  std::vector<BerRecord> rows = read_results_csv(p.string());
  fs::remove(p);
  REQUIRE_OK(rows.size() == 1, "roundtrip row count %zu", rows.size());
  if (rows.size() != 1) return false;

  // Rebuild the experiment from the stored row (seed, scheme, channel point)
  // and the run's budget configuration, then compare field by field.
  const BerRecord& row = rows[0];
  ExperimentConfig again = desk_config(row.scheme, row.bits);
  again.pilot_bits = 7680;
  again.pilot_runs = 2;
  again.channel.t_s = row.t_s_ms / 1000.0;
  again.channel.M = row.M;
  again.channel.r_0 = row.r0_um;
  again.channel.sigma_n2 = row.sigma_n2;
  again.seed = row.seed;
  BerRecord second = run_experiment(again);

  REQUIRE_OK(second.scheme == row.scheme, "scheme differs");
  REQUIRE_OK(second.order == row.order, "order differs");
  REQUIRE_OK(second.n == row.n, "length differs");
  REQUIRE_OK(second.k == row.k, "block size differs");
  REQUIRE_OK(second.backend == row.backend, "backend differs");
  REQUIRE_OK(second.detection == row.detection, "detection differs");
  REQUIRE_OK(second.t_s_ms == row.t_s_ms, "interval differs");
  REQUIRE_OK(second.M == row.M, "emission count differs");
  REQUIRE_OK(second.r0_um == row.r0_um, "distance differs");
  REQUIRE_OK(second.sigma_n2 == row.sigma_n2, "noise differs");
  REQUIRE_OK(second.tuned_params == row.tuned_params,
             "tuned parameters differ: %s vs %s", second.tuned_params.c_str(),
             row.tuned_params.c_str());
  REQUIRE_OK(second.bits == row.bits, "bit count differs");
  REQUIRE_OK(second.errors == row.errors, "error count differs: %llu vs %llu",
             (unsigned long long)second.errors,
             (unsigned long long)row.errors);
  REQUIRE_OK(second.ber == row.ber, "ber differs");
  REQUIRE_OK(second.seed == row.seed, "seed differs");
  std::printf("       rlim2 row regenerated bit-identically from seed %llu"
              " (%llu bits, %llu errors)\n",
              (unsigned long long)row.seed, (unsigned long long)row.bits,
              (unsigned long long)row.errors);
  return g_checks_failed == 0;
}

const Criterion kCriteria[] = {
    {1, "constrained family sizes at the block-16 lengths", c1_family_sizes},
    {2, "minimum-weight and lexicographic subset one-totals", c2_subset_weights},
    {3, "shortest block lengths for k = 4..16", c3_block_lengths},
    {4, "resource normalization multipliers", c4_normalization_constants},
    {5, "greedy correction is exhaustively distance-optimal", c5_greedy_optimality},
    {6, "last-wins trellis equals greedy correction", c6_trellis_equivalence},
    {7, "closed-form static threshold and grid agreement", c7_threshold_estimate},
    {8, "slot-class numerators of the order-4 block-16 book", c8_slot_class_numerators},
    {9, "channel tail coefficient at the far geometry", c9_tail_coefficient},
    {10, "particle tracker vs analytic absorption; drift stationarity", c10_tracker_cross_validation},
    {11, "desk-scale BER orderings with score intervals", c11_desk_scale_orderings},
    {12, "result rows regenerate from their recorded seed", c12_record_regeneration},
};

}  // namespace

int main() {
  std::printf("acceptance: %zu criteria\n", std::size(kCriteria));
  int failed = 0;
  for (const Criterion& c : kCriteria) {
    g_checks_failed = 0;
    double t0 = now_s();
    bool ok = c.run();
    std::printf("[%s] %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.title,
                now_s() - t0);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed) {
    std::printf("acceptance: %d criterion(s) FAILED\n", failed);
    return 1;
  }
  std::printf("acceptance: all criteria passed\n");
  return 0;
}
