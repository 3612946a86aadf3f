// Command-line front end: codebook construction, block coding, error
// correction, channel simulation, pilot tuning, sweeps, and result
// comparison. Every stochastic subcommand takes an explicit --seed and
// records it in its output so runs can be replayed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlim/analytics.hpp"
#include "rlim/channel.hpp"
#include "rlim/codebook.hpp"
#include "rlim/codec.hpp"
#include "rlim/corrector.hpp"
#include "rlim/harness.hpp"
#include "rlim/io.hpp"
#include "rlim/particle.hpp"

namespace {

using namespace rlim;

void cmd_codebook(int order, int length, int block, bool rll,
                  const std::string& out) {
  if (length == 0) {
    if (block == 0)
      throw std::runtime_error("give --length, --block, or both");
    length = min_length_for_block(order, block);
  }
  Codebook cb = rll ? generate_rll(order, length) : generate_rlim(order, length);
  size_t full = cb.size();
  if (block > 0)
    cb = select_subset(cb, block,
                       rll ? SubsetPolicy::Lexicographic
                           : SubsetPolicy::MinWeight);
  save_codebook(cb, out);
  std::cout << "family_size=" << full << " selected=" << cb.size()
            << " n=" << cb.length << " ones=" << cb.total_ones << " -> " << out
            << "\n";
}

void cmd_encode(const std::string& map_path, const std::string& in,
                const std::string& out, bool decode) {
  BlockMapping map(load_codebook(map_path));
  std::vector<uint8_t> bits = read_bits_file(in);
  std::vector<uint8_t> result =
      decode ? map.decode_stream(bits) : map.encode_stream(bits);
  int wrap = decode ? map.block_bits() : map.word_bits();
  write_bits_file(out, result, wrap);
  std::cout << (decode ? "decoded " : "encoded ") << bits.size() << " -> "
            << result.size() << " bits\n";
}

void cmd_correct(int order, const std::string& viterbi, uint64_t seed,
                 int length, const std::string& in, const std::string& out) {
  std::vector<uint8_t> bits = read_bits_file(in);
  size_t n = length > 0 ? static_cast<size_t>(length) : bits.size();
  if (n == 0 || n > 64 || bits.size() % n)
    throw std::runtime_error("bit stream must split into words of 1..64 bits");
  Philox tie(seed, stream::kind(stream::kTie, 0));
  std::vector<uint8_t> fixed;
  fixed.reserve(bits.size());
  for (size_t off = 0; off < bits.size(); off += n) {
    Word w{0, static_cast<int>(n)};
    for (size_t t = 0; t < n; ++t)
      if (bits[off + t]) w.set_bit(static_cast<int>(t) + 1, 1);
    Word c{0, w.n};
    if (viterbi.empty()) {
      c = correct_greedy(w, order);
    } else if (viterbi == "first") {
      c = correct_viterbi(w, order, TiePolicy::FirstWins);
    } else if (viterbi == "last") {
      c = correct_viterbi(w, order, TiePolicy::LastWins);
    } else if (viterbi == "random") {
      c = correct_viterbi(w, order, TiePolicy::Random, &tie);
    } else {
      throw std::runtime_error("--viterbi must be first|last|random");
    }
    for (int t = 1; t <= c.n; ++t)
      fixed.push_back(static_cast<uint8_t>(c.bit(t)));
  }
  write_bits_file(out, fixed, static_cast<int>(n));
  std::cout << "corrected " << bits.size() / n << " words\n";
}

void cmd_simulate(const std::string& backend, const std::string& mode,
                  const std::string& drift, const std::string& params,
                  const std::string& bits_path, uint64_t seed,
                  const std::string& out) {
  KvMap kv = read_kv_file(params);
  ChannelParams p = channel_from_kv(kv);
  std::vector<uint8_t> tx = read_bits_file(bits_path);
  if (tx.empty()) throw std::runtime_error("empty transmit bit stream");
  std::vector<double> counts;
  if (backend == "binomial") {
    counts = simulate_binomial(tx, p, seed);
  } else if (backend == "gaussian") {
    counts = simulate_gaussian(tx, p, seed);
  } else if (backend == "particle") {
    DriftParams dp = drift_from_kv(kv);
    ReceiverMode rm = ReceiverMode::Absorbing;
    if (mode == "transparent")
      rm = ReceiverMode::Transparent;
    else if (mode != "absorbing")
      throw std::runtime_error("--mode must be absorbing|transparent");
    bool drift_on = drift == "on";
    if (!drift_on && drift != "off")
      throw std::runtime_error("--drift must be on|off");
    TransmissionResult res = run_transmission(tx, p, dp, rm, drift_on, seed);
    counts = std::move(res.counts);
    std::cout << "emitted=" << res.emitted << " absorbed=" << res.absorbed
              << " culled=" << res.culled << " alive=" << res.alive << "\n";
  } else {
    throw std::runtime_error("--backend must be binomial|gaussian|particle");
  }
  write_counts_csv(out, seed, tx, counts);
  std::cout << "wrote " << counts.size() << " intervals -> " << out << "\n";
}

void cmd_tune(const std::string& mode, const std::string& scheme, int k,
              const std::string& backend, const std::string& rx_mode,
              const std::string& drift, const std::string& params,
              uint64_t pilot_bits, int pilot_runs, uint64_t seed,
              const std::string& out) {
  KvMap kv = read_kv_file(params);
  ExperimentConfig cfg;
  cfg.scheme = scheme;
  cfg.k = k;
  cfg.detection = parse_detection(mode);
  cfg.channel = channel_from_kv(kv);
  cfg.drift = drift_from_kv(kv);
  if (backend == "binomial") {
    cfg.backend = Backend::Binomial;
  } else if (backend == "gaussian") {
    cfg.backend = Backend::Gaussian;
  } else if (backend == "particle") {
    cfg.backend = Backend::Particle;
    cfg.receiver = rx_mode == "transparent" ? ReceiverMode::Transparent
                                            : ReceiverMode::Absorbing;
    cfg.drift_on = drift == "on";
  } else {
    throw std::runtime_error("--backend must be binomial|gaussian|particle");
  }
  cfg.pilot_bits = pilot_bits;
  cfg.pilot_runs = pilot_runs;
  cfg.seed = seed;
  TunedDetection td = tune_from_pilot(cfg);
  std::string text = tuned_to_text(td);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
    std::cout << "tuned " << td.str() << " -> " << out << "\n";
  }
}

int cmd_estimate(const std::string& params, const std::string& cb_path) {
  KvMap kv = read_kv_file(params);
  ChannelParams p = channel_from_kv(kv);
  Codebook cb = load_codebook(cb_path);
  int terms = static_cast<int>(kv_int(kv, "terms", 3));
  SymbolClassProbs probs = symbol_class_probs(cb);
  ThresholdMoments m = interference_moments(p, cb.order, terms);
  std::cout.precision(10);
  std::cout << "p_one=" << probs.ones_num << "/" << probs.denom << " ("
            << static_cast<double>(probs.ones_num) / probs.denom << ")\n"
            << "p_isolated_zero=" << probs.isolated_zeros_num << "/"
            << probs.denom << " ("
            << static_cast<double>(probs.isolated_zeros_num) / probs.denom
            << ")\n"
            << "mean0=" << m.a << " var0=" << m.b << " mean1=" << m.c
            << " var1=" << m.d << "\n";
  ThresholdEstimate est = estimate_threshold(m, probs);
  if (!est.ok) {
    std::cout << "no usable threshold: " << est.note << "\n";
    return 2;
  }
  std::cout << "tau=" << est.tau;
  if (!est.note.empty()) std::cout << " (" << est.note << ")";
  std::cout << "\np_success=" << success_probability(m, probs, est.tau)
            << "\n";
  return 0;
}

void cmd_sweep(const std::string& config, const std::string& out) {
  SweepConfig sc = sweep_from_kv(read_kv_file(config));
  std::vector<BerRecord> rows = run_sweep(sc, out);
  for (const auto& r : rows)
    std::cout << r.scheme << " t_s_ms=" << r.t_s_ms << " M=" << r.M
              << " r0=" << r.r0_um << " sigma_n2=" << r.sigma_n2 << " ["
              << r.tuned_params << "] ber=" << r.ber << "\n";
  std::cout << "wrote " << rows.size() << " rows -> " << out << "\n";
}

void cmd_compare(const std::string& a_path, const std::string& b_path) {
  std::vector<BerRecord> a = read_results_csv(a_path);
  std::vector<BerRecord> b = read_results_csv(b_path);
  std::cout << format_comparison(compare_elementwise(a, b));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Run-length-limited coding and molecular-channel simulation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  auto* cb = app.add_subcommand("codebook", "generate a codebook file");
  int cb_order = 1, cb_length = 0, cb_block = 0;
  bool cb_rll = false;
  std::string cb_out;
  cb->add_option("--order", cb_order, "run-length order i")->required();
  cb->add_option("--length", cb_length, "codeword length n (0: derive)");
  cb->add_option("--block", cb_block, "info bits k (select 2^k subset)");
  cb->add_flag("--rll", cb_rll, "keep the zero word / lexicographic subset");
  cb->add_option("--out", cb_out, "output file")->required();
  cb->callback([&] { cmd_codebook(cb_order, cb_length, cb_block, cb_rll, cb_out); });

  auto* enc = app.add_subcommand("encode", "info bits -> codeword bits");
  auto* dec = app.add_subcommand("decode", "codeword bits -> info bits");
  std::string enc_map, enc_in, enc_out;
  for (auto* sub : {enc, dec}) {
    sub->add_option("--map", enc_map, "codebook file with k>0")->required();
    sub->add_option("--in", enc_in, "input bits file")->required();
    sub->add_option("--out", enc_out, "output bits file")->required();
  }
  enc->callback([&] { cmd_encode(enc_map, enc_in, enc_out, false); });
  dec->callback([&] { cmd_encode(enc_map, enc_in, enc_out, true); });

  auto* cor = app.add_subcommand("correct", "repair run-constraint violations");
  int cor_order = 1, cor_length = 0;
  uint64_t cor_seed = 1;
  std::string cor_viterbi, cor_in, cor_out;
  cor->add_option("--order", cor_order, "run-length order i")->required();
  cor->add_option("--viterbi", cor_viterbi,
                  "trellis tie policy first|last|random (default: greedy)");
  cor->add_option("--seed", cor_seed, "rng seed for random tie-break");
  cor->add_option("--length", cor_length, "word length (0: whole stream)");
  cor->add_option("--in", cor_in, "input bits file")->required();
  cor->add_option("--out", cor_out, "output bits file")->required();
  cor->callback([&] {
    cmd_correct(cor_order, cor_viterbi, cor_seed, cor_length, cor_in, cor_out);
  });

  auto* sim = app.add_subcommand("simulate", "transmit bits through a channel");
  std::string sim_backend = "binomial", sim_mode = "absorbing",
              sim_drift = "off", sim_params, sim_bits, sim_out;
  uint64_t sim_seed = 1;
  sim->add_option("--backend", sim_backend, "binomial|gaussian|particle");
  sim->add_option("--mode", sim_mode, "particle receiver: absorbing|transparent");
  sim->add_option("--drift", sim_drift, "particle bulk flow: on|off");
  sim->add_option("--params", sim_params, "key=value channel parameters")
      ->required();
  sim->add_option("--bits", sim_bits, "transmit bits file")->required();
  sim->add_option("--seed", sim_seed, "rng seed");
  sim->add_option("--out", sim_out, "counts csv output")->required();
  sim->callback([&] {
    cmd_simulate(sim_backend, sim_mode, sim_drift, sim_params, sim_bits,
                 sim_seed, sim_out);
  });

  auto* tune = app.add_subcommand("tune", "pilot-tune detection parameters");
  std::string tune_mode = "static", tune_scheme = "rlim2",
              tune_backend = "binomial", tune_rx = "absorbing",
              tune_drift = "off", tune_params, tune_out;
  int tune_k = 16, tune_runs = 7;
  uint64_t tune_bits = 53760, tune_seed = 1;
  tune->add_option("--mode", tune_mode, "static|adaptive|baseline");
  tune->add_option("--scheme", tune_scheme, "scheme name");
  tune->add_option("--k", tune_k, "info bits per block");
  tune->add_option("--backend", tune_backend, "binomial|gaussian|particle");
  tune->add_option("--receiver", tune_rx, "particle: absorbing|transparent");
  tune->add_option("--drift", tune_drift, "particle: on|off");
  tune->add_option("--params", tune_params, "key=value channel parameters")
      ->required();
  tune->add_option("--pilot-bits", tune_bits, "total pilot bits");
  tune->add_option("--pilot-runs", tune_runs, "independent pilot runs");
  tune->add_option("--seed", tune_seed, "master seed");
  tune->add_option("--out", tune_out, "tuned-parameter file (default stdout)");
  tune->callback([&] {
    cmd_tune(tune_mode, tune_scheme, tune_k, tune_backend, tune_rx, tune_drift,
             tune_params, tune_bits, tune_runs, tune_seed, tune_out);
  });

  auto* est = app.add_subcommand("estimate-threshold",
                                 "closed-form static threshold");
  std::string est_params, est_cb;
  est->add_option("--params", est_params, "key=value channel parameters")
      ->required();
  est->add_option("--codebook", est_cb, "codebook file")->required();
  est->callback([&] { exit_code = cmd_estimate(est_params, est_cb); });

  auto* sweep = app.add_subcommand("sweep", "run a BER sweep");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "results csv")->required();
  sweep->callback([&] { cmd_sweep(sweep_config, sweep_out); });

  auto* cmp = app.add_subcommand("compare", "elementwise BER comparison");
  std::string cmp_a, cmp_b;
  cmp->add_option("--a", cmp_a, "results csv A")->required();
  cmp->add_option("--b", cmp_b, "results csv B")->required();
  cmp->callback([&] { cmd_compare(cmp_a, cmp_b); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
