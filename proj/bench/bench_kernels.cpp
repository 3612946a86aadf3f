// Wall-clock comparison of the OpenMP kernels against their serial reference
// implementations, with an equality check on every output (the kernels are
// required to be bit-identical, so any speedup is free).

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rlim/channel.hpp"
#include "rlim/detector.hpp"
#include "rlim/harness.hpp"
#include "rlim/particle.hpp"
#include "rlim/rng.hpp"

using namespace rlim;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<uint8_t> random_bits(size_t count, uint64_t seed) {
  Philox rng(seed, 0);
  std::vector<uint8_t> bits(count);
  for (auto& b : bits) b = static_cast<uint8_t>(rng.next_u32() & 1u);
  return bits;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool equal) {
  std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              equal ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; both columns run serially\n");
#endif

  {
    ChannelParams p;
    p.t_s = 16.0 / 42.0 * 0.2;
    p.M = 1621;
    std::vector<uint8_t> tx = random_bits(20000, 7);
    double t0 = now_ms();
    std::vector<double> a = simulate_binomial_serial_ref(tx, p, 42);
    double t1 = now_ms();
    std::vector<double> b = simulate_binomial(tx, p, 42);
    double t2 = now_ms();
    report("binomial simulator", t1 - t0, t2 - t1, a == b);
  }

  {
    ChannelParams p;
    p.t_s = 0.05;
    p.M = 300;
    DriftParams dp;
    std::vector<uint8_t> tx = random_bits(40, 11);
    double t0 = now_ms();
    TransmissionResult a = run_transmission_serial_ref(
        tx, p, dp, ReceiverMode::Absorbing, true, 42);
    double t1 = now_ms();
    TransmissionResult b =
        run_transmission(tx, p, dp, ReceiverMode::Absorbing, true, 42);
    double t2 = now_ms();
    report("particle tracker", t1 - t0, t2 - t1,
           a.counts == b.counts && a.absorbed == b.absorbed);
  }

  {
    ExperimentConfig cfg;
    cfg.scheme = "rlim2";
    cfg.channel.t_s = 0.2;
    cfg.channel.M = 500;
    cfg.pilot_bits = 53760;
    Scheme sc = make_scheme(cfg.scheme, cfg.k);
    ChannelParams run_p = cfg.channel;
    NormalizedResources nr = normalize_resources(sc.stats, 0.2, 500);
    run_p.t_s = nr.t_s;
    run_p.M = nr.M;
    PilotSet pilot;
    for (int r = 0; r < cfg.pilot_runs; ++r) {
      std::vector<uint8_t> info = random_bits(
          cfg.pilot_bits / cfg.pilot_runs, 1000 + static_cast<uint64_t>(r));
      pilot.counts.push_back(
          simulate_binomial(scheme_encode(sc, info), run_p,
                            static_cast<uint64_t>(r)));
      pilot.truth.push_back(std::move(info));
    }
    double t0 = now_ms();
    int tau_s = tune_static(pilot, *sc.map, run_p.M, true, Execution::Serial);
    double t1 = now_ms();
    int tau_p =
        tune_static(pilot, *sc.map, run_p.M, true, Execution::Parallel);
    double t2 = now_ms();
    report("static-threshold tuner", t1 - t0, t2 - t1, tau_s == tau_p);
    std::printf("  tuned tau=%d over grid 1..%d\n", tau_p, run_p.M);
  }

  return 0;
}
