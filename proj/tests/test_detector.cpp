#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rlim/channel.hpp"
#include "rlim/codebook.hpp"
#include "rlim/codec.hpp"
#include "rlim/detector.hpp"
#include "rlim/rng.hpp"

using namespace rlim;

TEST_CASE("static detection thresholds and guards") {
  std::vector<double> m{0, 0, 50, 10, 90, 20};
  CHECK(detect_static(m, 40, 2).str() == "001010");

  // Nothing clears the threshold: promote the window argmax, ties low.
  std::vector<double> low{0, 0, 5, 5, 5, 5};
  CHECK(detect_static(low, 40, 2).str() == "001000");

  // All-zero counts map to the word with its 1 right after the prefix.
  std::vector<double> zero(6, 0.0);
  CHECK(detect_static(zero, 1, 2).str() == "001000");

  // Negative noisy counts are legal inputs.
  std::vector<double> neg{-3, -1, -0.5, -2, -4, -9};
  Word w = detect_static(neg, 1, 2);
  CHECK(w.str() == "001000");  // window argmax at index 3
}

TEST_CASE("static detection always marks the window") {
  Philox rng(40, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    std::vector<double> m(8);
    for (double& x : m) x = rng.normal() * 10.0;
    Word w = detect_static(m, 5.0, 2);
    int window_ones = 0;
    for (int t = 3; t <= 8; ++t) window_ones += w.bit(t);
    // The guard only promises a 1 past the prefix; prefix positions may
    // threshold high too (the corrector clears them downstream).
    REQUIRE(window_ones >= 1);
  }
}

TEST_CASE("plain thresholding is monotone in tau") {
  Philox rng(41, 0);
  std::vector<double> m(32);
  for (double& x : m) x = rng.normal() * 50.0;
  std::vector<uint8_t> lo = threshold_stream(m, 10.0);
  std::vector<uint8_t> hi = threshold_stream(m, 30.0);
  for (size_t t = 0; t < m.size(); ++t) REQUIRE(hi[t] <= lo[t]);
}

TEST_CASE("adaptive detection") {
  std::vector<double> m{0, 0, 50, 10, 90, 20};
  CHECK(detect_adaptive(m, 0.5, 2).str() == "001010");  // tau = 50

  // a = 0: threshold sits at the window max.
  Word top = detect_adaptive(m, 0.0, 2);
  CHECK(top.str() == "000010");

  // a = 1: threshold at the window min turns the whole window on.
  Word all = detect_adaptive(m, 1.0, 2);
  CHECK(all.str() == "001111");

  // The max position is detected as 1 for any a.
  Philox rng(42, 0);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> v(10);
    for (double& x : v) x = rng.next_unit() * 100.0;
    double a = rng.next_unit();
    Word w = detect_adaptive(v, a, 3);
    int arg = 4;
    for (int t = 4; t <= 10; ++t)
      if (v[t - 1] > v[arg - 1]) arg = t;
    REQUIRE(w.bit(arg) == 1);
  }
}

TEST_CASE("baseline dynamic detection") {
  std::vector<double> m{0, 0, 50, 10, 90, 20};
  // Window max 90 >= floor 5, tau = 0.5*0 + 0.5*90 = 45.
  CHECK(detect_baseline_dynamic(m, 0.5, 5.0, 6) ==
        std::vector<uint8_t>{0, 0, 1, 0, 1, 0});

  // Floor guard: a window that never reaches `min` emits zeros.
  std::vector<double> faint{1, 2, 1, 0, 2, 1};
  CHECK(detect_baseline_dynamic(faint, 0.5, 5.0, 6) ==
        std::vector<uint8_t>(6, 0));

  // Windows are independent: same data, spacing 3.
  std::vector<double> two{9, 0, 0, 1, 2, 1};
  std::vector<uint8_t> bits = detect_baseline_dynamic(two, 0.5, 5.0, 3);
  CHECK(bits == std::vector<uint8_t>{1, 0, 0, 0, 0, 0});

  // A ragged tail window still gets processed.
  std::vector<double> tail{9, 0, 0, 8, 7};
  std::vector<uint8_t> t2 = detect_baseline_dynamic(tail, 0.0, 5.0, 3);
  CHECK(t2.size() == 5);
  CHECK(t2[3] == 1);  // tail window {8,7}: tau = max = 8
  CHECK(t2[4] == 0);
}

TEST_CASE("grid evaluation is identical serial and parallel") {
  auto f = [](size_t idx) {
    return std::sin(double(idx) * 0.37) * double(idx % 101);
  };
  std::vector<double> s = eval_grid(1000, f, Execution::Serial);
  std::vector<double> p = eval_grid(1000, f, Execution::Parallel);
  CHECK(s == p);
  CHECK(argmin_index({3.0, 1.0, 1.0, 5.0}) == 1);  // ties to the left
  CHECK(argmin_index({2.0}) == 0);
}

namespace {

PilotSet perfect_pilot(const BlockMapping& map, int blocks) {
  PilotSet pilot;
  Philox rng(123, 9);
  std::vector<uint8_t> info;
  for (int b = 0; b < blocks * map.block_bits(); ++b)
    info.push_back(uint8_t(rng.next_u32() & 1));
  std::vector<uint8_t> coded = map.encode_stream(info);
  std::vector<double> counts(coded.size());
  for (size_t t = 0; t < coded.size(); ++t) counts[t] = coded[t] ? 100.0 : 0.0;
  pilot.counts.push_back(counts);
  pilot.truth.push_back(info);
  return pilot;
}

}  // namespace

TEST_CASE("tuners break ties toward the smallest candidate") {
  BlockMapping map(
      select_subset(generate_rlim(2, 6), 2, SubsetPolicy::MinWeight));
  PilotSet pilot = perfect_pilot(map, 64);

  // Separation is perfect, so every threshold in [1,100] scores zero BER.
  CHECK(pipeline_ber_static(pilot, map, 1.0, true) == 0.0);
  CHECK(pipeline_ber_static(pilot, map, 100.0, true) == 0.0);
  CHECK(tune_static(pilot, map, 100, true) == 1);
  CHECK(tune_adaptive(pilot, map) == 0.0);

  PilotSet empty;
  CHECK_THROWS(tune_static(empty, map, 10, true));
  CHECK_THROWS(tune_adaptive(empty, map));
}

TEST_CASE("tuned threshold survives an exhaustive replay") {
  const int k = 16, n = 24, order = 1;
  BlockMapping map(
      select_subset(generate_rlim(order, n), k, SubsetPolicy::MinWeight));

  ChannelParams ch;
  ch.t_s = (16.0 / 24.0) * 0.2;
  ch.M = 1294;

  PilotSet pilot;
  Philox info_rng(91, 0);
  for (int run = 0; run < 2; ++run) {
    std::vector<uint8_t> info;
    for (int b = 0; b < 3840; ++b) info.push_back(uint8_t(info_rng.next_u32() & 1));
    std::vector<uint8_t> coded = map.encode_stream(info);
    pilot.counts.push_back(simulate_binomial(coded, ch, 1000 + run));
    pilot.truth.push_back(info);
  }

  int tau = tune_static(pilot, map, ch.M, true);
  REQUIRE(tau >= 1);
  REQUIRE(tau <= ch.M);
  CHECK(tune_static(pilot, map, ch.M, true, Execution::Serial) == tau);

  double best = pipeline_ber_static(pilot, map, double(tau), true);
  for (int t = 1; t <= ch.M; ++t) {
    double ber = pipeline_ber_static(pilot, map, double(t), true);
    REQUIRE(ber >= best);
    if (ber == best) {
      REQUIRE(t == tau);  // first global minimum wins
      break;
    }
  }

  double a = tune_adaptive(pilot, map);
  REQUIRE(a >= 0.0);
  REQUIRE(a <= 1.0);
  // The grid has 201 points; the returned point must beat its neighbors.
  double at = pipeline_ber_adaptive(pilot, map, a);
  if (a > 0.0) CHECK(at <= pipeline_ber_adaptive(pilot, map, a - 0.005));
  if (a < 1.0) CHECK(at <= pipeline_ber_adaptive(pilot, map, a + 0.005));
}
