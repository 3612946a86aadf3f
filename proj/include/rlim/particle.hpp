#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rlim/channel.hpp"
#include "rlim/rng.hpp"

namespace rlim {

using Vec3 = std::array<double, 3>;

// Shared bulk-flow drift (one velocity vector for all molecules) plus the
// tracking-step controls.
struct DriftParams {
  double dt = 1e-3;        // tracking step, s
  double tau_drift = 10.0; // OU correlation timescale, s
  double sigma_v = 10.0;   // per-component stationary std dev, um/s
  Vec3 v_mean{1.0, 0.0, 0.0};
  double max_age = 5.0;    // molecules older than this are culled, s
};

enum class ReceiverMode { Absorbing, Transparent };

// Euler-Maruyama OU update; consumes three normals.
Vec3 drift_step(const Vec3& v, const DriftParams& dp, Philox& rng);

// Brownian displacement plus advection; consumes three normals.
Vec3 position_step(const Vec3& r, const Vec3& v, double D, double dt,
                   Philox& rng);

struct StepStats {
  uint64_t step;
  uint64_t emitted, absorbed, culled, alive;
};

struct TransmissionResult {
  std::vector<double> counts;  // one (possibly noisy) count per interval
  uint64_t emitted = 0, absorbed = 0, culled = 0, alive = 0;
};

// Track every molecule through the transmission: emit M at the origin at
// each 1-interval start; receiver sphere of radius r_r sits at [r_0, 0, 0].
// Absorbing mode counts and removes molecules that end a step inside the
// sphere; transparent mode counts those inside at each interval's last step
// and removes nothing. Age culling runs after counting. The OpenMP kernel
// updates molecules in parallel; per-molecule counter streams keep it
// bit-identical to the serial reference.
TransmissionResult run_transmission(
    const std::vector<uint8_t>& tx, const ChannelParams& p,
    const DriftParams& dp, ReceiverMode mode, bool drift_on, uint64_t seed,
    const std::function<void(const StepStats&)>& observer = {});
TransmissionResult run_transmission_serial_ref(
    const std::vector<uint8_t>& tx, const ChannelParams& p,
    const DriftParams& dp, ReceiverMode mode, bool drift_on, uint64_t seed,
    const std::function<void(const StepStats&)>& observer = {});

}  // namespace rlim
