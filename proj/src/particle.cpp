#include "rlim/particle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlim {

Vec3 drift_step(const Vec3& v, const DriftParams& dp, Philox& rng) {
  double relax = dp.dt / dp.tau_drift;
  double noise = std::sqrt(2.0 * dp.sigma_v * dp.sigma_v * relax);
  Vec3 out;
  for (int c = 0; c < 3; ++c)
    out[c] = v[c] + (dp.v_mean[c] - v[c]) * relax + noise * rng.normal();
  return out;
}

Vec3 position_step(const Vec3& r, const Vec3& v, double D, double dt,
                   Philox& rng) {
  double sigma = std::sqrt(2.0 * D * dt);
  Vec3 out;
  for (int c = 0; c < 3; ++c)
    out[c] = r[c] + v[c] * dt + sigma * rng.normal();
  return out;
}

namespace {

struct Molecule {
  Vec3 pos;
  Philox rng;
  int64_t birth_step;
};

struct RunSetup {
  int64_t steps_per_interval;
  int64_t total_steps;
  Vec3 center;
  double rr2;
};

RunSetup prepare(const std::vector<uint8_t>& tx, const ChannelParams& p,
                 const DriftParams& dp) {
  validate_channel(p);
  if (!(dp.dt > 0.0) || !(dp.tau_drift > 0.0) || dp.sigma_v < 0.0 ||
      !(dp.max_age > 0.0))
    throw std::invalid_argument("bad drift/tracking parameters");
  if (p.t_s < dp.dt)
    throw std::invalid_argument("t_s must be at least one tracking step");
  RunSetup s;
  s.steps_per_interval = std::llround(p.t_s / dp.dt);
  s.total_steps = s.steps_per_interval * static_cast<int64_t>(tx.size());
  s.center = {p.r_0, 0.0, 0.0};
  s.rr2 = p.r_r * p.r_r;
  return s;
}

bool inside_receiver(const Vec3& pos, const RunSetup& s) {
  double dx = pos[0] - s.center[0];
  double dy = pos[1] - s.center[1];
  double dz = pos[2] - s.center[2];
  return dx * dx + dy * dy + dz * dz <= s.rr2;
}

void add_counting_noise(std::vector<double>& counts, const ChannelParams& p,
                        uint64_t seed) {
  if (p.sigma_n2 <= 0.0) return;
  double sd = std::sqrt(p.sigma_n2);
  for (size_t t = 0; t < counts.size(); ++t) {
    Philox noise(seed, stream::kind(stream::kNoise, t));
    counts[t] += sd * noise.normal();
  }
}

}  // namespace

TransmissionResult run_transmission(
    const std::vector<uint8_t>& tx, const ChannelParams& p,
    const DriftParams& dp, ReceiverMode mode, bool drift_on, uint64_t seed,
    const std::function<void(const StepStats&)>& observer) {
  RunSetup setup = prepare(tx, p, dp);
  TransmissionResult res;
  res.counts.assign(tx.size(), 0.0);

  std::vector<Molecule> mols;
  std::vector<uint8_t> hit;
  Vec3 v = dp.v_mean;
  Philox drift_rng(seed, stream::kind(stream::kDrift, 0));

  for (int64_t s = 0; s < setup.total_steps; ++s) {
    int64_t interval = s / setup.steps_per_interval;
    if (s % setup.steps_per_interval == 0 && tx[interval]) {
      for (int m = 0; m < p.M; ++m) {
        uint64_t id = res.emitted++;
        mols.push_back({{0.0, 0.0, 0.0},
                        Philox(seed, stream::kind(stream::kMolecule, id)),
                        s});
      }
    }

    if (drift_on) v = drift_step(v, dp, drift_rng);
    Vec3 veff = drift_on ? v : Vec3{0.0, 0.0, 0.0};

    hit.assign(mols.size(), 0);
    bool absorbing = mode == ReceiverMode::Absorbing;
#pragma omp parallel for schedule(static)
    for (long m = 0; m < static_cast<long>(mols.size()); ++m) {
      mols[m].pos = position_step(mols[m].pos, veff, p.D, dp.dt, mols[m].rng);
      if (absorbing && inside_receiver(mols[m].pos, setup)) hit[m] = 1;
    }

    if (absorbing) {
      uint64_t absorbed_now = 0;
      size_t keep = 0;
      for (size_t m = 0; m < mols.size(); ++m) {
        if (hit[m]) {
          ++absorbed_now;
        } else {
          if (keep != m) mols[keep] = std::move(mols[m]);
          ++keep;
        }
      }
      mols.resize(keep);
      res.absorbed += absorbed_now;
      res.counts[interval] += static_cast<double>(absorbed_now);
    } else if (s % setup.steps_per_interval == setup.steps_per_interval - 1) {
      uint64_t inside = 0;
      for (const auto& mol : mols)
        if (inside_receiver(mol.pos, setup)) ++inside;
      res.counts[interval] = static_cast<double>(inside);
    }

    // age culling runs after counting so a last-step absorption still counts
    size_t keep = 0;
    for (size_t m = 0; m < mols.size(); ++m) {
      double age = static_cast<double>(s + 1 - mols[m].birth_step) * dp.dt;
      if (age > dp.max_age + 1e-12) {
        ++res.culled;
      } else {
        if (keep != m) mols[keep] = std::move(mols[m]);
        ++keep;
      }
    }
    mols.resize(keep);

    if (observer)
      observer({static_cast<uint64_t>(s), res.emitted, res.absorbed,
                res.culled, mols.size()});
  }

  res.alive = mols.size();
  add_counting_noise(res.counts, p, seed);
  return res;
}

TransmissionResult run_transmission_serial_ref(
    const std::vector<uint8_t>& tx, const ChannelParams& p,
    const DriftParams& dp, ReceiverMode mode, bool drift_on, uint64_t seed,
    const std::function<void(const StepStats&)>& observer) {
  RunSetup setup = prepare(tx, p, dp);
  TransmissionResult res;
  res.counts.assign(tx.size(), 0.0);

  std::vector<Molecule> mols;
  Vec3 v = dp.v_mean;
  Philox drift_rng(seed, stream::kind(stream::kDrift, 0));

  for (int64_t s = 0; s < setup.total_steps; ++s) {
    int64_t interval = s / setup.steps_per_interval;
    if (s % setup.steps_per_interval == 0 && tx[interval]) {
      for (int m = 0; m < p.M; ++m) {
        uint64_t id = res.emitted++;
        mols.push_back({{0.0, 0.0, 0.0},
                        Philox(seed, stream::kind(stream::kMolecule, id)),
                        s});
      }
    }

    if (drift_on) v = drift_step(v, dp, drift_rng);
    Vec3 veff = drift_on ? v : Vec3{0.0, 0.0, 0.0};

    uint64_t absorbed_now = 0;
    size_t keep = 0;
    for (size_t m = 0; m < mols.size(); ++m) {
      mols[m].pos = position_step(mols[m].pos, veff, p.D, dp.dt, mols[m].rng);
      if (mode == ReceiverMode::Absorbing &&
          inside_receiver(mols[m].pos, setup)) {
        ++absorbed_now;
      } else {
        if (keep != m) mols[keep] = std::move(mols[m]);
        ++keep;
      }
    }
    mols.resize(keep);
    if (mode == ReceiverMode::Absorbing) {
      res.absorbed += absorbed_now;
      res.counts[interval] += static_cast<double>(absorbed_now);
    } else if (s % setup.steps_per_interval == setup.steps_per_interval - 1) {
      uint64_t inside = 0;
      for (const auto& mol : mols)
        if (inside_receiver(mol.pos, setup)) ++inside;
      res.counts[interval] = static_cast<double>(inside);
    }

    keep = 0;
    for (size_t m = 0; m < mols.size(); ++m) {
      double age = static_cast<double>(s + 1 - mols[m].birth_step) * dp.dt;
      if (age > dp.max_age + 1e-12) {
        ++res.culled;
      } else {
        if (keep != m) mols[keep] = std::move(mols[m]);
        ++keep;
      }
    }
    mols.resize(keep);

    if (observer)
      observer({static_cast<uint64_t>(s), res.emitted, res.absorbed,
                res.culled, mols.size()});
  }

  res.alive = mols.size();
  add_counting_noise(res.counts, p, seed);
  return res;
}

}  // namespace rlim
