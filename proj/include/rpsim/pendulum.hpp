#pragma once

#include <cstdint>
#include <vector>

#include "rpsim/errors.hpp"

namespace rpsim {

enum class KickMode {
  position, // kick sets (x1, v1) = (1, 0)
  energy,   // kick rescales pendulum 1 to unit amplitude at its current phase
};

// Ensemble of coupled pendulum pairs in the anti-symmetric mode, perturbed
// by random dephasing kicks while the population decays. The coupling value
// g enters the equations of motion as a spring stiffness g^2.
struct PendulumConfig {
  double omega0 = 1.0;    // natural frequency, rad/s (arbitrary units accepted)
  double coupling = 0.2;  // rad/s
  double kick_rate = 0.05;// 1/s
  double decay_rate = 0.02;// 1/s
  int n_systems = 10000;
  double dt = 0.05;       // s
  double t_end = 250.0;   // s
  std::uint64_t seed = 0;
  KickMode kick_mode = KickMode::position;
  int sample_every = 1;
  int n_workers = 0;      // 0: RPSIM_WORKERS env, default 1
};

// One coupled pair; exposed so the integrator and kick rule are testable
// in isolation.
struct PendulumState {
  double x1 = 0.0, v1 = 0.0, x2 = 0.0, v2 = 0.0;
};

// Anti-symmetric mode, each displacement amplitude 1/sqrt(2), velocities zero.
PendulumState antisymmetric_mode_state();

double pair_energy(const PendulumState& s, double omega0, double coupling);

// One velocity-Verlet step (symplectic).
void leapfrog_step(PendulumState& s, double omega0, double coupling, double dt);

// Dephasing kick: pendulum 1 to unit amplitude, pendulum 2 to rest.
void apply_kick(PendulumState& s, double omega0, KickMode mode);

struct PendulumSeries {
  std::vector<double> times;
  std::vector<double> mean_sum;          // mean of x1+x2 over survivors x surviving fraction
  std::vector<double> surviving_fraction;

  std::size_t size() const { return times.size(); }
};

// Leapfrog integration of every system; kicks and deaths are per-system
// Bernoulli draws per step. Deterministic for a fixed seed, independent of
// the worker count.
PendulumSeries simulate_pendulums(const PendulumConfig& config);

}  // namespace rpsim
