#pragma once

#include <cstdint>
#include <vector>

#include "rpsim/system_model.hpp"

namespace rpsim {

enum class RemovalMode {
  analytic_weight, // trajectory weight e^{-kt}; variance reduction, zero bias
  stochastic_kill, // kill with probability k*dt per step
};

struct TrajectoryConfig {
  int n_trajectories = 1;
  std::uint64_t master_seed = 0;
  double dt = 0.0;    // ns, same step policy as the deterministic integrator
  double t_end = 0.0; // ns
  int sample_every = 1;
  RemovalMode removal_mode = RemovalMode::analytic_weight;
  int n_workers = 0;  // 0: take from RPSIM_WORKERS, default 1
};

// Population-weighted ensemble statistics on the sample grid. Weights are
// relative to the initial trajectory count, so mean_iz is comparable to the
// unnormalized deterministic Tr(rho I_z).
struct TrajectoryEnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_iz, se_iz;
  std::vector<double> mean_qs, se_qs;
  std::vector<double> surviving_weight;

  std::size_t size() const { return times.size(); }
};

// exp(-i H dt) via eigendecomposition; unitary to NumericPolicy::unitarity_tol.
OperatorMatrix propagator(const OperatorMatrix& h, double dt);

// Monte-Carlo unraveling of the measurement-induced dynamics: unitary steps,
// Bernoulli(eta*dt) projection events onto Q_S/Q_T with Born probabilities,
// and uniform removal at rate k = k_S = k_T. Requires kominis or
// custom_dephasing with k_S = k_T. Results are bit-identical for a fixed
// master_seed regardless of n_workers.
TrajectoryEnsembleStats run_ensemble(const SpinSystemSpec& spec, const TrajectoryConfig& config);

}  // namespace rpsim
