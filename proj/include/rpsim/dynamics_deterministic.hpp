#pragma once

#include <vector>

#include "rpsim/system_model.hpp"

namespace rpsim {

// Unified reaction-superoperator family: Haberkorn removal plus an extra
// singlet-triplet dephasing rate eta on top of the (k_S+k_T)/2 baseline.
//   haberkorn:    eta = 0
//   kominis:      eta = (k_S + k_T) / 2   (the measurement rate)
//   jones_hore:   eta = k_S + k_T
struct ReactionSuperoperatorParams {
  double k_s = 0.0; // 1/ns
  double k_t = 0.0; // 1/ns
  double eta = 0.0; // extra S-T dephasing, 1/ns

  static ReactionSuperoperatorParams from_spec(const SpinSystemSpec& spec);
};

// L(rho) = -k_S Q_S rho Q_S - k_T Q_T rho Q_T
//          - ((k_S+k_T)/2 + eta) (Q_S rho Q_T + Q_T rho Q_S)
// With eta = 0 this equals the Haberkorn anticommutator form.
OperatorMatrix apply_reaction(const ReactionSuperoperatorParams& params,
                              const OperatorMatrix& qs, const OperatorMatrix& qt,
                              const OperatorMatrix& rho);

// Sampled observables of one integration run. iz, iz_s, iz_t, jz are
// unnormalized traces Tr(rho X); qs and iz_proj use the normalized state.
struct TimeSeries {
  std::vector<double> times;   // ns
  std::vector<double> trace;
  std::vector<double> qs;      // Tr(rho Q_S) / Tr(rho)
  std::vector<double> iz;      // Tr(rho I_z)
  std::vector<double> iz_norm; // Tr(rho I_z) / Tr(rho)
  std::vector<double> iz_s;    // Tr(Q_S rho Q_S I_z)
  std::vector<double> iz_t;    // Tr(Q_T rho Q_T I_z)
  std::vector<double> jz;      // Tr(rho J_z)
  std::vector<double> iz_proj; // <Q_S><I_z>^S + <Q_T><I_z>^T on normalized rho

  std::size_t size() const { return times.size(); }
};

// Largest rate entering the step-size policy for this spec.
double fastest_rate(const SpinSystemSpec& spec);

// Throws ConfigError unless dt <= 1 / (20 * fastest_rate).
void check_step_policy(const SpinSystemSpec& spec, double dt);

// Classical fixed-step RK4 over drho/dt = -i[H,rho] + L(rho).
// Hermiticity is re-symmetrized every step; positivity is monitored at each
// sample (NumericError below NumericPolicy::positivity_fail).
TimeSeries integrate(const SpinSystemSpec& spec, double t_end, double dt,
                     int sample_every = 1);

struct Peak {
  double t_peak = 0.0;
  double value = 0.0; // signed value at the sample of maximum |iz|
};

// Sample of maximum |iz|, ties broken by earliest time.
Peak peak_polarization(const TimeSeries& series);

}  // namespace rpsim
