#include "rpsim/dynamics_deterministic.hpp"

#include <cmath>

namespace rpsim {

ReactionSuperoperatorParams ReactionSuperoperatorParams::from_spec(const SpinSystemSpec& spec) {
  ReactionSuperoperatorParams p;
  p.k_s = spec.k_singlet;
  p.k_t = spec.k_triplet;
  switch (spec.model) {
    case ReactionModel::hamiltonian_only:
    case ReactionModel::haberkorn:
      p.eta = 0.0;
      break;
    case ReactionModel::kominis:
      p.eta = 0.5 * (spec.k_singlet + spec.k_triplet);
      break;
    case ReactionModel::jones_hore:
      p.eta = spec.k_singlet + spec.k_triplet;
      break;
    case ReactionModel::custom_dephasing:
      p.eta = spec.custom_eta;
      break;
  }
  return p;
}

OperatorMatrix apply_reaction(const ReactionSuperoperatorParams& params,
                              const OperatorMatrix& qs, const OperatorMatrix& qt,
                              const OperatorMatrix& rho) {
  if (qs.rows() != rho.rows() || qt.rows() != rho.rows())
    throw ConfigError("apply_reaction: dimension mismatch");
  const double coh = 0.5 * (params.k_s + params.k_t) + params.eta;
  const OperatorMatrix qs_rho = qs * rho;
  const OperatorMatrix qt_rho = qt * rho;
  return -params.k_s * (qs_rho * qs) - params.k_t * (qt_rho * qt)
         - coh * (qs_rho * qt + qt_rho * qs);
}

double fastest_rate(const SpinSystemSpec& spec) {
  const ReactionSuperoperatorParams p = ReactionSuperoperatorParams::from_spec(spec);
  double r = std::abs(spec.larmor_omega);
  for (const auto& n : spec.nuclei) r = std::max(r, std::abs(n.coupling_A));
  r = std::max({r, p.k_s, p.k_t, p.eta});
  return r;
}

void check_step_policy(const SpinSystemSpec& spec, double dt) {
  if (dt <= 0.0) throw ConfigError("dt must be positive");
  const double r = fastest_rate(spec);
  if (r > 0.0 && dt > 1.0 / (NumericPolicy::stability_margin * r))
    throw ConfigError("dt = " + std::to_string(dt) + " violates step policy dt <= " +
                      std::to_string(1.0 / (NumericPolicy::stability_margin * r)));
}

namespace {

struct Observables {
  OperatorMatrix qs, qt, iz, jz, qs_iz_qs, qt_iz_qt;
};

void sample(const OperatorMatrix& rho, double t, const Observables& ops, TimeSeries& out) {
  const double tr = rho.trace().real();
  if (!(tr > 0.0))
    throw NumericError("trace vanished at t = " + std::to_string(t));
  const double qs_u = expectation(rho, ops.qs);
  const double iz_u = expectation(rho, ops.iz);
  const double iz_s = expectation(rho, ops.qs_iz_qs);
  const double iz_t = expectation(rho, ops.qt_iz_qt);
  out.times.push_back(t);
  out.trace.push_back(tr);
  out.qs.push_back(qs_u / tr);
  out.iz.push_back(iz_u);
  out.iz_norm.push_back(iz_u / tr);
  out.iz_s.push_back(iz_s);
  out.iz_t.push_back(iz_t);
  out.jz.push_back(expectation(rho, ops.jz));
  // Eq.-style projected polarization on the normalized state.
  const double qs_n = qs_u / tr;
  out.iz_proj.push_back(qs_n * (iz_s / tr) + (1.0 - qs_n) * (iz_t / tr));
}

}  // namespace

TimeSeries integrate(const SpinSystemSpec& spec, double t_end, double dt, int sample_every) {
  spec.validate();
  check_step_policy(spec, dt);
  if (t_end < dt) throw ConfigError("t_end must be at least dt");
  if (sample_every < 1) throw ConfigError("sample_every must be >= 1");

  const Layout lay = spec.layout();
  const OperatorMatrix h = build_hamiltonian(spec);
  Observables ops;
  ops.qs = singlet_projector(lay);
  ops.qt = OperatorMatrix::Identity(ops.qs.rows(), ops.qs.cols()) - ops.qs;
  ops.iz = total_nuclear_z(spec);
  ops.jz = total_jz(spec);
  ops.qs_iz_qs = ops.qs * ops.iz * ops.qs;
  ops.qt_iz_qt = ops.qt * ops.iz * ops.qt;
  const ReactionSuperoperatorParams params = ReactionSuperoperatorParams::from_spec(spec);
  const bool reacting = spec.model != ReactionModel::hamiltonian_only;
  const cplx minus_i(0.0, -1.0);

  auto rhs = [&](const OperatorMatrix& rho) -> OperatorMatrix {
    OperatorMatrix d = minus_i * (h * rho - rho * h);
    if (reacting) d += apply_reaction(params, ops.qs, ops.qt, rho);
    return d;
  };

  DensityMatrix state = initial_state(spec);
  TimeSeries out;
  const long n_steps = std::lround(t_end / dt);

  for (long step = 0;; ++step) {
    const double t = step * dt;
    if (step % sample_every == 0 || step == n_steps) {
      sample(state.mat, t, ops, out);
      const double lmin = state.min_eigenvalue();
      if (lmin < NumericPolicy::positivity_fail)
        throw NumericError("positivity breached at t = " + std::to_string(t) +
                           " (min eigenvalue " + std::to_string(lmin) + ")");
    }
    if (step == n_steps) break;
    const OperatorMatrix k1 = rhs(state.mat);
    const OperatorMatrix k2 = rhs(state.mat + 0.5 * dt * k1);
    const OperatorMatrix k3 = rhs(state.mat + 0.5 * dt * k2);
    const OperatorMatrix k4 = rhs(state.mat + dt * k3);
    state.mat += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    state.resymmetrize();
  }
  return out;
}

Peak peak_polarization(const TimeSeries& series) {
  if (series.times.empty()) throw UsageError("peak_polarization: empty series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (std::abs(series.iz[i]) > std::abs(series.iz[best])) best = i;
  return Peak{series.times[best], series.iz[best]};
}

}  // namespace rpsim
