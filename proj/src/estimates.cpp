#include "rpsim/estimates.hpp"

#include <cmath>
#include <iostream>

namespace rpsim {

double iz_proj(const DensityMatrix& rho, const OperatorMatrix& qs, const OperatorMatrix& iz) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw UsageError("iz_proj: zero trace");
  const OperatorMatrix qt = OperatorMatrix::Identity(qs.rows(), qs.cols()) - qs;
  const double qs_n = expectation(rho.mat, qs) / tr;
  const double iz_s = expectation(rho.mat, OperatorMatrix(qs * iz * qs)) / tr;
  const double iz_t = expectation(rho.mat, OperatorMatrix(qt * iz * qt)) / tr;
  const double value = qs_n * iz_s + (1.0 - qs_n) * iz_t;
  if (std::abs(iz_t + iz_s) < 1e-10) {
    const double reduced = iz_s * (2.0 * qs_n - 1.0);
    if (std::abs(value - reduced) > 1e-12)
      throw NumericError("iz_proj: reduced form disagrees by " +
                         std::to_string(value - reduced));
  }
  return value;
}

double estimate_izS(double omega, double a, double k) {
  if (k <= 0.0) throw UsageError("estimate_izS: k must be positive");
  return -omega * a / (k * k);
}

double estimate_izqc(double omega, double big_omega, double a, double k) {
  if (k <= 0.0) throw UsageError("estimate_izqc: k must be positive");
  return omega * big_omega * big_omega * a / (k * k * k * k);
}

double thermal_polarization(double b_gauss, double t_kelvin) {
  if (t_kelvin <= 0.0) throw UsageError("thermal_polarization: T must be positive");
  if (b_gauss < 0.0) throw UsageError("thermal_polarization: B must be non-negative");
  using C = PhysicalConstants;
  // omega in SI rad/s: gamma_e = 2*pi x 2.8 MHz/G.
  const double omega_si = 2.0 * C::pi * 2.8e6 * b_gauss;
  const double ratio = C::hbar * omega_si / (C::gamma_ratio * C::k_b * t_kelvin);
  if (ratio > 0.01)
    std::cerr << "warning: thermal_polarization linearization invalid, hbar*omega/(gamma kB T) = "
              << ratio << "\n";
  return ratio / 4.0;
}

double enhancement_factor(double big_omega, double a, double k) {
  if (k <= 0.0) throw UsageError("enhancement_factor: k must be positive");
  const double om = big_omega / 0.01;
  const double an = a / 0.1;
  return 1e3 * om * om * an / (k * k * k * k);
}

double field_window(double k) {
  if (k <= 0.0) throw UsageError("field_window: k must be positive");
  return k / PhysicalConstants::gamma_e_radns_per_gauss;
}

double sample_field_tesla(double polarization, double conc_mol_per_l) {
  if (polarization < 0.0 || conc_mol_per_l < 0.0)
    throw UsageError("sample_field: inputs must be non-negative");
  using C = PhysicalConstants;
  const double number_density = conc_mol_per_l * 1e3 * C::avogadro; // 1/m^3
  return polarization * C::mu_p * C::mu_0 * number_density;
}

double extract_mixing_frequency(const TimeSeries& qs_series) {
  const auto& qs = qs_series.qs;
  const auto& t = qs_series.times;
  for (std::size_t i = 1; i + 1 < qs.size(); ++i) {
    if (qs[i] < qs[i - 1] && qs[i] <= qs[i + 1] && qs[i] < qs[0] - 1e-6)
      return PhysicalConstants::pi / t[i];
  }
  throw UsageError("extract_mixing_frequency: no <Q_S> minimum found; run longer");
}

}  // namespace rpsim
