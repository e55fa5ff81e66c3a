#pragma once

#include "rpsim/dynamics_deterministic.hpp"
#include "rpsim/spin_algebra.hpp"

namespace rpsim {

// Closed-form estimates and unit conversions. All other modules work in
// rad/ns and 1/ns; Gauss/Tesla/Kelvin conversions live here only.
struct PhysicalConstants {
  static constexpr double pi = 3.14159265358979323846;
  // Electron gyromagnetic ratio, 2*pi x 2.8 MHz/G, expressed in rad/ns per G.
  static constexpr double gamma_e_radns_per_gauss = 2.0 * pi * 2.8e-3;
  // |mu_e / mu_p|, dimensionless.
  static constexpr double gamma_ratio = 658.5;
  static constexpr double mu_p = 1.41060679736e-26;  // J/T
  static constexpr double mu_0 = 1.25663706212e-6;   // T m / A
  static constexpr double k_b = 1.380649e-23;        // J/K
  static constexpr double hbar = 1.054571817e-34;    // J s
  static constexpr double avogadro = 6.02214076e23;  // 1/mol

  static double omega_from_gauss(double b_gauss) { return gamma_e_radns_per_gauss * b_gauss; }
  static double gauss_from_omega(double omega_radns) { return omega_radns / gamma_e_radns_per_gauss; }
};

// <I_z>^proj = <Q_S><I_z>^S + <Q_T><I_z>^T, expectations on the normalized
// state. Cross-checks the 2<Q_S>-1 form whenever <I_z>^T = -<I_z>^S holds.
double iz_proj(const DensityMatrix& rho, const OperatorMatrix& qs, const OperatorMatrix& iz);

// <I_z>^S ~ -omega A / k^2
double estimate_izS(double omega, double a, double k);

// <I_z>_qc ~ omega Omega^2 A / k^4
double estimate_izqc(double omega, double big_omega, double a, double k);

// I_th = hbar omega / (4 gamma k_B T) with omega = gamma_e B.
// Valid for hbar omega << gamma k_B T (warns to stderr beyond 1%).
double thermal_polarization(double b_gauss, double t_kelvin);

// 10^3 (Omega / 0.01 ns^-1)^2 (A / 0.1 ns^-1) / (k / 1 ns^-1)^4
double enhancement_factor(double big_omega, double a, double k);

// Field below which the effect is appreciable: k / gamma_e, in Gauss.
double field_window(double k);

// Magnetic field of the polarized nuclei: P mu_p mu_0 n, with n the number
// density of a conc mol/L solution. Order-unity geometry factor not modeled.
double sample_field_tesla(double polarization, double conc_mol_per_l);

// S-T mixing frequency from the first local minimum of <Q_S>(t)
// (half-period convention: Omega = pi / t_min).
double extract_mixing_frequency(const TimeSeries& qs_series);

}  // namespace rpsim
