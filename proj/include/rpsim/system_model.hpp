#pragma once

#include <string>
#include <vector>

#include "rpsim/spin_algebra.hpp"

namespace rpsim {

enum class ReactionModel {
  hamiltonian_only,
  haberkorn,
  kominis,
  jones_hore,
  custom_dephasing,
};

std::string to_string(ReactionModel m);

struct NucleusSpec {
  double coupling_A = 0.0;   // isotropic hyperfine coupling, rad/ns
  int attached_electron = 1; // 1 or 2
};

// Declarative description of a radical pair. All frequencies in rad/ns,
// all rates in 1/ns.
struct SpinSystemSpec {
  std::vector<NucleusSpec> nuclei;
  double larmor_omega = 0.0; // electron Larmor frequency omega = gamma_e * B
  double k_singlet = 0.0;
  double k_triplet = 0.0;
  ReactionModel model = ReactionModel::hamiltonian_only;
  double custom_eta = 0.0;   // only read for custom_dephasing

  // Throws ConfigError on violation (nucleus count, negative rates,
  // hamiltonian_only with nonzero rates, bad electron index).
  void validate() const;

  Layout layout() const;
  int dim() const { return total_dim(layout()); }
};

// H = sum_i A_i I_i . s_{e_i} + omega (s1z + s2z)
OperatorMatrix build_hamiltonian(const SpinSystemSpec& spec);

// rho_0 = Q_S / Tr(Q_S)
DensityMatrix initial_state(const SpinSystemSpec& spec);

// Sum of z components over all nuclei (zero matrix for zero nuclei).
OperatorMatrix total_nuclear_z(const SpinSystemSpec& spec);

// J_z = s1z + s2z + I_z
OperatorMatrix total_jz(const SpinSystemSpec& spec);

// One off-diagonal matrix element group of Q_S in the eigenbasis of H.
// m and n index degenerate eigenvalue blocks; freq is the (basis-independent)
// eigenvalue difference, weight the summed |<m|Q_S|n>| over the two blocks.
struct SpectrumLine {
  int m = 0;
  int n = 0;
  double freq = 0.0;   // omega_m - omega_n, rad/ns
  double weight = 0.0; // sum of |[Q_S]_mn| over the degenerate blocks
};

// Diagonalizes H and lists every pair of distinct eigenvalue blocks that
// Q_S connects with weight above NumericPolicy::spectrum_weight_cut,
// sorted by descending weight.
std::vector<SpectrumLine> st_spectrum_analysis(const SpinSystemSpec& spec);

}  // namespace rpsim
