#pragma once

namespace rpsim {

// Single source of truth for every tolerance used by the library.
struct NumericPolicy {
  // Hermiticity of a density matrix: max-abs of rho - rho^dagger.
  static constexpr double hermiticity_tol = 1e-12;
  // Eigenvalues of rho may dip slightly negative from integrator error.
  static constexpr double positivity_warn = -1e-9;
  static constexpr double positivity_fail = -1e-6;
  // Trace of rho must stay within (0, 1 + trace_slack].
  static constexpr double trace_slack = 1e-12;
  // Imaginary residue allowed in Tr(rho * op) for Hermitian op.
  static constexpr double imag_residue_tol = 1e-10;
  // Entrywise tolerance for exact operator identities (Q_S^2 = Q_S, ...).
  static constexpr double algebra_tol = 1e-14;
  // Weight cutoff for reported spectral lines.
  static constexpr double spectrum_weight_cut = 1e-10;
  // Eigenvalue spacing below which two levels count as degenerate.
  static constexpr double degeneracy_tol = 1e-9;
  // Unitarity of a propagator: max-abs of U U^dagger - 1.
  static constexpr double unitarity_tol = 1e-12;
  // Step-size policy: dt <= 1 / (stability_margin * fastest rate).
  static constexpr double stability_margin = 20.0;
  // Projection branch with outcome probability below this is skipped in
  // favor of the complementary branch (renormalizing it is ill-conditioned).
  static constexpr double branch_prob_floor = 1e-12;
};

}  // namespace rpsim
