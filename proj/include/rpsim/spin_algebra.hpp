#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rpsim/errors.hpp"
#include "rpsim/numeric_policy.hpp"

namespace rpsim {

// Dense complex operator on the composite electron-nuclear space.
// Dimension is 4 * 2^N for N spin-1/2 nuclei; frequencies are carried
// separately (rad/ns), the matrices themselves are dimensionless.
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using cplx = std::complex<double>;

// Spin-1/2 component operators (hbar = 1), eigenvalues +-1/2.
struct SpinOps {
  OperatorMatrix x, y, z;
};
SpinOps spin_half_operators();

// Subsystem dimensions in the fixed order
// (electron 1, electron 2, nucleus 1, ..., nucleus N).
using Layout = std::vector<int>;

int total_dim(const Layout& layout);

// identity (x) ... (x) op (x) ... (x) identity, with op at `slot`.
OperatorMatrix embed(const OperatorMatrix& op, std::size_t slot, const Layout& layout);

// Q_S = 1/4 - s1.s2, identity on all nuclear factors. Q_T = 1 - Q_S.
OperatorMatrix singlet_projector(const Layout& layout);

// A density matrix: Hermitian, PSD up to integrator tolerance, trace <= 1.
struct DensityMatrix {
  OperatorMatrix mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  double trace() const { return mat.trace().real(); }

  // Throws NumericError if any DensityMatrix invariant is violated.
  void check_invariants() const;

  // Averages with the conjugate transpose; guards Hermiticity drift.
  void resymmetrize() { mat = 0.5 * (mat + mat.adjoint()).eval(); }

  double min_eigenvalue() const;
};

// Tr(rho * op) for Hermitian op. The imaginary residue of the trace must be
// below NumericPolicy::imag_residue_tol; it is discarded after the check.
double expectation(const DensityMatrix& rho, const OperatorMatrix& op);
double expectation(const OperatorMatrix& rho, const OperatorMatrix& op);

}  // namespace rpsim
