#include "rpsim/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

namespace rpsim {

SpinOps spin_half_operators() {
  SpinOps s;
  s.x.resize(2, 2);
  s.y.resize(2, 2);
  s.z.resize(2, 2);
  s.x << 0.0, 0.5, 0.5, 0.0;
  s.y << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0;
  s.z << 0.5, 0.0, 0.0, -0.5;
  return s;
}

int total_dim(const Layout& layout) {
  int d = 1;
  for (int f : layout) d *= f;
  return d;
}

namespace {

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

OperatorMatrix embed(const OperatorMatrix& op, std::size_t slot, const Layout& layout) {
  if (slot >= layout.size())
    throw ConfigError("embed: slot " + std::to_string(slot) + " out of range");
  if (op.rows() != op.cols() || op.rows() != layout[slot])
    throw ConfigError("embed: operator dimension does not match layout slot");
  OperatorMatrix out = OperatorMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i == slot)
      out = kron(out, op);
    else
      out = kron(out, OperatorMatrix::Identity(layout[i], layout[i]));
  }
  return out;
}

OperatorMatrix singlet_projector(const Layout& layout) {
  if (layout.size() < 2 || layout[0] != 2 || layout[1] != 2)
    throw ConfigError("singlet_projector: layout needs two electron slots of dim 2");
  const int dim = total_dim(layout);
  const SpinOps s = spin_half_operators();
  OperatorMatrix qs = 0.25 * OperatorMatrix::Identity(dim, dim);
  qs -= embed(s.x, 0, layout) * embed(s.x, 1, layout);
  qs -= embed(s.y, 0, layout) * embed(s.y, 1, layout);
  qs -= embed(s.z, 0, layout) * embed(s.z, 1, layout);
  return qs;
}

void DensityMatrix::check_invariants() const {
  const double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > NumericPolicy::hermiticity_tol)
    throw NumericError("density matrix not Hermitian, deviation " + std::to_string(herm));
  const double tr = trace();
  if (tr <= 0.0 || tr > 1.0 + NumericPolicy::trace_slack)
    throw NumericError("density matrix trace out of (0, 1]: " + std::to_string(tr));
  const double lmin = min_eigenvalue();
  if (lmin < NumericPolicy::positivity_warn)
    throw NumericError("density matrix negative eigenvalue " + std::to_string(lmin));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double expectation(const OperatorMatrix& rho, const OperatorMatrix& op) {
  if (rho.rows() != op.rows())
    throw ConfigError("expectation: dimension mismatch");
  const cplx tr = (rho * op).trace();
  if (std::abs(tr.imag()) > NumericPolicy::imag_residue_tol)
    throw NumericError("expectation: imaginary residue " + std::to_string(tr.imag()));
  return tr.real();
}

double expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  return expectation(rho.mat, op);
}

}  // namespace rpsim
