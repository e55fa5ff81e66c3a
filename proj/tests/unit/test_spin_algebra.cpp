#include <doctest.h>

#include <random>

#include "rpsim/spin_algebra.hpp"
#include "rpsim/system_model.hpp"

using namespace rpsim;

namespace {

double max_abs(const OperatorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

OperatorMatrix random_hermitian(int dim, std::mt19937& gen) {
  std::normal_distribution<double> dist;
  OperatorMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(dist(gen), dist(gen));
  return 0.5 * (m + m.adjoint()).eval();
}

}  // namespace

TEST_CASE("spin-1/2 operators") {
  const SpinOps s = spin_half_operators();

  SUBCASE("z eigenvalue on |+> is +1/2") {
    StateVector up(2);
    up << 1.0, 0.0;
    CHECK(max_abs(s.z * up - 0.5 * up) == doctest::Approx(0.0));
  }
  SUBCASE("su(2) commutator [sx, sy] = i sz") {
    CHECK(max_abs(s.x * s.y - s.y * s.x - cplx(0, 1) * s.z) < 1e-15);
  }
  SUBCASE("each component squares to identity/4") {
    const OperatorMatrix quarter = 0.25 * OperatorMatrix::Identity(2, 2);
    CHECK(max_abs(s.x * s.x - quarter) < 1e-15);
    CHECK(max_abs(s.y * s.y - quarter) < 1e-15);
    CHECK(max_abs(s.z * s.z - quarter) < 1e-15);
  }
}

TEST_CASE("embed") {
  const SpinOps s = spin_half_operators();
  const Layout lay{2, 2, 2};

  SUBCASE("z at slot 0 of [2,2,2] is 8x8 and traceless") {
    const OperatorMatrix m = embed(s.z, 0, lay);
    CHECK(m.rows() == 8);
    CHECK(std::abs(m.trace()) < 1e-15);
  }
  SUBCASE("identity embeds to total identity") {
    const OperatorMatrix id2 = OperatorMatrix::Identity(2, 2);
    for (std::size_t slot = 0; slot < 3; ++slot)
      CHECK(max_abs(embed(id2, slot, lay) - OperatorMatrix::Identity(8, 8)) == 0.0);
  }
  SUBCASE("operators on disjoint slots commute") {
    const OperatorMatrix s1z = embed(s.z, 0, lay);
    const OperatorMatrix iz = embed(s.z, 2, lay);
    CHECK(max_abs(s1z * iz - iz * s1z) < 1e-15);
  }
  SUBCASE("dimension mismatch is a configuration error") {
    CHECK_THROWS_AS(embed(OperatorMatrix::Identity(3, 3), 0, lay), ConfigError);
    CHECK_THROWS_AS(embed(s.z, 5, lay), ConfigError);
  }
}

TEST_CASE("singlet projector") {
  SUBCASE("bare pair: rank-1, idempotent") {
    const OperatorMatrix qs = singlet_projector({2, 2});
    CHECK(qs.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs(qs * qs - qs) < 1e-15);
  }
  SUBCASE("one nucleus: trace equals multiplicity") {
    const OperatorMatrix qs = singlet_projector({2, 2, 2});
    CHECK(qs.trace().real() == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("projector algebra for 0-4 nuclei") {
    Layout lay{2, 2};
    for (int n = 0; n <= 4; ++n) {
      CAPTURE(n);
      const int dim = total_dim(lay);
      const OperatorMatrix qs = singlet_projector(lay);
      const OperatorMatrix qt = OperatorMatrix::Identity(dim, dim) - qs;
      CHECK(max_abs(qs * qs - qs) < 1e-14);
      CHECK(max_abs(qt * qt - qt) < 1e-14);
      CHECK(max_abs(qs * qt) < 1e-14);
      lay.push_back(2);
    }
  }
  SUBCASE("electron slots must be dim 2") {
    CHECK_THROWS_AS(singlet_projector({2}), ConfigError);
  }
}

TEST_CASE("expectation") {
  const Layout lay{2, 2, 2};
  const OperatorMatrix qs = singlet_projector(lay);
  const SpinOps s = spin_half_operators();
  const OperatorMatrix iz = embed(s.z, 2, lay);

  SUBCASE("singlet state is singlet") {
    const DensityMatrix rho{qs / qs.trace().real()};
    CHECK(expectation(rho, qs) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("singlet state has zero nuclear polarization") {
    const DensityMatrix rho{qs / qs.trace().real()};
    CHECK(std::abs(expectation(rho, iz)) < 1e-14);
  }
  SUBCASE("maximally mixed state against traceless operator") {
    const DensityMatrix rho{OperatorMatrix::Identity(8, 8) / 8.0};
    CHECK(std::abs(expectation(rho, iz)) < 1e-15);
  }
  SUBCASE("imaginary residue above threshold throws") {
    OperatorMatrix bad = OperatorMatrix::Zero(8, 8);
    bad(0, 1) = cplx(0.0, 1.0); // deliberately non-Hermitian
    OperatorMatrix op = OperatorMatrix::Zero(8, 8);
    op(0, 1) = op(1, 0) = 1.0;
    CHECK_THROWS_AS(expectation(bad, op), NumericError);
  }
}

TEST_CASE("density matrix invariants") {
  const OperatorMatrix qs = singlet_projector({2, 2});

  SUBCASE("valid state passes") {
    DensityMatrix rho{qs / qs.trace().real()};
    CHECK_NOTHROW(rho.check_invariants());
  }
  SUBCASE("non-Hermitian fails") {
    DensityMatrix rho{qs / qs.trace().real()};
    rho.mat(0, 1) += cplx(1e-6, 1e-6);
    CHECK_THROWS_AS(rho.check_invariants(), NumericError);
  }
  SUBCASE("trace above one fails") {
    DensityMatrix rho{2.0 * qs};
    CHECK_THROWS_AS(rho.check_invariants(), NumericError);
  }
  SUBCASE("negative eigenvalue fails") {
    DensityMatrix rho{qs / qs.trace().real()};
    rho.mat(3, 3) = -1e-3;
    CHECK_THROWS_AS(rho.check_invariants(), NumericError);
  }
}

TEST_CASE("commutation identities with the Hamiltonian") {
  SpinSystemSpec spec;
  spec.nuclei = {NucleusSpec{1.3, 1}};
  spec.larmor_omega = 0.4;
  const Layout lay = spec.layout();
  const OperatorMatrix h = build_hamiltonian(spec);
  const OperatorMatrix qs = singlet_projector(lay);
  const SpinOps s = spin_half_operators();
  const OperatorMatrix iz = embed(s.z, 2, lay);

  SUBCASE("[I_z, Q_S] = 0 and [I_z, Q_T] = 0") {
    const OperatorMatrix qt = OperatorMatrix::Identity(8, 8) - qs;
    CHECK(max_abs(iz * qs - qs * iz) < 1e-14);
    CHECK(max_abs(iz * qt - qt * iz) < 1e-14);
  }
  SUBCASE("[J_z, H] = 0") {
    const OperatorMatrix jz = total_jz(spec);
    CHECK(max_abs(jz * h - h * jz) < 1e-12);
  }
  SUBCASE("[I_z, H] = i A (s1x I_y - s1y I_x)") {
    const double a = spec.nuclei[0].coupling_A;
    const OperatorMatrix s1x = embed(s.x, 0, lay), s1y = embed(s.y, 0, lay);
    const OperatorMatrix ix = embed(s.x, 2, lay), iy = embed(s.y, 2, lay);
    const OperatorMatrix expected = cplx(0, 1) * a * (s1x * iy - s1y * ix);
    CHECK(max_abs(iz * h - h * iz - expected) < 1e-13);
  }
}

TEST_CASE("random Hermitian matrices stay Hermitian under the helpers") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorMatrix m = random_hermitian(8, gen);
    CHECK(max_abs(m - m.adjoint()) < 1e-15);
  }
}
