#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "rpsim/system_model.hpp"

using namespace rpsim;

namespace {

std::vector<double> sorted_eigenvalues(const OperatorMatrix& h) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> w(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(w.begin(), w.end());
  return w;
}

SpinSystemSpec single_nucleus(double a, double omega) {
  SpinSystemSpec spec;
  spec.nuclei = {NucleusSpec{a, 1}};
  spec.larmor_omega = omega;
  return spec;
}

}  // namespace

TEST_CASE("spec validation") {
  SpinSystemSpec spec;
  SUBCASE("too many nuclei") {
    spec.nuclei.assign(5, NucleusSpec{1.0, 1});
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
  SUBCASE("bad electron index") {
    spec.nuclei = {NucleusSpec{1.0, 3}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
  SUBCASE("negative rate") {
    spec.model = ReactionModel::haberkorn;
    spec.k_singlet = -1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
  SUBCASE("hamiltonian_only with nonzero rates") {
    spec.k_singlet = 1.0;
    spec.k_triplet = 1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
}

TEST_CASE("build_hamiltonian spectra") {
  SUBCASE("single nucleus, omega = 0: {-3A/4 x2, +A/4 x6}") {
    const double a = 1.0;
    const auto w = sorted_eigenvalues(build_hamiltonian(single_nucleus(a, 0.0)));
    REQUIRE(w.size() == 8);
    for (int i = 0; i < 2; ++i) CHECK(w[i] == doctest::Approx(-0.75 * a).epsilon(1e-12));
    for (int i = 2; i < 8; ++i) CHECK(w[i] == doctest::Approx(0.25 * a).epsilon(1e-12));
  }
  SUBCASE("zero nuclei: Zeeman ladder {-w, 0, 0, +w}") {
    SpinSystemSpec spec;
    spec.larmor_omega = 0.7;
    const auto w = sorted_eigenvalues(build_hamiltonian(spec));
    REQUIRE(w.size() == 4);
    CHECK(w[0] == doctest::Approx(-0.7).epsilon(1e-13));
    CHECK(std::abs(w[1]) < 1e-13);
    CHECK(std::abs(w[2]) < 1e-13);
    CHECK(w[3] == doctest::Approx(0.7).epsilon(1e-13));
  }
  SUBCASE("Hermitian and commutes with J_z") {
    const SpinSystemSpec spec = single_nucleus(1.0, 0.1);
    const OperatorMatrix h = build_hamiltonian(spec);
    const OperatorMatrix jz = total_jz(spec);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((jz * h - h * jz).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("build_hamiltonian properties over random specs") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> coup(-2.0, 2.0);
  std::uniform_int_distribution<int> n_nuc(0, 3);
  std::uniform_int_distribution<int> elec(1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    SpinSystemSpec spec;
    const int n = n_nuc(gen);
    for (int i = 0; i < n; ++i) spec.nuclei.push_back(NucleusSpec{coup(gen), elec(gen)});
    spec.larmor_omega = coup(gen);
    const OperatorMatrix h = build_hamiltonian(spec);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    // Reversing the field is a global pi-rotation, a unitary equivalence.
    SpinSystemSpec reversed = spec;
    reversed.larmor_omega = -spec.larmor_omega;
    const auto w1 = sorted_eigenvalues(h);
    const auto w2 = sorted_eigenvalues(build_hamiltonian(reversed));
    for (std::size_t i = 0; i < w1.size(); ++i)
      CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("initial_state") {
  const SpinSystemSpec spec = single_nucleus(1.0, 0.1);
  const DensityMatrix rho = initial_state(spec);

  SUBCASE("trace 1, rank 2") {
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(rho.mat, Eigen::EigenvaluesOnly);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-12) ++rank;
    CHECK(rank == 2);
  }
  SUBCASE("pure singlet, zero angular momentum") {
    const OperatorMatrix qs = singlet_projector(spec.layout());
    CHECK(expectation(rho, qs) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(expectation(rho, total_jz(spec))) < 1e-14);
  }
  SUBCASE("commutes with Q_S") {
    const OperatorMatrix qs = singlet_projector(spec.layout());
    CHECK((rho.mat * qs - qs * rho.mat).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("st_spectrum_analysis") {
  SUBCASE("frequencies have terms linear in the hyperfine coupling") {
    const double a = 1.0, eps = 1e-4;
    const auto base = st_spectrum_analysis(single_nucleus(a, 0.1 * a));
    const auto plus = st_spectrum_analysis(single_nucleus(a * (1 + eps), 0.1 * a));
    const auto minus = st_spectrum_analysis(single_nucleus(a * (1 - eps), 0.1 * a));
    REQUIRE(!base.empty());
    REQUIRE(plus.size() == base.size());
    REQUIRE(minus.size() == base.size());
    double max_slope = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double slope = (plus[i].freq - minus[i].freq) / (2.0 * a * eps);
      max_slope = std::max(max_slope, std::abs(slope));
    }
    CHECK(max_slope >= 0.1);
  }
  SUBCASE("zero nuclei: S and T0 are degenerate, no finite-frequency line") {
    SpinSystemSpec spec;
    spec.larmor_omega = 0.5;
    for (const auto& line : st_spectrum_analysis(spec)) {
      // Q_S must not connect blocks separated by a nonzero frequency.
      CHECK(!(std::abs(line.freq) > 1e-10 && line.weight > 1e-10));
    }
  }
  SUBCASE("weights sorted descending and positive") {
    const auto lines = st_spectrum_analysis(single_nucleus(1.0, 0.1));
    REQUIRE(!lines.empty());
    for (std::size_t i = 0; i + 1 < lines.size(); ++i)
      CHECK(lines[i].weight >= lines[i + 1].weight);
    for (const auto& line : lines) CHECK(line.weight > 1e-10);
  }
  SUBCASE("off-diagonal weights symmetric under index swap") {
    const OperatorMatrix h = build_hamiltonian(single_nucleus(1.0, 0.1));
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h);
    const OperatorMatrix qs_eig = es.eigenvectors().adjoint() *
                                  singlet_projector({2, 2, 2}) * es.eigenvectors();
    for (int m = 0; m < 8; ++m)
      for (int n = 0; n < 8; ++n)
        CHECK(std::abs(qs_eig(m, n)) ==
              doctest::Approx(std::abs(qs_eig(n, m))).epsilon(1e-12).scale(1.0));
  }
}
