#include <doctest.h>

#include <cmath>
#include <random>

#include "rpsim/dynamics_deterministic.hpp"
#include "rpsim/dynamics_stochastic.hpp"

using namespace rpsim;

namespace {

SpinSystemSpec fig4_spec() {
  SpinSystemSpec spec;
  spec.nuclei = {NucleusSpec{1.0, 1}};
  spec.larmor_omega = 0.1;
  spec.model = ReactionModel::kominis;
  spec.k_singlet = 4.0;
  spec.k_triplet = 4.0;
  return spec;
}

}  // namespace

TEST_CASE("propagator") {
  const OperatorMatrix h = build_hamiltonian(fig4_spec());

  SUBCASE("dt = 0 is the identity") {
    CHECK((propagator(h, 0.0) - OperatorMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("diagonal Hamiltonian gives pure phases") {
    OperatorMatrix hd = OperatorMatrix::Zero(2, 2);
    hd(1, 1) = 0.7;
    const OperatorMatrix u = propagator(hd, 2.0);
    CHECK(std::abs(u(0, 0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(u(1, 1) - std::exp(cplx(0.0, -0.7 * 2.0))) < 1e-14);
    CHECK(std::abs(u(0, 1)) < 1e-14);
  }
  SUBCASE("preserves norm of random states") {
    const OperatorMatrix u = propagator(h, 0.37);
    std::mt19937 gen(5);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 10; ++trial) {
      StateVector psi(8);
      for (int i = 0; i < 8; ++i) psi[i] = cplx(dist(gen), dist(gen));
      psi.normalize();
      CHECK(std::abs((u * psi).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("run_ensemble rejects unsupported configurations") {
  SpinSystemSpec spec = fig4_spec();
  TrajectoryConfig cfg;
  cfg.n_trajectories = 10;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;

  SUBCASE("biased removal") {
    spec.k_triplet = 2.0;
    CHECK_THROWS_AS(run_ensemble(spec, cfg), ConfigError);
  }
  SUBCASE("haberkorn model") {
    spec.model = ReactionModel::haberkorn;
    CHECK_THROWS_AS(run_ensemble(spec, cfg), ConfigError);
  }
  SUBCASE("step policy") {
    cfg.dt = 0.1;
    CHECK_THROWS_AS(run_ensemble(spec, cfg), ConfigError);
  }
}

TEST_CASE("no dephasing, no removal: the statistical null") {
  SpinSystemSpec spec = fig4_spec();
  spec.model = ReactionModel::custom_dephasing;
  spec.custom_eta = 0.0;
  spec.k_singlet = spec.k_triplet = 0.0;
  TrajectoryConfig cfg;
  cfg.n_trajectories = 2000;
  cfg.master_seed = 99;
  cfg.dt = 0.02;
  cfg.t_end = 4.0;
  cfg.sample_every = 20;
  const TrajectoryEnsembleStats stats = run_ensemble(spec, cfg);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    CHECK(std::abs(stats.mean_iz[i]) <= 3.0 * stats.se_iz[i] + 1e-12);
    CHECK(stats.surviving_weight[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("pure singlet with no mixing: projections leave the state alone") {
  // Zero nuclei, zero field: H = 0, every trajectory stays the exact singlet.
  SpinSystemSpec spec;
  spec.model = ReactionModel::kominis;
  spec.k_singlet = spec.k_triplet = 1.0;
  TrajectoryConfig cfg;
  cfg.n_trajectories = 500;
  cfg.master_seed = 1;
  cfg.dt = 0.02;
  cfg.t_end = 2.0;
  cfg.sample_every = 10;
  const TrajectoryEnsembleStats stats = run_ensemble(spec, cfg);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double w = std::exp(-1.0 * stats.times[i]);
    CHECK(stats.mean_qs[i] == doctest::Approx(w).epsilon(1e-10));
    // Identical trajectories: only variance-formula cancellation noise left.
    CHECK(stats.se_qs[i] < 1e-7);
  }
}

TEST_CASE("ensemble matches the deterministic kominis solution") {
  const SpinSystemSpec spec = fig4_spec();
  TrajectoryConfig cfg;
  cfg.n_trajectories = 20000;
  cfg.master_seed = 20130106;
  cfg.dt = 0.005;
  cfg.t_end = 1.5;
  cfg.sample_every = 10;
  const TrajectoryEnsembleStats stats = run_ensemble(spec, cfg);
  const TimeSeries det = integrate(spec, cfg.t_end, cfg.dt, cfg.sample_every);
  REQUIRE(stats.size() == det.size());
  std::size_t iz_ok = 0, qs_ok = 0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (std::abs(stats.mean_iz[i] - det.iz[i]) <= 3.0 * stats.se_iz[i] + 1e-12) ++iz_ok;
    const double det_qs_unnorm = det.qs[i] * det.trace[i];
    if (std::abs(stats.mean_qs[i] - det_qs_unnorm) <= 3.0 * stats.se_qs[i] + 2e-4) ++qs_ok;
  }
  CHECK(iz_ok >= stats.size() * 95 / 100);
  CHECK(qs_ok >= stats.size() * 95 / 100);
  // Survival tracks e^{-kt} exactly in analytic_weight mode.
  for (std::size_t i = 0; i < stats.size(); ++i)
    CHECK(stats.surviving_weight[i] ==
          doctest::Approx(std::exp(-4.0 * stats.times[i])).epsilon(1e-10));
}

TEST_CASE("removal modes agree within combined errors") {
  const SpinSystemSpec spec = fig4_spec();
  TrajectoryConfig cfg;
  cfg.n_trajectories = 20000;
  cfg.master_seed = 7;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.sample_every = 10;
  cfg.removal_mode = RemovalMode::analytic_weight;
  const TrajectoryEnsembleStats a = run_ensemble(spec, cfg);
  cfg.removal_mode = RemovalMode::stochastic_kill;
  cfg.master_seed = 8;
  const TrajectoryEnsembleStats b = run_ensemble(spec, cfg);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double se = std::hypot(a.se_iz[i], b.se_iz[i]);
    if (std::abs(a.mean_iz[i] - b.mean_iz[i]) <= 3.0 * se + 1e-12) ++ok;
  }
  CHECK(ok >= a.size() * 95 / 100);
  // Killed population shrinks.
  CHECK(b.surviving_weight.back() < b.surviving_weight.front());
}

TEST_CASE("seed determinism across worker counts") {
  const SpinSystemSpec spec = fig4_spec();
  TrajectoryConfig cfg;
  cfg.n_trajectories = 5000;
  cfg.master_seed = 31337;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  cfg.sample_every = 5;
  cfg.n_workers = 1;
  const TrajectoryEnsembleStats one = run_ensemble(spec, cfg);
  for (int workers : {2, 8}) {
    cfg.n_workers = workers;
    const TrajectoryEnsembleStats many = run_ensemble(spec, cfg);
    REQUIRE(many.size() == one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(many.mean_iz[i] == one.mean_iz[i]);
      CHECK(many.se_iz[i] == one.se_iz[i]);
      CHECK(many.mean_qs[i] == one.mean_qs[i]);
      CHECK(many.surviving_weight[i] == one.surviving_weight[i]);
    }
  }
}
