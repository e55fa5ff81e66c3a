#include "rpsim/dynamics_stochastic.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "rpsim/dynamics_deterministic.hpp"

namespace rpsim {

OperatorMatrix propagator(const OperatorMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("propagator: eigendecomposition failed");
  const Eigen::VectorXd w = es.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phases[i] = std::exp(cplx(0.0, -w[i] * dt));
  OperatorMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  const double dev = (u * u.adjoint() - OperatorMatrix::Identity(u.rows(), u.cols()))
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > NumericPolicy::unitarity_tol)
    throw NumericError("propagator: unitarity deviation " + std::to_string(dev));
  return u;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based per-trajectory stream: reproducible independent of the
// order trajectories are executed in.
struct TrajectoryRng {
  std::uint64_t state;
  explicit TrajectoryRng(std::uint64_t master_seed, std::uint64_t index)
      : state(splitmix64(master_seed ^ splitmix64(index + 1))) {}
  double uniform() {
    state = splitmix64(state);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  std::uint64_t next_u64() {
    state = splitmix64(state);
    return state;
  }
};

struct BlockAccum {
  std::vector<double> sum_iz, sum_iz2, sum_qs, sum_qs2, sum_w;
  explicit BlockAccum(std::size_t n)
      : sum_iz(n, 0.0), sum_iz2(n, 0.0), sum_qs(n, 0.0), sum_qs2(n, 0.0), sum_w(n, 0.0) {}
};

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RPSIM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

TrajectoryEnsembleStats run_ensemble(const SpinSystemSpec& spec, const TrajectoryConfig& config) {
  spec.validate();
  if (spec.model != ReactionModel::kominis && spec.model != ReactionModel::custom_dephasing)
    throw ConfigError("run_ensemble: unraveling implemented for kominis and custom_dephasing only");
  if (spec.k_singlet != spec.k_triplet)
    throw ConfigError("run_ensemble: k_S != k_T is unsupported");
  if (config.n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  if (config.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  check_step_policy(spec, config.dt);
  if (config.t_end < config.dt) throw ConfigError("t_end must be at least dt");

  const double k = spec.k_singlet;
  const double proj_rate = ReactionSuperoperatorParams::from_spec(spec).eta;
  const double dt = config.dt;
  const long n_steps = std::lround(config.t_end / dt);

  const Layout lay = spec.layout();
  const int dim = total_dim(lay);
  const int mult = dim / 4; // nuclear multiplicity M
  const OperatorMatrix u = propagator(build_hamiltonian(spec), dt);
  const OperatorMatrix qs = singlet_projector(lay);
  const OperatorMatrix iz = total_nuclear_z(spec);

  // rho_0 = Q_S / M has M equal-weight eigenvectors |S> (x) |m>.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<StateVector> singlet_basis;
  for (int m = 0; m < mult; ++m) {
    StateVector v = StateVector::Zero(dim);
    v[(0 * 2 + 1) * mult + m] = inv_sqrt2;  // |up, down>
    v[(1 * 2 + 0) * mult + m] = -inv_sqrt2; // |down, up>
    singlet_basis.push_back(v);
  }

  std::vector<long> sample_steps;
  for (long step = 0; step <= n_steps; ++step)
    if (step % config.sample_every == 0 || step == n_steps) sample_steps.push_back(step);
  const std::size_t n_samples = sample_steps.size();

  const int block_size = 1024;
  const int n_blocks = (config.n_trajectories + block_size - 1) / block_size;
  std::vector<BlockAccum> blocks(n_blocks, BlockAccum(n_samples));

  auto run_trajectory = [&](std::uint64_t index, BlockAccum& acc) {
    TrajectoryRng rng(config.master_seed, index);
    StateVector psi = singlet_basis[rng.next_u64() % mult];
    bool alive = true;
    std::size_t next_sample = 0;
    for (long step = 0; step <= n_steps; ++step) {
      if (next_sample < n_samples && sample_steps[next_sample] == step) {
        double w = 0.0;
        if (config.removal_mode == RemovalMode::analytic_weight)
          w = std::exp(-k * step * dt);
        else if (alive)
          w = 1.0;
        double v_iz = 0.0, v_qs = 0.0;
        if (w > 0.0) {
          v_iz = w * psi.dot(iz * psi).real();
          v_qs = w * psi.dot(qs * psi).real();
        }
        acc.sum_iz[next_sample] += v_iz;
        acc.sum_iz2[next_sample] += v_iz * v_iz;
        acc.sum_qs[next_sample] += v_qs;
        acc.sum_qs2[next_sample] += v_qs * v_qs;
        acc.sum_w[next_sample] += w;
        ++next_sample;
      }
      if (step == n_steps) break;
      if (config.removal_mode == RemovalMode::stochastic_kill && alive) {
        if (rng.uniform() < k * dt) alive = false;
      }
      if (!alive && config.removal_mode == RemovalMode::stochastic_kill) {
        // Dead trajectories contribute weight 0; no need to evolve them,
        // but the RNG stream stays per-trajectory so draws are not shared.
        continue;
      }
      psi = u * psi;
      psi /= psi.norm();
      if (rng.uniform() < proj_rate * dt) {
        const double p_singlet = psi.dot(qs * psi).real();
        bool take_singlet = rng.uniform() < p_singlet;
        // A numerically empty branch cannot be renormalized; take the other.
        if (take_singlet && p_singlet < NumericPolicy::branch_prob_floor) take_singlet = false;
        if (!take_singlet && 1.0 - p_singlet < NumericPolicy::branch_prob_floor) take_singlet = true;
        if (take_singlet)
          psi = (qs * psi) / std::sqrt(p_singlet);
        else
          psi = (psi - qs * psi) / std::sqrt(1.0 - p_singlet);
      }
    }
  };

  const int n_workers = resolve_workers(config.n_workers);
  std::atomic<int> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const int lo = b * block_size;
      const int hi = std::min(lo + block_size, config.n_trajectories);
      for (int i = lo; i < hi; ++i)
        run_trajectory(static_cast<std::uint64_t>(i), blocks[b]);
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Reduce in block-index order so thread count never changes the result.
  BlockAccum total(n_samples);
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      total.sum_iz[i] += b.sum_iz[i];
      total.sum_iz2[i] += b.sum_iz2[i];
      total.sum_qs[i] += b.sum_qs[i];
      total.sum_qs2[i] += b.sum_qs2[i];
      total.sum_w[i] += b.sum_w[i];
    }
  }

  const double n = static_cast<double>(config.n_trajectories);
  TrajectoryEnsembleStats stats;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double m_iz = total.sum_iz[i] / n;
    const double m_qs = total.sum_qs[i] / n;
    const double var_iz = std::max(0.0, total.sum_iz2[i] / n - m_iz * m_iz);
    const double var_qs = std::max(0.0, total.sum_qs2[i] / n - m_qs * m_qs);
    stats.times.push_back(sample_steps[i] * dt);
    stats.mean_iz.push_back(m_iz);
    stats.se_iz.push_back(std::sqrt(var_iz / n));
    stats.mean_qs.push_back(m_qs);
    stats.se_qs.push_back(std::sqrt(var_qs / n));
    stats.surviving_weight.push_back(total.sum_w[i] / n);
  }
  return stats;
}

}  // namespace rpsim
