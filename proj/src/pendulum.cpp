#include "rpsim/pendulum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "rpsim/numeric_policy.hpp"

namespace rpsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Rng {
  std::uint64_t state;
  Rng(std::uint64_t seed, std::uint64_t index)
      : state(splitmix64(seed ^ splitmix64(index + 1))) {}
  double uniform() {
    state = splitmix64(state);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
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


PendulumState antisymmetric_mode_state() {
  const double amp = 1.0 / std::sqrt(2.0);
  return PendulumState{amp, 0.0, -amp, 0.0};
}

double pair_energy(const PendulumState& s, double omega0, double coupling) {
  const double w0sq = omega0 * omega0;
  const double kappa = coupling * coupling;
  const double dx = s.x1 - s.x2;
  return 0.5 * (s.v1 * s.v1 + s.v2 * s.v2) +
         0.5 * w0sq * (s.x1 * s.x1 + s.x2 * s.x2) + 0.5 * kappa * dx * dx;
}

void leapfrog_step(PendulumState& s, double omega0, double coupling, double dt) {
  const double w0sq = omega0 * omega0;
  const double kappa = coupling * coupling;
  auto f1 = [&] { return -w0sq * s.x1 - kappa * (s.x1 - s.x2); };
  auto f2 = [&] { return -w0sq * s.x2 - kappa * (s.x2 - s.x1); };
  s.v1 += 0.5 * dt * f1();
  s.v2 += 0.5 * dt * f2();
  s.x1 += dt * s.v1;
  s.x2 += dt * s.v2;
  s.v1 += 0.5 * dt * f1();
  s.v2 += 0.5 * dt * f2();
}

void apply_kick(PendulumState& s, double omega0, KickMode mode) {
  if (mode == KickMode::position) {
    s.x1 = 1.0;
    s.v1 = 0.0;
  } else {
    const double a = std::sqrt(s.x1 * s.x1 + (s.v1 / omega0) * (s.v1 / omega0));
    if (a > 0.0) {
      s.x1 /= a;
      s.v1 /= a;
    } else {
      s.x1 = 1.0;
      s.v1 = 0.0;
    }
  }
  s.x2 = 0.0;
  s.v2 = 0.0;
}

PendulumSeries simulate_pendulums(const PendulumConfig& config) {
  if (config.n_systems < 1) throw ConfigError("n_systems must be >= 1");
  if (config.dt <= 0.0 || config.t_end < config.dt)
    throw ConfigError("need 0 < dt <= t_end");
  const double fastest = std::max({config.omega0, config.coupling,
                                   config.kick_rate, config.decay_rate});
  if (fastest > 0.0 && config.dt > 1.0 / (NumericPolicy::stability_margin * fastest))
    throw ConfigError("pendulum dt violates step policy dt <= " +
                      std::to_string(1.0 / (NumericPolicy::stability_margin * fastest)));

  const double dt = config.dt;
  const long n_steps = std::lround(config.t_end / dt);

  std::vector<long> sample_steps;
  for (long step = 0; step <= n_steps; ++step)
    if (step % config.sample_every == 0 || step == n_steps) sample_steps.push_back(step);
  const std::size_t n_samples = sample_steps.size();

  struct Accum {
    std::vector<double> sum;
    std::vector<long> alive;
    explicit Accum(std::size_t n) : sum(n, 0.0), alive(n, 0) {}
  };
  const int block_size = 1024;
  const int n_blocks = (config.n_systems + block_size - 1) / block_size;
  std::vector<Accum> blocks(n_blocks, Accum(n_samples));

  auto run_system = [&](std::uint64_t index, Accum& acc) {
    Rng rng(config.seed, index);
    PendulumState st = antisymmetric_mode_state();
    std::size_t next_sample = 0;
    for (long step = 0; step <= n_steps; ++step) {
      if (next_sample < n_samples && sample_steps[next_sample] == step) {
        acc.sum[next_sample] += st.x1 + st.x2;
        acc.alive[next_sample] += 1;
        ++next_sample;
      }
      if (step == n_steps) break;
      if (config.decay_rate > 0.0 && rng.uniform() < config.decay_rate * dt)
        return; // system removed; later samples see it as dead
      if (config.kick_rate > 0.0 && rng.uniform() < config.kick_rate * dt)
        apply_kick(st, config.omega0, config.kick_mode);
      leapfrog_step(st, config.omega0, config.coupling, dt);
    }
  };

  const int n_workers = resolve_workers(config.n_workers);
  std::atomic<int> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const int lo = b * block_size;
      const int hi = std::min(lo + block_size, config.n_systems);
      for (int i = lo; i < hi; ++i) run_system(static_cast<std::uint64_t>(i), blocks[b]);
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  PendulumSeries out;
  const double n = static_cast<double>(config.n_systems);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double sum = 0.0;
    long alive = 0;
    for (const auto& b : blocks) {
      sum += b.sum[i];
      alive += b.alive[i];
    }
    out.times.push_back(sample_steps[i] * dt);
    // mean over survivors times surviving fraction == sum / n_systems
    out.mean_sum.push_back(sum / n);
    out.surviving_fraction.push_back(static_cast<double>(alive) / n);
  }
  return out;
}

}  // namespace rpsim
