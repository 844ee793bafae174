// Forward-Euler time stepping for the pairwise interacting particle system
// driven by Levy noise, its random-batch counterpart, and the synchronously
// coupled pair of both.
//
// Time structure: the horizon T splits into T/kappa batch windows; each
// window splits into kappa/tau fine Euler steps. One partition is drawn per
// window and held fixed across its fine steps. Noise is addressed by
// (particle, fine-step) substreams, so the same seed yields the same noise
// path no matter which dynamics consumes it.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyrbm/batching.hpp"
#include "levyrbm/ensemble.hpp"
#include "levyrbm/forces.hpp"
#include "levyrbm/metrics.hpp"
#include "levyrbm/noise.hpp"
#include "levyrbm/rng.hpp"

namespace levyrbm {

enum class RunMode { full, rbm, coupled };

inline std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::full: return "full";
    case RunMode::rbm: return "rbm";
    case RunMode::coupled: return "coupled";
  }
  return "full";
}

struct SimulationConfig {
  int n_particles = 0;
  int dim = 1;
  int batch_size = 2;      // p
  double fine_step = 0.0;  // tau
  double batch_step = 0.0; // kappa, the partition refresh interval
  double horizon = 0.0;    // T
  ConfiningPotential potential;
  InteractionKernel kernel;
  LevyNoiseSpec noise;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::full;

  std::int64_t steps_per_window() const {
    return static_cast<std::int64_t>(std::llround(batch_step / fine_step));
  }
  std::int64_t n_windows() const {
    return static_cast<std::int64_t>(std::llround(horizon / batch_step));
  }

  // Throws on hard violations, returns soft warnings.
  std::vector<std::string> validate() const {
    if (n_particles < 1) throw std::invalid_argument("config: n_particles must be >= 1");
    if (dim < 1 || dim > 8) throw std::invalid_argument("config: dim must be in [1,8]");
    if (!(fine_step > 0.0)) throw std::invalid_argument("config: fine_step must be > 0");
    if (!(batch_step > 0.0)) throw std::invalid_argument("config: batch_step must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");

    const double spw = batch_step / fine_step;
    if (std::abs(spw - std::llround(spw)) > 1e-9 * std::max(1.0, spw) || std::llround(spw) < 1)
      throw std::invalid_argument("config: batch_step must be an integer multiple of fine_step");
    const double nw = horizon / batch_step;
    if (std::abs(nw - std::llround(nw)) > 1e-9 * std::max(1.0, nw) || std::llround(nw) < 1)
      throw std::invalid_argument("config: horizon must be an integer multiple of batch_step");
    if (n_windows() * steps_per_window() > 0xffffffffll)
      throw std::invalid_argument("config: too many fine steps for the stream layout (2^32)");

    if (mode != RunMode::full) {
      if (batch_size < 2) throw std::invalid_argument("config: batch_size must be >= 2");
      if (n_particles % batch_size != 0)
        throw std::invalid_argument("config: batch_size must divide n_particles");
    }

    auto warnings = noise.validate(dim);
    const double gap = potential.strong_convexity() - 2.0 * kernel.lipschitz();
    if (kernel.family != InteractionKernel::Family::zero && gap <= 0.0)
      warnings.push_back("convexity gap lambda_V - 2 L_K = " + std::to_string(gap) +
                         " is not positive; uniform-in-time guarantees do not apply");
    return warnings;
  }
};

namespace detail {

inline void check_finite(const ParticleEnsemble& state, std::int64_t step_index) {
  const int bad = state.first_nonfinite();
  if (bad >= 0)
    throw std::runtime_error("non-finite state at fine step " + std::to_string(step_index) +
                             ", particle " + std::to_string(bad) +
                             " (fine_step too large for this noise?)");
}

}  // namespace detail

// One Euler step of the full O(N^2) dynamics:
// x_i += tau * (-grad V(x_i) + mean_{j != i} K(x_j - x_i)) + dL_i.
// Forces are read from the pre-step snapshot; the result is a fresh state.
inline ParticleEnsemble step_full(const ParticleEnsemble& state, const SimulationConfig& cfg,
                                  const NoiseIncrementBlock& block,
                                  std::uint64_t* eval_count = nullptr) {
  if (block.n != state.n || block.dim != state.dim)
    throw std::invalid_argument("step_full: noise block shape mismatch");
  ParticleEnsemble next = state;
  const double tau = block.dt;
  double gv[8];
  double force[8];
  for (int i = 0; i < state.n; ++i) {
    cfg.potential.grad(state.pos(i), gv, state.dim);
    full_mean_force(i, state, cfg.kernel, force, eval_count);
    double* xi = next.pos(i);
    for (int k = 0; k < state.dim; ++k)
      xi[k] = state.pos(i)[k] + tau * (force[k] - gv[k]) + block.at(i, k);
  }
  next.t = state.t + tau;
  return next;
}

// Same step with the batch-restricted force (O(pN) kernel evaluations).
inline ParticleEnsemble step_rbm(const ParticleEnsemble& state, const SimulationConfig& cfg,
                                 const BatchPartition& partition,
                                 const NoiseIncrementBlock& block,
                                 std::uint64_t* eval_count = nullptr) {
  if (block.n != state.n || block.dim != state.dim)
    throw std::invalid_argument("step_rbm: noise block shape mismatch");
  ParticleEnsemble next = state;
  const double tau = block.dt;
  double gv[8];
  double force[8];
  for (int i = 0; i < state.n; ++i) {
    cfg.potential.grad(state.pos(i), gv, state.dim);
    batch_mean_force(i, partition, state, cfg.kernel, force, eval_count);
    double* xi = next.pos(i);
    for (int k = 0; k < state.dim; ++k)
      xi[k] = state.pos(i)[k] + tau * (force[k] - gv[k]) + block.at(i, k);
  }
  next.t = state.t + tau;
  return next;
}

struct StepEvent {
  std::int64_t window = 0;  // index m of the window that just finished
  double t = 0.0;           // boundary time t_{m+1}
  const ParticleEnsemble& state;
};
using Observer = std::function<void(const StepEvent&)>;

struct CoupledEvent {
  std::int64_t window = 0;
  double t = 0.0;
  const ParticleEnsemble& full_state;
  const ParticleEnsemble& rbm_state;
};
using CoupledObserver = std::function<void(const CoupledEvent&)>;

struct RunRecord {
  ParticleEnsemble final_state;
  std::vector<double> boundary_times;
  std::uint64_t kernel_evals = 0;
  double wall_seconds = 0.0;
};

// Drive one dynamics from the given initial state to the horizon.
// Observers fire at every batch boundary (also in full mode, where the
// window structure only sets the observation cadence).
inline RunRecord run(const SimulationConfig& cfg, ParticleEnsemble initial,
                     std::span<const Observer> observers = {}) {
  cfg.validate();
  if (initial.n != cfg.n_particles || initial.dim != cfg.dim)
    throw std::invalid_argument("run: initial state does not match config");
  if (cfg.mode == RunMode::coupled)
    throw std::invalid_argument("run: coupled mode is driven by run_coupled");

  const StreamFamily noise_streams(cfg.seed, StreamKind::noise);
  const StreamFamily partition_streams(cfg.seed, StreamKind::partition);
  const std::int64_t spw = cfg.steps_per_window();

  RunRecord record;
  ParticleEnsemble state = std::move(initial);
  const auto t_start = std::chrono::steady_clock::now();
  for (std::int64_t m = 0; m < cfg.n_windows(); ++m) {
    BatchPartition partition;
    if (cfg.mode == RunMode::rbm) {
      Substream shuffle = partition_streams.at(0, static_cast<std::uint64_t>(m));
      partition = random_partition(cfg.n_particles, cfg.batch_size, shuffle);
    }
    for (std::int64_t s = 0; s < spw; ++s) {
      const std::int64_t k = m * spw + s;
      const auto block = sample_increment_block(cfg.noise, cfg.n_particles, cfg.dim,
                                                cfg.fine_step, noise_streams,
                                                static_cast<std::uint64_t>(k));
      state = (cfg.mode == RunMode::rbm)
                  ? step_rbm(state, cfg, partition, block, &record.kernel_evals)
                  : step_full(state, cfg, block, &record.kernel_evals);
      detail::check_finite(state, k);
    }
    const double t_boundary = static_cast<double>(m + 1) * cfg.batch_step;
    state.t = t_boundary;  // pin boundary times against fine-step accumulation
    record.boundary_times.push_back(t_boundary);
    for (const auto& obs : observers) obs(StepEvent{m, t_boundary, state});
  }
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  record.final_state = std::move(state);
  return record;
}

// Advance the full and random-batch dynamics side by side from identical
// initial states, feeding both the same increment blocks. The recorded
// series is the pathwise error between them at every batch boundary.
inline ErrorSeries run_coupled(const SimulationConfig& cfg, const ParticleEnsemble& initial,
                               std::span<const CoupledObserver> observers = {}) {
  cfg.validate();
  if (cfg.mode != RunMode::coupled)
    throw std::invalid_argument("run_coupled: config mode must be coupled");
  if (initial.n != cfg.n_particles || initial.dim != cfg.dim)
    throw std::invalid_argument("run_coupled: initial state does not match config");

  const StreamFamily noise_streams(cfg.seed, StreamKind::noise);
  const StreamFamily partition_streams(cfg.seed, StreamKind::partition);
  const std::int64_t spw = cfg.steps_per_window();

  ParticleEnsemble full_state = initial;
  ParticleEnsemble rbm_state = initial;
  ErrorSeries series;
  const bool scalar = (cfg.dim == 1);
  const auto t_start = std::chrono::steady_clock::now();
  for (std::int64_t m = 0; m < cfg.n_windows(); ++m) {
    Substream shuffle = partition_streams.at(0, static_cast<std::uint64_t>(m));
    const auto partition = random_partition(cfg.n_particles, cfg.batch_size, shuffle);
    for (std::int64_t s = 0; s < spw; ++s) {
      const std::int64_t k = m * spw + s;
      const auto block = sample_increment_block(cfg.noise, cfg.n_particles, cfg.dim,
                                                cfg.fine_step, noise_streams,
                                                static_cast<std::uint64_t>(k));
      full_state = step_full(full_state, cfg, block, &series.kernel_eval_count);
      rbm_state = step_rbm(rbm_state, cfg, partition, block, &series.kernel_eval_count);
      detail::check_finite(full_state, k);
      detail::check_finite(rbm_state, k);
    }
    const double t_boundary = static_cast<double>(m + 1) * cfg.batch_step;
    full_state.t = rbm_state.t = t_boundary;
    series.times.push_back(t_boundary);
    series.e1.push_back(coupled_error_e1(full_state, rbm_state));
    series.e2.push_back(coupled_error_e2(full_state, rbm_state));
    if (scalar) series.w1.push_back(wasserstein_1d(full_state.positions, rbm_state.positions, 1));
    for (const auto& obs : observers) obs(CoupledEvent{m, t_boundary, full_state, rbm_state});
  }
  series.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return series;
}

}  // namespace levyrbm
