// Second-order stochastic flocking dynamics (1-d):
//   dx_i = v_i dt
//   dv_i = (theta/N) sum_j Phi(|x_j - x_i|)(v_j - v_i) dt + (v_i - v_c) dL_i
// with Phi(r) = (1 + r^2)^-beta, v_c the pre-step mean velocity, and L_i
// independent Levy processes with characteristics (0, sigma^2, nu) where nu
// is the measure of a compound Poisson process with rate lambda and
// standard Gaussian jumps.
//
// The random-batch variant replaces the alignment sum by its batch version
// with 1/(p-1) normalization over batch-mates; the noise term is untouched.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyrbm/dynamics.hpp"

namespace levyrbm {

struct CuckerSmaleConfig {
  int n_particles = 16;
  double theta = 1.0;      // alignment strength
  double beta = 5.0;       // communication decay
  double sigma = 0.0;      // Gaussian part of the velocity noise
  double lambda = 0.0;     // compound-Poisson jump rate
  int batch_size = 2;      // p, random-batch variant only
  double fine_step = 0.0;  // tau
  double batch_step = 0.0; // kappa
  double horizon = 0.0;    // T
  std::uint64_t seed = 0;
  bool use_random_batch = false;

  LevyNoiseSpec noise_spec() const {
    LevyNoiseSpec spec;
    spec.gaussian_sigma = sigma;
    if (lambda > 0.0) spec.jump = CompoundPoissonJump{lambda, 1.0};
    return spec;
  }

  std::int64_t steps_per_window() const {
    return static_cast<std::int64_t>(std::llround(batch_step / fine_step));
  }
  std::int64_t n_windows() const {
    return static_cast<std::int64_t>(std::llround(horizon / batch_step));
  }

  std::vector<std::string> validate() const {
    if (n_particles < 1) throw std::invalid_argument("cucker-smale: n_particles must be >= 1");
    if (theta < 0.0) throw std::invalid_argument("cucker-smale: theta must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("cucker-smale: beta must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("cucker-smale: sigma must be >= 0");
    if (lambda < 0.0) throw std::invalid_argument("cucker-smale: lambda must be >= 0");
    if (!(fine_step > 0.0) || !(batch_step > 0.0) || !(horizon > 0.0))
      throw std::invalid_argument("cucker-smale: time steps and horizon must be > 0");
    const double spw = batch_step / fine_step;
    if (std::abs(spw - std::llround(spw)) > 1e-9 * std::max(1.0, spw) || std::llround(spw) < 1)
      throw std::invalid_argument("cucker-smale: batch_step must be an integer multiple of fine_step");
    const double nw = horizon / batch_step;
    if (std::abs(nw - std::llround(nw)) > 1e-9 * std::max(1.0, nw) || std::llround(nw) < 1)
      throw std::invalid_argument("cucker-smale: horizon must be an integer multiple of batch_step");
    if (use_random_batch) {
      if (batch_size < 2) throw std::invalid_argument("cucker-smale: batch_size must be >= 2");
      if (n_particles % batch_size != 0)
        throw std::invalid_argument("cucker-smale: batch_size must divide n_particles");
    }
    return noise_spec().validate(1);
  }
};

namespace detail {

// Mean velocity computed relative to the first particle, so that exact
// consensus (all velocities bit-equal) gives back exactly that value and
// both the alignment sum and the (v_i - v_c) noise factor vanish: consensus
// is absorbing in floating point, not just in law.
inline double mean_velocity(const std::vector<double>& v) {
  const double ref = v.front();
  double acc = 0.0;
  for (double x : v) acc += x - ref;
  return ref + acc / static_cast<double>(v.size());
}

}  // namespace detail

// One Euler step of the full alignment dynamics. The theta/N sum runs over
// all j; the j = i term is identically zero.
inline ParticleEnsemble step_cucker_smale(const ParticleEnsemble& state,
                                          const CuckerSmaleConfig& cfg,
                                          const NoiseIncrementBlock& block,
                                          std::uint64_t* eval_count = nullptr) {
  if (!state.has_velocities())
    throw std::invalid_argument("step_cucker_smale: ensemble must carry velocities");
  if (state.dim != 1) throw std::invalid_argument("step_cucker_smale: 1-d only");
  if (block.n != state.n || block.dim != 1)
    throw std::invalid_argument("step_cucker_smale: noise block shape mismatch");

  const auto kernel = InteractionKernel::cucker_smale(cfg.beta);
  const double tau = block.dt;
  const double vc = detail::mean_velocity(state.velocities);
  ParticleEnsemble next = state;
  std::uint64_t evals = 0;
  for (int i = 0; i < state.n; ++i) {
    const double xi = state.positions[i];
    const double vi = state.velocities[i];
    double align = 0.0;
    for (int j = 0; j < state.n; ++j) {
      align += kernel.weight(std::abs(state.positions[j] - xi)) * (state.velocities[j] - vi);
      ++evals;
    }
    next.positions[i] = xi + tau * vi;
    next.velocities[i] = vi + tau * (cfg.theta / state.n) * align + (vi - vc) * block.at(i);
  }
  next.t = state.t + tau;
  if (eval_count) *eval_count += evals;
  return next;
}

// Random-batch variant: alignment restricted to batch-mates, 1/(p-1)
// normalization, same noise term.
inline ParticleEnsemble step_cucker_smale_rbm(const ParticleEnsemble& state,
                                              const CuckerSmaleConfig& cfg,
                                              const BatchPartition& partition,
                                              const NoiseIncrementBlock& block,
                                              std::uint64_t* eval_count = nullptr) {
  if (!state.has_velocities())
    throw std::invalid_argument("step_cucker_smale_rbm: ensemble must carry velocities");
  if (state.dim != 1) throw std::invalid_argument("step_cucker_smale_rbm: 1-d only");
  if (block.n != state.n || block.dim != 1)
    throw std::invalid_argument("step_cucker_smale_rbm: noise block shape mismatch");
  if (partition.n != state.n)
    throw std::invalid_argument("step_cucker_smale_rbm: partition size mismatch");

  const auto kernel = InteractionKernel::cucker_smale(cfg.beta);
  const double tau = block.dt;
  const double vc = detail::mean_velocity(state.velocities);
  ParticleEnsemble next = state;
  std::uint64_t evals = 0;
  for (int i = 0; i < state.n; ++i) {
    const double xi = state.positions[i];
    const double vi = state.velocities[i];
    double align = 0.0;
    for (int j : partition.batch_members[partition.assignment[i]]) {
      if (j == i) continue;
      align += kernel.weight(std::abs(state.positions[j] - xi)) * (state.velocities[j] - vi);
      ++evals;
    }
    next.positions[i] = xi + tau * vi;
    next.velocities[i] =
        vi + tau * (cfg.theta / (partition.p - 1)) * align + (vi - vc) * block.at(i);
  }
  next.t = state.t + tau;
  if (eval_count) *eval_count += evals;
  return next;
}

// Window/step loop for the flocking dynamics, same structure as run().
inline RunRecord run_cucker_smale_dynamics(const CuckerSmaleConfig& cfg,
                                           ParticleEnsemble initial,
                                           std::span<const Observer> observers = {}) {
  cfg.validate();
  if (initial.n != cfg.n_particles || initial.dim != 1 || !initial.has_velocities())
    throw std::invalid_argument("run_cucker_smale_dynamics: initial state must be 1-d with velocities");

  const StreamFamily noise_streams(cfg.seed, StreamKind::noise);
  const StreamFamily partition_streams(cfg.seed, StreamKind::partition);
  const LevyNoiseSpec spec = cfg.noise_spec();
  const std::int64_t spw = cfg.steps_per_window();

  RunRecord record;
  ParticleEnsemble state = std::move(initial);
  const auto t_start = std::chrono::steady_clock::now();
  for (std::int64_t m = 0; m < cfg.n_windows(); ++m) {
    BatchPartition partition;
    if (cfg.use_random_batch) {
      Substream shuffle = partition_streams.at(0, static_cast<std::uint64_t>(m));
      partition = random_partition(cfg.n_particles, cfg.batch_size, shuffle);
    }
    for (std::int64_t s = 0; s < spw; ++s) {
      const std::int64_t k = m * spw + s;
      const auto block = sample_increment_block(spec, cfg.n_particles, 1, cfg.fine_step,
                                                noise_streams, static_cast<std::uint64_t>(k));
      state = cfg.use_random_batch
                  ? step_cucker_smale_rbm(state, cfg, partition, block, &record.kernel_evals)
                  : step_cucker_smale(state, cfg, block, &record.kernel_evals);
      detail::check_finite(state, k);
    }
    const double t_boundary = static_cast<double>(m + 1) * cfg.batch_step;
    state.t = t_boundary;
    record.boundary_times.push_back(t_boundary);
    for (const auto& obs : observers) obs(StepEvent{m, t_boundary, state});
  }
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  record.final_state = std::move(state);
  return record;
}

}  // namespace levyrbm
