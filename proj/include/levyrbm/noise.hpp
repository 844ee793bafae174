// Levy increment sampling.
//
// A process is declared by its triplet: drift b, Gaussian sigma, and an
// optional pure-jump part (symmetric alpha-stable or compound Poisson with
// Gaussian jump sizes). Increments over a fine step dt are sampled exactly
// in law; there is no small-jump truncation anywhere.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "levyrbm/rng.hpp"

namespace levyrbm {

struct AlphaStableJump {
  double alpha = 1.5;  // stability index
  double scale = 1.0;  // symbol is exp(-(scale*|u|)^alpha) per unit time
};

struct CompoundPoissonJump {
  double rate_lambda = 0.0;  // jumps per unit time
  double jump_sdev = 1.0;    // jump sizes ~ Normal(0, jump_sdev^2)
};

using JumpPart = std::variant<std::monostate, AlphaStableJump, CompoundPoissonJump>;

struct LevyNoiseSpec {
  double drift_b = 0.0;
  double gaussian_sigma = 0.0;
  JumpPart jump{};

  bool has_jump() const { return !std::holds_alternative<std::monostate>(jump); }

  // Throws std::invalid_argument on hard violations; returns soft warnings.
  std::vector<std::string> validate(int dim = 1) const {
    std::vector<std::string> warnings;
    if (gaussian_sigma < 0.0) throw std::invalid_argument("noise: gaussian_sigma must be >= 0");
    if (const auto* st = std::get_if<AlphaStableJump>(&jump)) {
      if (!(st->alpha > 0.0 && st->alpha < 2.0))
        throw std::invalid_argument("noise: alpha-stable jump requires alpha in (0,2)");
      if (!(st->scale > 0.0))
        throw std::invalid_argument("noise: alpha-stable scale must be > 0");
      if (dim != 1)
        throw std::invalid_argument("noise: alpha-stable jump part is 1-d only");
      if (st->alpha <= 1.0)
        warnings.push_back("alpha <= 1: sampled exactly, but outside the convergence theory (alpha in (1,2))");
    } else if (const auto* cp = std::get_if<CompoundPoissonJump>(&jump)) {
      if (cp->rate_lambda < 0.0)
        throw std::invalid_argument("noise: compound-Poisson rate must be >= 0");
      if (!(cp->jump_sdev > 0.0))
        throw std::invalid_argument("noise: compound-Poisson jump_sdev must be > 0");
    }
    return warnings;
  }
};

// One batch of increments: row i holds L^i(t+dt) - L^i(t), independent
// across particles by construction (disjoint substreams).
struct NoiseIncrementBlock {
  std::vector<double> increments;  // n * dim, row-major
  double dt = 0.0;
  int n = 0;
  int dim = 1;

  double at(int particle, int k = 0) const {
    return increments[static_cast<std::size_t>(particle) * dim + k];
  }
};

// Standard symmetric alpha-stable variate, characteristic function
// exp(-|u|^alpha). Chambers-Mallows-Stuck construction: one uniform angle,
// one unit exponential. Valid on alpha in (0,2]; alpha=2 yields Normal(0,2)
// and alpha=1 degenerates to tan(U) (Cauchy) through the same expression.
inline double sample_standard_symmetric_stable(double alpha, Substream& rng) {
  const double u = 3.14159265358979323846 * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
         std::pow(std::cos(u - alpha * u) / w, (1.0 - alpha) / alpha);
}

// Increment of the stable process over dt: self-similarity gives exactly
// dt^{1/alpha} times a unit sample.
inline double sample_alpha_stable_increment(double alpha, double dt, Substream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("sample_alpha_stable_increment: alpha must be in (0,2]");
  if (dt < 0.0) throw std::invalid_argument("sample_alpha_stable_increment: dt must be >= 0");
  if (dt == 0.0) return 0.0;
  return std::pow(dt, 1.0 / alpha) * sample_standard_symmetric_stable(alpha, rng);
}

// Compound Poisson increment: M ~ Poisson(rate*dt) jump count (Knuth
// product method; rate*dt stays small in every use here), then M Gaussian
// jumps. Exact, no Bernoulli approximation.
inline double sample_compound_poisson_increment(double rate_lambda, double jump_sdev,
                                                double dt, Substream& rng) {
  if (rate_lambda < 0.0)
    throw std::invalid_argument("sample_compound_poisson_increment: rate must be >= 0");
  if (!(jump_sdev > 0.0))
    throw std::invalid_argument("sample_compound_poisson_increment: jump_sdev must be > 0");
  if (dt < 0.0) throw std::invalid_argument("sample_compound_poisson_increment: dt must be >= 0");
  const double mean = rate_lambda * dt;
  if (mean == 0.0) return 0.0;
  const double threshold = std::exp(-mean);
  std::uint64_t count = 0;
  double prod = rng.uniform_open();
  while (prod > threshold) {
    ++count;
    prod *= rng.uniform_open();
  }
  double sum = 0.0;
  for (std::uint64_t k = 0; k < count; ++k) sum += jump_sdev * rng.normal();
  return sum;
}

// Assemble drift + Gaussian + jump parts for every particle and coordinate.
// Each particle draws from its own (particle, step) substream, so the block
// is reproducible independently of batching, threading, or call order.
inline NoiseIncrementBlock sample_increment_block(const LevyNoiseSpec& spec, int n_particles,
                                                  int dim, double dt,
                                                  const StreamFamily& streams,
                                                  std::uint64_t step_index) {
  if (n_particles < 1) throw std::invalid_argument("sample_increment_block: n_particles >= 1");
  if (dim < 1) throw std::invalid_argument("sample_increment_block: dim >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_increment_block: dt must be > 0");
  spec.validate(dim);

  NoiseIncrementBlock block;
  block.dt = dt;
  block.n = n_particles;
  block.dim = dim;
  block.increments.assign(static_cast<std::size_t>(n_particles) * dim, 0.0);

  const double drift = spec.drift_b * dt;
  const double sigma_sqrt_dt = spec.gaussian_sigma * std::sqrt(dt);
  for (int i = 0; i < n_particles; ++i) {
    Substream rng = streams.at(static_cast<std::uint64_t>(i), step_index);
    double* row = block.increments.data() + static_cast<std::size_t>(i) * dim;
    for (int k = 0; k < dim; ++k) {
      double v = drift;
      if (sigma_sqrt_dt != 0.0) v += sigma_sqrt_dt * rng.normal();
      if (const auto* st = std::get_if<AlphaStableJump>(&spec.jump)) {
        v += st->scale * sample_alpha_stable_increment(st->alpha, dt, rng);
      } else if (const auto* cp = std::get_if<CompoundPoissonJump>(&spec.jump)) {
        v += sample_compound_poisson_increment(cp->rate_lambda, cp->jump_sdev, dt, rng);
      }
      row[k] = v;
    }
  }
  return block;
}

// (1/n) sum exp(i u x_k); validation oracle against closed-form symbols.
inline std::complex<double> empirical_char_function(std::span<const double> samples, double u) {
  if (samples.empty())
    throw std::invalid_argument("empirical_char_function: need at least one sample");
  double re = 0.0, im = 0.0;
  for (double x : samples) {
    re += std::cos(u * x);
    im += std::sin(u * x);
  }
  const double n = static_cast<double>(samples.size());
  return {re / n, im / n};
}

}  // namespace levyrbm
