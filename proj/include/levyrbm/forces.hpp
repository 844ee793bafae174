// Confining potentials and interaction kernels, with the regularity
// metadata (bound, Lipschitz constant, convexity modulus) that experiment
// configs can check against.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "levyrbm/ensemble.hpp"

namespace levyrbm {

struct ConfiningPotential {
  enum class Family { none, quadratic };
  Family family = Family::none;
  double a = 0.0;  // quadratic strength, grad V(x) = a x

  static ConfiningPotential none() { return {}; }
  static ConfiningPotential quadratic(double strength) {
    if (strength < 0.0) throw std::invalid_argument("quadratic potential: a must be >= 0");
    return {Family::quadratic, strength};
  }

  double strong_convexity() const { return a; }  // lambda_V
  double grad_lipschitz() const { return a; }    // L_V

  void grad(const double* x, double* out, int dim) const {
    for (int k = 0; k < dim; ++k) out[k] = a * x[k];
  }

  std::string config_name() const {
    if (family == Family::none || a == 0.0) return "none";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "quadratic:a=%g", a);
    return buf;
  }
};

struct InteractionKernel {
  enum class Family { zero, smooth_bounded, cucker_smale_velocity };
  Family family = Family::zero;
  double beta = 5.0;  // decay exponent of the velocity-alignment weight

  static InteractionKernel zero() { return {}; }
  // K(x) = x / (1 + |x|^2): odd, bounded by 1/2, 1-Lipschitz.
  static InteractionKernel smooth_bounded() { return {Family::smooth_bounded, 0.0}; }
  // Phi(r) = (1 + r^2)^-beta, acting on velocity differences.
  static InteractionKernel cucker_smale(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("cucker_smale kernel: beta must be > 0");
    return {Family::cucker_smale_velocity, beta};
  }

  // M_K
  double bound() const {
    switch (family) {
      case Family::zero: return 0.0;
      case Family::smooth_bounded: return 0.5;
      case Family::cucker_smale_velocity: return 1.0;  // 0 < Phi <= 1
    }
    return 0.0;
  }

  // L_K
  double lipschitz() const {
    switch (family) {
      case Family::zero: return 0.0;
      case Family::smooth_bounded: return 1.0;  // |K'| peaks at 0
      case Family::cucker_smale_velocity: {
        // max_r |Phi'(r)| attained at r^2 = 1/(2 beta + 1)
        const double r = 1.0 / std::sqrt(2.0 * beta + 1.0);
        return 2.0 * beta * r * std::pow(1.0 + r * r, -(beta + 1.0));
      }
    }
    return 0.0;
  }

  // Pairwise force K(dx) for position-coupled families.
  void evaluate(const double* dx, double* out, int dim) const {
    switch (family) {
      case Family::zero:
        for (int k = 0; k < dim; ++k) out[k] = 0.0;
        return;
      case Family::smooth_bounded: {
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) r2 += dx[k] * dx[k];
        const double s = 1.0 / (1.0 + r2);
        for (int k = 0; k < dim; ++k) out[k] = dx[k] * s;
        return;
      }
      case Family::cucker_smale_velocity:
        throw std::logic_error("cucker_smale kernel weights velocities; use weight(r)");
    }
  }

  // Communication weight Phi(r) for the velocity-alignment family.
  double weight(double r) const {
    if (family != Family::cucker_smale_velocity)
      throw std::logic_error("weight(r) is only defined for the cucker_smale kernel");
    return std::pow(1.0 + r * r, -beta);
  }

  std::string config_name() const {
    switch (family) {
      case Family::zero: return "zero";
      case Family::smooth_bounded: return "smooth_bounded";
      case Family::cucker_smale_velocity: {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "cucker_smale:beta=%g", beta);
        return buf;
      }
    }
    return "zero";
  }
};

inline ConfiningPotential parse_potential(const std::string& name) {
  if (name == "none") return ConfiningPotential::none();
  if (name.rfind("quadratic:a=", 0) == 0)
    return ConfiningPotential::quadratic(std::stod(name.substr(12)));
  throw std::invalid_argument("unknown potential '" + name + "' (expected none | quadratic:a=<r>)");
}

inline InteractionKernel parse_kernel(const std::string& name) {
  if (name == "zero") return InteractionKernel::zero();
  if (name == "smooth_bounded") return InteractionKernel::smooth_bounded();
  if (name.rfind("cucker_smale:beta=", 0) == 0)
    return InteractionKernel::cucker_smale(std::stod(name.substr(18)));
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (expected zero | smooth_bounded | cucker_smale:beta=<r>)");
}

// grad V at one point.
inline void grad_potential(const ConfiningPotential& pot, const double* x, double* out, int dim) {
  pot.grad(x, out, dim);
}

// Mean pairwise force on particle i over all other particles:
// (1/(N-1)) sum_{j != i} K(x_j - x_i). O(N) kernel evaluations; N = 1
// yields the zero vector (empty sum). Every K call bumps *eval_count.
inline void full_mean_force(int i, const ParticleEnsemble& state, const InteractionKernel& kernel,
                            double* out, std::uint64_t* eval_count = nullptr) {
  const int dim = state.dim;
  if (i < 0 || i >= state.n) throw std::out_of_range("full_mean_force: particle index");
  for (int k = 0; k < dim; ++k) out[k] = 0.0;
  if (state.n < 2) return;

  double dx[8];
  double kv[8];
  if (dim > 8) throw std::invalid_argument("full_mean_force: dim > 8 unsupported");
  const double* xi = state.pos(i);
  std::uint64_t evals = 0;
  for (int j = 0; j < state.n; ++j) {
    if (j == i) continue;
    const double* xj = state.pos(j);
    for (int k = 0; k < dim; ++k) dx[k] = xj[k] - xi[k];
    kernel.evaluate(dx, kv, dim);
    ++evals;
    for (int k = 0; k < dim; ++k) out[k] += kv[k];
  }
  const double inv = 1.0 / (state.n - 1);
  for (int k = 0; k < dim; ++k) out[k] *= inv;
  if (eval_count) *eval_count += evals;
}

}  // namespace levyrbm
