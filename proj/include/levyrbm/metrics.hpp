// Error functionals and diagnostics: coupled pathwise error, exact 1-d
// empirical Wasserstein distances, flocking diameters, log-log slope fits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "levyrbm/ensemble.hpp"

namespace levyrbm {

// Time-indexed record of a (coupled) run.
struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> e1;  // mean |X_full - X_rbm| per particle
  std::vector<double> e2;  // rms version, optional
  std::vector<double> w1;  // empirical W1 across particles, optional (1-d)
  std::vector<double> dx;  // position diameter, optional
  std::vector<double> dv;  // velocity diameter, optional
  std::uint64_t kernel_eval_count = 0;
  double wall_clock = 0.0;  // seconds

  double final_e1() const { return e1.empty() ? 0.0 : e1.back(); }
};

// (1/N) sum_i |x_i^a - x_i^b| with the per-particle Euclidean norm.
inline double coupled_error_e1(const ParticleEnsemble& a, const ParticleEnsemble& b) {
  require_same_shape(a, b, "coupled_error_e1");
  double acc = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double r2 = 0.0;
    for (int k = 0; k < a.dim; ++k) {
      const double d = a.pos(i)[k] - b.pos(i)[k];
      r2 += d * d;
    }
    acc += std::sqrt(r2);
  }
  return acc / a.n;
}

// Root mean square companion of the above.
inline double coupled_error_e2(const ParticleEnsemble& a, const ParticleEnsemble& b) {
  require_same_shape(a, b, "coupled_error_e2");
  double acc = 0.0;
  for (int i = 0; i < a.n; ++i) {
    for (int k = 0; k < a.dim; ++k) {
      const double d = a.pos(i)[k] - b.pos(i)[k];
      acc += d * d;
    }
  }
  return std::sqrt(acc / a.n);
}

// Exact Wasserstein-p distance between two equal-weight empirical measures
// on the line: sort both samples and pair by rank.
inline double wasserstein_1d(std::span<const double> samples_a, std::span<const double> samples_b,
                             int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("wasserstein_1d: order must be 1 or 2");
  if (samples_a.size() != samples_b.size())
    throw std::invalid_argument("wasserstein_1d: sample arrays must have equal length");
  if (samples_a.empty()) throw std::invalid_argument("wasserstein_1d: empty samples");

  std::vector<double> a(samples_a.begin(), samples_a.end());
  std::vector<double> b(samples_b.begin(), samples_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    acc += (order == 1) ? d : d * d;
  }
  acc /= static_cast<double>(a.size());
  return (order == 1) ? acc : std::sqrt(acc);
}

// Max pairwise position and velocity spread. 1-d uses max - min; higher
// dimensions fall back to the O(N^2) scan.
inline std::pair<double, double> flocking_diameters(const ParticleEnsemble& state) {
  if (!state.has_velocities())
    throw std::invalid_argument("flocking_diameters: ensemble has no velocities");
  if (state.n == 0) return {0.0, 0.0};
  if (state.dim == 1) {
    auto [xmin, xmax] = std::minmax_element(state.positions.begin(), state.positions.end());
    auto [vmin, vmax] = std::minmax_element(state.velocities.begin(), state.velocities.end());
    return {*xmax - *xmin, *vmax - *vmin};
  }
  auto diameter = [&](const std::vector<double>& data) {
    double best = 0.0;
    for (int i = 0; i < state.n; ++i) {
      for (int j = i + 1; j < state.n; ++j) {
        double r2 = 0.0;
        for (int k = 0; k < state.dim; ++k) {
          const double d = data[static_cast<std::size_t>(i) * state.dim + k] -
                           data[static_cast<std::size_t>(j) * state.dim + k];
          r2 += d * d;
        }
        best = std::max(best, r2);
      }
    }
    return std::sqrt(best);
  };
  return {diameter(state.positions), diameter(state.velocities)};
}

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // of log y against log x
};

// Least-squares line through (log x_k, log y_k).
inline LogLogFit fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need >= 2 points of equal count");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0))
      throw std::invalid_argument("fit_loglog_slope: inputs must be positive");
    const double lx = std::log(xs[k]);
    const double ly = std::log(ys[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
  LogLogFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace levyrbm
