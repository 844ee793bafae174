#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levyrbm {

// State of N particles at one time point. Positions (and velocities, for
// second-order systems) are row-major n x dim. All entries must stay
// finite; the run loop aborts on the first NaN/Inf.
struct ParticleEnsemble {
  int n = 0;
  int dim = 1;
  double t = 0.0;
  std::vector<double> positions;   // n * dim
  std::vector<double> velocities;  // empty, or n * dim

  ParticleEnsemble() = default;
  ParticleEnsemble(int n_particles, int d, bool with_velocities = false)
      : n(n_particles), dim(d), positions(static_cast<std::size_t>(n_particles) * d, 0.0) {
    if (with_velocities) velocities.assign(static_cast<std::size_t>(n_particles) * d, 0.0);
  }

  bool has_velocities() const { return !velocities.empty(); }

  const double* pos(int i) const { return positions.data() + static_cast<std::size_t>(i) * dim; }
  double* pos(int i) { return positions.data() + static_cast<std::size_t>(i) * dim; }
  const double* vel(int i) const { return velocities.data() + static_cast<std::size_t>(i) * dim; }
  double* vel(int i) { return velocities.data() + static_cast<std::size_t>(i) * dim; }

  // Index of the first particle with a non-finite entry, or -1.
  int first_nonfinite() const {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < dim; ++k) {
        if (!std::isfinite(pos(i)[k])) return i;
        if (has_velocities() && !std::isfinite(vel(i)[k])) return i;
      }
    }
    return -1;
  }
};

inline void require_same_shape(const ParticleEnsemble& a, const ParticleEnsemble& b,
                               const char* where) {
  if (a.n != b.n || a.dim != b.dim)
    throw std::invalid_argument(std::string(where) + ": ensemble shape mismatch");
}

}  // namespace levyrbm
