// Initial particle configurations. The semicircle law is sampled with a
// random-walk Metropolis chain (the default), with an inverse-CDF sampler
// over a quadrature table kept alongside as a cross-check.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyrbm/rng.hpp"

namespace levyrbm {

struct InitialLaw {
  enum class Family { point_mass, uniform_box, semicircle, semicircle_scaled };
  Family family = Family::point_mass;
  double x0 = 0.0;      // point mass location
  double lo = 0.0;      // uniform box
  double hi = 0.0;
  double radius = 2.0;  // semicircle: density 2 sqrt(r^2 - x^2) / (pi r^2) on |x| <= r
  double scale = 0.1;   // scaled: density proportional to rho_semicircle(scale * x)

  static InitialLaw point_mass(double x) { return {Family::point_mass, x, 0, 0, 2, 0.1}; }
  static InitialLaw uniform_box(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform initial law: need lo < hi");
    return {Family::uniform_box, 0, lo, hi, 2, 0.1};
  }
  static InitialLaw semicircle(double radius) {
    if (!(radius > 0)) throw std::invalid_argument("semicircle initial law: radius must be > 0");
    return {Family::semicircle, 0, 0, 0, radius, 0.1};
  }
  // Radius-2 semicircle dilated by 1/scale; support [-2/scale, 2/scale].
  static InitialLaw semicircle_scaled(double scale) {
    if (!(scale > 0)) throw std::invalid_argument("scaled semicircle: scale must be > 0");
    return {Family::semicircle_scaled, 0, 0, 0, 2.0, scale};
  }

  std::string config_name() const {
    char buf[64];
    switch (family) {
      case Family::point_mass: std::snprintf(buf, sizeof(buf), "point:x=%g", x0); break;
      case Family::uniform_box: std::snprintf(buf, sizeof(buf), "uniform:%g,%g", lo, hi); break;
      case Family::semicircle: std::snprintf(buf, sizeof(buf), "semicircle:r=%g", radius); break;
      case Family::semicircle_scaled:
        std::snprintf(buf, sizeof(buf), "semicircle_scaled:s=%g", scale);
        break;
    }
    return buf;
  }
};

inline InitialLaw parse_initial_law(const std::string& name) {
  if (name.rfind("point:x=", 0) == 0) return InitialLaw::point_mass(std::stod(name.substr(8)));
  if (name.rfind("semicircle:r=", 0) == 0)
    return InitialLaw::semicircle(std::stod(name.substr(13)));
  if (name.rfind("semicircle_scaled:s=", 0) == 0)
    return InitialLaw::semicircle_scaled(std::stod(name.substr(20)));
  if (name.rfind("uniform:", 0) == 0) {
    const std::string rest = name.substr(8);
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("uniform initial law: expected uniform:lo,hi");
    return InitialLaw::uniform_box(std::stod(rest.substr(0, comma)),
                                   std::stod(rest.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown initial law '" + name + "'");
}

namespace detail {

// Unnormalized semicircle density on [-r, r].
inline double semicircle_density(double x, double r) {
  const double s = r * r - x * x;
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

// Random-walk Metropolis chain targeting the semicircle law.
// Tuning: Gaussian proposal with step 0.5, burn-in 1000, thinning 10.
inline std::vector<double> semicircle_mh(double radius, int n, Substream& rng) {
  constexpr double kStep = 0.5;
  constexpr int kBurnIn = 1000;
  constexpr int kThin = 10;

  std::vector<double> out;
  out.reserve(n);
  double x = 0.0;
  double fx = semicircle_density(x, radius);
  const long total = static_cast<long>(kBurnIn) + static_cast<long>(kThin) * n;
  for (long it = 0; it < total; ++it) {
    const double prop = x + kStep * rng.normal();
    const double fp = semicircle_density(prop, radius);
    if (fp > 0.0 && rng.uniform01() * fx <= fp) {
      x = prop;
      fx = fp;
    }
    if (it >= kBurnIn && (it - kBurnIn) % kThin == kThin - 1) out.push_back(x);
  }
  return out;
}

// Inverse-CDF sampler over a trapezoid quadrature table of the semicircle
// density. Exact up to table resolution; used as a cross-check, not the
// default path.
inline std::vector<double> semicircle_inverse_cdf(double radius, int n, Substream& rng) {
  constexpr int kCells = 4096;
  std::vector<double> cdf(kCells + 1, 0.0);
  const double h = 2.0 * radius / kCells;
  for (int k = 1; k <= kCells; ++k) {
    const double x0 = -radius + (k - 1) * h;
    const double x1 = -radius + k * h;
    cdf[k] = cdf[k - 1] +
             0.5 * h * (semicircle_density(x0, radius) + semicircle_density(x1, radius));
  }
  for (auto& c : cdf) c /= cdf.back();

  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const auto k = static_cast<int>(it - cdf.begin());
    const double c0 = cdf[k - 1], c1 = cdf[k];
    const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    out.push_back(-radius + (k - 1 + frac) * h);
  }
  return out;
}

}  // namespace detail

// n samples from the law (1-d). Semicircle families run one MH chain.
inline std::vector<double> sample_initial(const InitialLaw& law, int n, Substream& rng) {
  if (n < 1) throw std::invalid_argument("sample_initial: n must be >= 1");
  switch (law.family) {
    case InitialLaw::Family::point_mass: return std::vector<double>(n, law.x0);
    case InitialLaw::Family::uniform_box: {
      std::vector<double> out(n);
      for (auto& x : out) x = law.lo + (law.hi - law.lo) * rng.uniform01();
      return out;
    }
    case InitialLaw::Family::semicircle: return detail::semicircle_mh(law.radius, n, rng);
    case InitialLaw::Family::semicircle_scaled: {
      auto out = detail::semicircle_mh(2.0, n, rng);
      for (auto& x : out) x /= law.scale;
      return out;
    }
  }
  throw std::logic_error("sample_initial: unreachable");
}

// Inverse-CDF alternative for the semicircle families; other families fall
// through to the default sampler.
inline std::vector<double> sample_initial_exact(const InitialLaw& law, int n, Substream& rng) {
  if (n < 1) throw std::invalid_argument("sample_initial_exact: n must be >= 1");
  switch (law.family) {
    case InitialLaw::Family::semicircle:
      return detail::semicircle_inverse_cdf(law.radius, n, rng);
    case InitialLaw::Family::semicircle_scaled: {
      auto out = detail::semicircle_inverse_cdf(2.0, n, rng);
      for (auto& x : out) x /= law.scale;
      return out;
    }
    default: return sample_initial(law, n, rng);
  }
}

}  // namespace levyrbm
