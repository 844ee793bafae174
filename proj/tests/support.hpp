// Test-side oracles, independent of the library code paths they check:
// quadrature CDFs, Kolmogorov-Smirnov distance, exhaustive partition
// enumeration, brute-force optimal transport, small statistics helpers.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace testsupport {

inline double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size());
}

inline double interquartile_range(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto at = [&](double q) {
    const double pos = q * (xs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    return xs[lo] * (1.0 - frac) + xs[std::min(lo + 1, xs.size() - 1)] * frac;
  };
  return at(0.75) - at(0.25);
}

// Simpson quadrature of f over [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int k = 1; k < cells; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

// CDF of the semicircle law of given radius, via quadrature of the density.
// This is the oracle the sampler is judged against.
inline double semicircle_cdf_quadrature(double x, double radius) {
  if (x <= -radius) return 0.0;
  if (x >= radius) return 1.0;
  const auto density = [radius](double t) {
    const double s = radius * radius - t * t;
    return s > 0.0 ? 2.0 * std::sqrt(s) / (3.14159265358979323846 * radius * radius) : 0.0;
  };
  return simpson(density, -radius, x, 2000);
}

// Closed-form CDF of the same law, used to sanity-check the quadrature.
inline double semicircle_cdf_closed_form(double x, double radius) {
  if (x <= -radius) return 0.0;
  if (x >= radius) return 1.0;
  const double pi = 3.14159265358979323846;
  return 0.5 + (x * std::sqrt(radius * radius - x * x)) / (pi * radius * radius) +
         std::asin(x / radius) / pi;
}

// Kolmogorov-Smirnov distance between a sample and a target CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double f = cdf(samples[k]);
    worst = std::max(worst, std::abs((k + 1) / n - f));
    worst = std::max(worst, std::abs(f - k / n));
  }
  return worst;
}

// All partitions of {0..n-1} into unordered groups of size p, enumerated
// canonically: the smallest unplaced index picks its p-1 mates.
inline void enumerate_partitions_rec(std::vector<int>& unplaced,
                                     std::vector<std::vector<int>>& current,
                                     std::vector<std::vector<std::vector<int>>>& out, int p) {
  if (unplaced.empty()) {
    out.push_back(current);
    return;
  }
  const int head = unplaced.front();
  std::vector<int> rest(unplaced.begin() + 1, unplaced.end());
  const int r = static_cast<int>(rest.size());
  std::vector<int> choose(p - 1, 0);
  std::function<void(int, int)> pick = [&](int start, int depth) {
    if (depth == p - 1) {
      std::vector<int> group{head};
      for (int idx : choose) group.push_back(rest[idx]);
      std::vector<int> remaining;
      std::vector<char> used(r, 0);
      for (int idx : choose) used[idx] = 1;
      for (int k = 0; k < r; ++k)
        if (!used[k]) remaining.push_back(rest[k]);
      current.push_back(group);
      enumerate_partitions_rec(remaining, current, out, p);
      current.pop_back();
      return;
    }
    for (int k = start; k < r; ++k) {
      choose[depth] = k;
      pick(k + 1, depth + 1);
    }
  };
  pick(0, 0);
}

inline std::vector<std::vector<std::vector<int>>> enumerate_partitions(int n, int p) {
  if (n % p != 0) throw std::invalid_argument("enumerate_partitions: p must divide n");
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> current;
  enumerate_partitions_rec(all, current, out, p);
  return out;
}

// Minimum mean transport cost over all n! pairings (n <= 8 or so).
inline double brute_force_wasserstein(std::vector<double> a, std::vector<double> b, int order) {
  if (a.size() != b.size()) throw std::invalid_argument("brute_force_wasserstein: size mismatch");
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double cost = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = std::abs(a[k] - b[perm[k]]);
      cost += (order == 1) ? d : d * d;
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  best /= static_cast<double>(a.size());
  return (order == 1) ? best : std::sqrt(best);
}

}  // namespace testsupport
