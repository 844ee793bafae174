#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "levyrbm/dynamics.hpp"
#include "levyrbm/metrics.hpp"
#include "support.hpp"

using namespace levyrbm;

namespace {

ParticleEnsemble ensemble_1d(std::vector<double> xs, std::vector<double> vs = {}) {
  ParticleEnsemble state(static_cast<int>(xs.size()), 1, !vs.empty());
  state.positions = std::move(xs);
  if (!vs.empty()) state.velocities = std::move(vs);
  return state;
}

}  // namespace

TEST_CASE("coupled error e1") {
  const auto a = ensemble_1d({0.0, 0.0});
  REQUIRE(coupled_error_e1(a, a) == 0.0);
  REQUIRE(coupled_error_e1(a, ensemble_1d({1.0, -1.0})) == 1.0);
  REQUIRE(coupled_error_e1(ensemble_1d({3.0}), ensemble_1d({3.5})) == 0.5);
  REQUIRE_THROWS_AS(coupled_error_e1(a, ensemble_1d({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("1-d Wasserstein hand cases") {
  const std::vector<double> same{0.4, -1.0, 2.2};
  REQUIRE(wasserstein_1d(same, same, 1) == 0.0);
  REQUIRE(wasserstein_1d(same, same, 2) == 0.0);

  REQUIRE(wasserstein_1d(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0}, 1) == 1.0);
  REQUIRE(wasserstein_1d(std::vector<double>{0.0, 2.0}, std::vector<double>{1.0, 1.0}, 2) == 1.0);

  REQUIRE_THROWS_AS(wasserstein_1d(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(wasserstein_1d(same, same, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(wasserstein_1d(std::vector<double>{}, std::vector<double>{}, 1),
                    std::invalid_argument);
}

TEST_CASE("sorted pairing equals the brute-force optimal coupling for n <= 6") {
  Substream rng = StreamFamily(50, StreamKind::scratch).at(0, 0);
  for (int n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> a(n), b(n);
      for (auto& x : a) x = 10.0 * rng.uniform01() - 5.0;
      for (auto& x : b) x = 10.0 * rng.uniform01() - 5.0;
      for (int order : {1, 2}) {
        const double fast = wasserstein_1d(a, b, order);
        const double brute = testsupport::brute_force_wasserstein(a, b, order);
        REQUIRE(fast == Catch::Approx(brute).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("W1 triangle inequality on random triples") {
  Substream rng = StreamFamily(51, StreamKind::scratch).at(0, 0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> a(100), b(100), c(100);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = 2.0 * rng.uniform01();
    for (auto& x : c) x = rng.normal() - 1.0;
    REQUIRE(wasserstein_1d(a, c, 1) <= wasserstein_1d(a, b, 1) + wasserstein_1d(b, c, 1) + 1e-12);
  }
}

TEST_CASE("W1 translation covariance is exact on dyadic data") {
  // Dyadic samples and shift make every sum exact, so equality is bitwise.
  Substream rng = StreamFamily(52, StreamKind::scratch).at(0, 0);
  std::vector<double> a(64), b(64);
  for (auto& x : a) x = static_cast<double>(rng.bounded(1024)) / 64.0;
  for (auto& x : b) x = static_cast<double>(rng.bounded(1024)) / 64.0;
  const double shift = 3.0 / 8.0;
  std::vector<double> a_shift = a, b_shift = b;
  for (auto& x : a_shift) x += shift;
  for (auto& x : b_shift) x += shift;
  REQUIRE(wasserstein_1d(a_shift, b_shift, 1) == wasserstein_1d(a, b, 1));
}

TEST_CASE("coupled e1 dominates the empirical W1 of the marginals") {
  SimulationConfig cfg;
  cfg.n_particles = 16;
  cfg.batch_size = 2;
  cfg.fine_step = 0x1.0p-8;
  cfg.batch_step = 0x1.0p-5;
  cfg.horizon = 0.5;
  cfg.potential = ConfiningPotential::quadratic(1.0);
  cfg.kernel = InteractionKernel::smooth_bounded();
  cfg.noise.jump = AlphaStableJump{1.5, 1.0};
  cfg.seed = 99;
  cfg.mode = RunMode::coupled;

  ParticleEnsemble initial(16, 1);
  Substream rng = StreamFamily(cfg.seed, StreamKind::initial).at(0, 0);
  for (auto& x : initial.positions) x = 4.0 * rng.uniform01() - 2.0;

  const auto series = run_coupled(cfg, initial);
  REQUIRE(series.w1.size() == series.e1.size());
  for (std::size_t k = 0; k < series.e1.size(); ++k)
    REQUIRE(series.w1[k] <= series.e1[k] + 1e-15);
}

TEST_CASE("flocking diameters") {
  const auto same = ensemble_1d({1.0, 1.0, 1.0}, {2.0, 2.0, 2.0});
  REQUIRE(flocking_diameters(same) == std::pair<double, double>{0.0, 0.0});

  const auto spread = ensemble_1d({0.0, 1.0, 5.0}, {2.0, 2.0, 2.0});
  REQUIRE(flocking_diameters(spread) == std::pair<double, double>{5.0, 0.0});

  const auto both = ensemble_1d({-1.0, 1.0}, {0.0, 3.0});
  REQUIRE(flocking_diameters(both) == std::pair<double, double>{2.0, 3.0});

  REQUIRE_THROWS_AS(flocking_diameters(ensemble_1d({0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("log-log slope fits") {
  const std::vector<double> xs{0x1.0p-4, 0x1.0p-5, 0x1.0p-6, 0x1.0p-7};
  auto fit = fit_loglog_slope(xs, xs);
  REQUIRE(fit.slope == Catch::Approx(1.0).margin(1e-12));

  std::vector<double> sqrt_xs;
  for (double x : xs) sqrt_xs.push_back(std::sqrt(x));
  fit = fit_loglog_slope(xs, sqrt_xs);
  REQUIRE(fit.slope == Catch::Approx(0.5).margin(1e-12));

  // Synthetic power law with 1% multiplicative noise.
  Substream rng = StreamFamily(53, StreamKind::scratch).at(0, 0);
  std::vector<double> noisy;
  for (double x : xs) noisy.push_back(3.0 * std::pow(x, 0.48) * (1.0 + 0.01 * rng.normal()));
  fit = fit_loglog_slope(xs, noisy);
  REQUIRE(fit.slope == Catch::Approx(0.48).margin(0.05));

  REQUIRE_THROWS_AS(fit_loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      fit_loglog_slope(std::vector<double>{1.0, -2.0}, std::vector<double>{1.0, 2.0}),
      std::invalid_argument);
  REQUIRE_THROWS_AS(fit_loglog_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 2.0}),
                    std::invalid_argument);
}
