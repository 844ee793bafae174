#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "levyrbm/batching.hpp"
#include "support.hpp"

using namespace levyrbm;

namespace {

ParticleEnsemble ensemble_1d(std::vector<double> xs) {
  ParticleEnsemble state(static_cast<int>(xs.size()), 1);
  state.positions = std::move(xs);
  return state;
}

// Canonical key of a partition: batches sorted internally and by head.
std::vector<std::vector<int>> canonical(const BatchPartition& part) {
  auto groups = part.batch_members;
  std::sort(groups.begin(), groups.end());
  return groups;
}

}  // namespace

TEST_CASE("random_partition rejects bad shapes") {
  Substream rng = StreamFamily(0, StreamKind::partition).at(0, 0);
  REQUIRE_THROWS_AS(random_partition(10, 3, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(random_partition(10, 1, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(random_partition(2, 4, rng), std::invalid_argument);
}

TEST_CASE("n = p = 2 always yields the single possible partition") {
  const StreamFamily fam(1, StreamKind::partition);
  for (int k = 0; k < 10; ++k) {
    Substream rng = fam.at(0, static_cast<std::uint64_t>(k));
    const auto part = random_partition(2, 2, rng);
    REQUIRE(part.batch_members == std::vector<std::vector<int>>{{0, 1}});
  }
}

TEST_CASE("n=4, p=2: the three partitions are equally likely") {
  const StreamFamily fam(2, StreamKind::partition);
  std::map<std::vector<std::vector<int>>, int> counts;
  const int n_draws = 100000;
  for (int k = 0; k < n_draws; ++k) {
    Substream rng = fam.at(0, static_cast<std::uint64_t>(k));
    counts[canonical(random_partition(4, 2, rng))]++;
  }
  REQUIRE(counts.size() == 3);
  for (const auto& [key, count] : counts)
    REQUIRE(static_cast<double>(count) / n_draws == Catch::Approx(1.0 / 3.0).margin(0.01));
}

TEST_CASE("partition validity invariant holds across shapes") {
  const StreamFamily fam(3, StreamKind::partition);
  const std::pair<int, int> shapes[] = {{10, 2}, {12, 3}, {12, 4}};
  for (const auto& [n, p] : shapes) {
    for (int k = 0; k < 10000; ++k) {
      Substream rng = fam.at(static_cast<std::uint64_t>(n * 100 + p),
                             static_cast<std::uint64_t>(k));
      REQUIRE(random_partition(n, p, rng).valid());
    }
  }
}

TEST_CASE("marginal inclusion probability is (p-1)/(N-1)") {
  const int n = 10, p = 2, n_draws = 100000;
  const double target = static_cast<double>(p - 1) / (n - 1);
  const StreamFamily fam(4, StreamKind::partition);
  int hits = 0;
  for (int k = 0; k < n_draws; ++k) {
    Substream rng = fam.at(0, static_cast<std::uint64_t>(k));
    const auto part = random_partition(n, p, rng);
    if (part.assignment[1] == part.assignment[0]) ++hits;
  }
  const double sigma = std::sqrt(target * (1.0 - target) / n_draws);
  REQUIRE(std::abs(static_cast<double>(hits) / n_draws - target) < 3.0 * sigma);
}

TEST_CASE("batch force vanishes for an odd kernel at coincident points") {
  const auto state = ensemble_1d({1.5, 1.5, 1.5, 1.5});
  const auto part = make_partition(4, {{0, 1}, {2, 3}});
  double f = 1.0;
  batch_mean_force(0, part, state, InteractionKernel::smooth_bounded(), &f);
  REQUIRE(f == 0.0);
}

TEST_CASE("single batch (p = n) reproduces the full mean force bitwise") {
  const StreamFamily fam(5, StreamKind::scratch);
  Substream rng = fam.at(0, 0);
  ParticleEnsemble state(6, 1);
  for (auto& x : state.positions) x = 4.0 * rng.uniform01() - 2.0;

  Substream shuffle = fam.at(1, 0);
  const auto part = random_partition(6, 6, shuffle);
  const auto kernel = InteractionKernel::smooth_bounded();
  for (int i = 0; i < 6; ++i) {
    double fb = 0.0, ff = 0.0;
    batch_mean_force(i, part, state, kernel, &fb);
    full_mean_force(i, state, kernel, &ff);
    REQUIRE(fb == ff);
  }
}

TEST_CASE("hand-evaluated batch forces for a fixed partition") {
  const auto state = ensemble_1d({-1.0, 0.0, 1.0, 2.0});
  const auto part = make_partition(4, {{0, 1}, {2, 3}});
  const auto kernel = InteractionKernel::smooth_bounded();
  double f = 0.0;
  batch_mean_force(0, part, state, kernel, &f);
  REQUIRE(f == Catch::Approx(0.5).margin(1e-15));  // K(1)
  batch_mean_force(1, part, state, kernel, &f);
  REQUIRE(f == Catch::Approx(-0.5).margin(1e-15));  // K(-1)
  batch_mean_force(2, part, state, kernel, &f);
  REQUIRE(f == Catch::Approx(0.5).margin(1e-15));
  batch_mean_force(3, part, state, kernel, &f);
  REQUIRE(f == Catch::Approx(-0.5).margin(1e-15));
}

TEST_CASE("exhaustive partition average equals the full mean force") {
  // The random-batch force is unbiased: averaging over every partition
  // reproduces the all-pairs mean exactly. Checked by enumeration.
  const auto kernel = InteractionKernel::smooth_bounded();
  const StreamFamily fam(6, StreamKind::scratch);
  const std::pair<int, int> shapes[] = {{4, 2}, {6, 2}, {6, 3}, {8, 2}};
  for (const auto& [n, p] : shapes) {
    const auto partitions = testsupport::enumerate_partitions(n, p);
    for (int rep = 0; rep < 20; ++rep) {
      Substream rng = fam.at(static_cast<std::uint64_t>(n * 10 + p),
                             static_cast<std::uint64_t>(rep));
      ParticleEnsemble state(n, 1);
      for (auto& x : state.positions) x = 6.0 * rng.uniform01() - 3.0;
      for (int i = 0; i < n; ++i) {
        double avg = 0.0;
        for (const auto& groups : partitions) {
          const auto part = make_partition(n, groups);
          double f = 0.0;
          batch_mean_force(i, part, state, kernel, &f);
          avg += f;
        }
        avg /= static_cast<double>(partitions.size());
        double full = 0.0;
        full_mean_force(i, state, kernel, &full);
        REQUIRE(avg == Catch::Approx(full).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("partition enumeration oracle counts are right") {
  REQUIRE(testsupport::enumerate_partitions(4, 2).size() == 3);
  REQUIRE(testsupport::enumerate_partitions(6, 2).size() == 15);
  REQUIRE(testsupport::enumerate_partitions(6, 3).size() == 10);
}

TEST_CASE("batch force validates inputs") {
  const auto state = ensemble_1d({0.0, 1.0});
  const auto part = make_partition(2, {{0, 1}});
  double f = 0.0;
  REQUIRE_THROWS_AS(batch_mean_force(5, part, state, InteractionKernel::zero(), &f),
                    std::out_of_range);
  const auto state3 = ensemble_1d({0.0, 1.0, 2.0});
  REQUIRE_THROWS_AS(batch_mean_force(0, part, state3, InteractionKernel::zero(), &f),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_partition(4, {{0, 1}, {1, 2}}), std::invalid_argument);
}
