#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <set>

#include "levyrbm/rng.hpp"

using namespace levyrbm;

TEST_CASE("substreams are deterministic and keyed by (seed, kind, member, step)") {
  const StreamFamily fam(42, StreamKind::noise);
  Substream a = fam.at(3, 17);
  Substream b = fam.at(3, 17);
  for (int k = 0; k < 32; ++k) REQUIRE(a.next_u64() == b.next_u64());

  Substream c = fam.at(3, 18);
  Substream d = fam.at(4, 17);
  Substream e = StreamFamily(42, StreamKind::partition).at(3, 17);
  Substream f = StreamFamily(43, StreamKind::noise).at(3, 17);
  Substream base = fam.at(3, 17);
  const auto first = base.next_u64();
  REQUIRE(c.next_u64() != first);
  REQUIRE(d.next_u64() != first);
  REQUIRE(e.next_u64() != first);
  REQUIRE(f.next_u64() != first);
}

TEST_CASE("single counter bit flips avalanche through the output") {
  const StreamFamily fam(7, StreamKind::scratch);
  double total_flips = 0;
  int trials = 0;
  for (std::uint64_t member = 0; member < 16; ++member) {
    Substream ref = fam.at(member, 0);
    const auto base = ref.next_u64();
    for (int bit = 0; bit < 32; ++bit) {
      Substream other = fam.at(member, std::uint64_t{1} << bit);
      total_flips += std::popcount(base ^ other.next_u64());
      ++trials;
    }
  }
  const double mean_flips = total_flips / trials;
  REQUIRE(mean_flips > 24.0);
  REQUIRE(mean_flips < 40.0);
}

TEST_CASE("uniform01 lies in [0,1) and uniform_open in (0,1)") {
  Substream rng = StreamFamily(1, StreamKind::scratch).at(0, 0);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = rng.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("normal draws have the right first moments") {
  Substream rng = StreamFamily(2, StreamKind::scratch).at(0, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.01);
  REQUIRE(var == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("exponential draws are positive with unit mean") {
  Substream rng = StreamFamily(3, StreamKind::scratch).at(0, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = rng.exponential();
    REQUIRE(w > 0.0);
    sum += w;
  }
  REQUIRE(sum / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("bounded draws cover the range uniformly") {
  Substream rng = StreamFamily(4, StreamKind::scratch).at(0, 0);
  int counts[7] = {};
  const int n = 70000;
  for (int k = 0; k < n; ++k) ++counts[rng.bounded(7)];
  for (int c : counts) REQUIRE(std::abs(c - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
}
