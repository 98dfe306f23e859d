#include <doctest.h>

#include <cmath>
#include <vector>

#include "dchoice/occupancy.hpp"

using namespace dchoice;

TEST_CASE("degenerate queries") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_occupancy({10, 3, 1}, rng) == 3);  // u=1
    CHECK(sample_occupancy({5, 5, 3}, rng) == 5);   // d=n
  }
  CHECK(mean_occupancy({10, 3, 1}) == doctest::Approx(3.0));
  auto pmf = occupancy_pmf_mc({10, 3, 1}, 1000, 2);
  REQUIRE(pmf.size() == 1);
  CHECK(pmf[3] == doctest::Approx(1.0));
}

TEST_CASE("support bounds hold on every sample") {
  Rng rng(3);
  OccupancyQuery q{12, 4, 5};
  for (int i = 0; i < 2000; ++i) {
    unsigned v = sample_occupancy(q, rng);
    CHECK(v >= 4);
    CHECK(v <= 12);
  }
}

TEST_CASE("mean formula") {
  CHECK(mean_occupancy({4, 2, 2}) == doctest::Approx(3.0));
  CHECK(mean_occupancy({100, 10, 10}) == doctest::Approx(100 * (1 - std::pow(0.9, 10))));
  // sampler agrees: n=4,d=2,u=2 over 10^6 draws
  Rng rng(17);
  double total = 0.0;
  for (int i = 0; i < 1000000; ++i) total += sample_occupancy({4, 2, 2}, rng);
  CHECK(total / 1e6 == doctest::Approx(3.0).epsilon(0.002));
}

TEST_CASE("exact small-case PMF") {
  auto pmf = occupancy_pmf_mc({4, 2, 2}, 600000, 5);
  CHECK(pmf[2] == doctest::Approx(1.0 / 6).epsilon(0.02));
  CHECK(pmf[3] == doctest::Approx(2.0 / 3).epsilon(0.02));
  CHECK(pmf[4] == doctest::Approx(1.0 / 6).epsilon(0.02));
  double total = 0.0;
  for (auto& [v, mass] : pmf) total += mass;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("PMF matches exhaustive enumeration for n=7,d=3,u=2") {
  // enumerate all C(7,3)^2 ordered complex pairs
  std::vector<std::vector<unsigned>> subsets;
  for (unsigned a = 0; a < 7; ++a)
    for (unsigned b = a + 1; b < 7; ++b)
      for (unsigned c = b + 1; c < 7; ++c) subsets.push_back({a, b, c});
  std::map<unsigned, double> exact;
  for (const auto& s1 : subsets)
    for (const auto& s2 : subsets) {
      bool hit[7] = {};
      for (unsigned v : s1) hit[v] = true;
      for (unsigned v : s2) hit[v] = true;
      unsigned occ = 0;
      for (bool h : hit) occ += h;
      exact[occ] += 1.0 / (subsets.size() * subsets.size());
    }
  auto pmf = occupancy_pmf_mc({7, 3, 2}, 400000, 8);
  for (auto& [v, mass] : exact) {
    double se = std::sqrt(mass * (1 - mass) / 400000);
    CHECK(std::abs(pmf[v] - mass) <= 3 * se + 1e-4);
  }
}

TEST_CASE("empirical PMF mean tracks the formula over random queries") {
  Rng rng(99);
  for (int i = 0; i < 20; ++i) {
    unsigned n = 5 + static_cast<unsigned>(rng.next_below(20));
    unsigned d = 1 + static_cast<unsigned>(rng.next_below(n < 6 ? n - 1 : 5));
    unsigned u = 1 + static_cast<unsigned>(rng.next_below(6));
    OccupancyQuery q{n, d, u};
    const std::uint64_t trials = 50000;
    auto pmf = occupancy_pmf_mc(q, trials, rng.next_u64());
    double mc_mean = 0.0, mc_m2 = 0.0;
    for (auto& [v, mass] : pmf) {
      mc_mean += mass * v;
      mc_m2 += mass * v * v;
    }
    double se = std::sqrt(std::max(mc_m2 - mc_mean * mc_mean, 1e-9) / trials);
    CHECK(std::abs(mc_mean - mean_occupancy(q)) <= 3 * se + 1e-6);
  }
}

TEST_CASE("mean is nondecreasing in u and d") {
  for (unsigned u = 1; u < 8; ++u)
    CHECK(mean_occupancy({20, 4, u + 1}) >= mean_occupancy({20, 4, u}));
  for (unsigned d = 1; d < 10; ++d)
    CHECK(mean_occupancy({20, d + 1, 4}) >= mean_occupancy({20, d, 4}));
}
