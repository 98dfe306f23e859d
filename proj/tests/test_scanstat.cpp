#include <doctest.h>

#include <cmath>

#include "dchoice/errors.hpp"
#include "dchoice/scanstat.hpp"

using namespace dchoice;

TEST_CASE("scan statistic on fixed sequences") {
  CHECK(scan_statistic({1, 1, 1, 1}, 2, false) == 2);
  CHECK(scan_statistic({0, 3, 1, 2}, 2, false) == 4);
  CHECK(scan_statistic({0, 3, 1, 2}, 2, true) == 4);
  CHECK(scan_statistic({5, 0, 0, 0}, 2, true) == 5);
  CHECK(scan_statistic({5, 0, 0, 0}, 2, false) == 5);
  CHECK_THROWS_AS(scan_statistic({1, 2}, 3, false), BadWindow);
  CHECK_THROWS_AS(scan_statistic({1, 2}, 0, false), BadWindow);
}

TEST_CASE("circular dominates linear exactly, and rarely strictly") {
  Rng rng(31);
  auto model = DemandModel::exponential(1.0);
  unsigned n = 40, s = 4;
  int strict = 0;
  const int trials = 100000;
  std::vector<double> xs(n);
  for (int t = 0; t < trials; ++t) {
    for (auto& v : xs) v = model.sample_one(rng);
    double lin = scan_statistic(xs, s, false);
    double cir = scan_statistic(xs, s, true);
    REQUIRE(cir >= lin);
    if (cir > lin) ++strict;
  }
  // P(circular exceeds linear) <= s/n, allow 3 standard errors
  double bound = double(s) / n;
  double se = std::sqrt(bound * (1 - bound) / trials);
  CHECK(strict / double(trials) <= bound + 3 * se);
}

TEST_CASE("cyclic shift invariance in circular mode") {
  Rng rng(9);
  std::vector<double> xs(17);
  for (auto& v : xs) v = rng.next_double();
  double base = scan_statistic(xs, 5, true);
  for (int shift = 1; shift < 17; ++shift) {
    std::vector<double> shifted(17);
    for (int i = 0; i < 17; ++i) shifted[i] = xs[(i + shift) % 17];
    CHECK(scan_statistic(shifted, 5, true) == base);
  }
}

TEST_CASE("MC scan CDF: degenerate models") {
  auto zeros = DemandModel::scaled_bernoulli(1.0, 0.0);
  CHECK(scan_cdf_mc(zeros, {10, 3, true, 0.5}, 1000, 1).p_hat == 1.0);
  auto ones = DemandModel::scaled_bernoulli(1.0, 1.0);
  CHECK(scan_cdf_mc(ones, {10, 3, false, 2.5}, 1000, 1).p_hat == 0.0);
}

TEST_CASE("MC scan CDF matches a larger-trial oracle within CI") {
  auto model = DemandModel::exponential(1.0);
  ScanQuery q{20, 2, true, 4.0};
  auto est = scan_cdf_mc(model, q, 100000, 5);
  auto oracle = scan_cdf_mc(model, q, 1000000, 6);
  CHECK(est.ci_low <= oracle.p_hat + 0.002);
  CHECK(est.ci_high >= oracle.p_hat - 0.002);
  CHECK(est.ci_low <= est.p_hat);
  CHECK(est.p_hat <= est.ci_high);
}

TEST_CASE("empirical sandwich between linear and scaled linear tails") {
  // P(S > x) <= P(S^c > x) <= n/(n-s) * P(S > x)
  auto model = DemandModel::exponential(1.0);
  unsigned n = 30, s = 3;
  double x = 7.0;
  const int trials = 100000;
  Rng rng(77);
  int lin_exceed = 0, cir_exceed = 0;
  std::vector<double> xs(n);
  for (int t = 0; t < trials; ++t) {
    for (auto& v : xs) v = model.sample_one(rng);
    if (scan_statistic(xs, s, false) > x) ++lin_exceed;
    if (scan_statistic(xs, s, true) > x) ++cir_exceed;
  }
  double p_lin = lin_exceed / double(trials), p_cir = cir_exceed / double(trials);
  double se = 3 * std::sqrt(0.25 / trials);
  CHECK(p_lin <= p_cir + se);
  CHECK(p_cir <= double(n) / (n - s) * p_lin + se);
}

TEST_CASE("Poisson asymptotic form") {
  // every window sum below threshold: certainty
  auto bern = DemandModel::scaled_bernoulli(1.0, 0.3);
  CHECK(scan_cdf_poisson(bern, {50, 2, true, 2.0}) == doctest::Approx(1.0));

  auto sparse = DemandModel::scaled_bernoulli(1.0, 0.1);
  double tail = 1.0 - sparse.sum_cdf(3, 1.5);  // P(Bin(3,.1) >= 2) = 0.028
  CHECK(scan_cdf_poisson(sparse, {100, 3, false, 1.5}) ==
        doctest::Approx(std::exp(-98.0 * tail)));
  CHECK(scan_cdf_poisson(sparse, {100, 3, false, 1.5}) == doctest::Approx(0.0643).epsilon(0.01));

  // large n: Poisson form close to MC
  auto model = DemandModel::exponential(1.0);
  ScanQuery q{1000, 5, true, 20.0};
  double poisson = scan_cdf_poisson(model, q);
  double mc = scan_cdf_mc(model, q, 100000, 3).p_hat;
  CHECK(std::abs(poisson - mc) < 0.02);
}

TEST_CASE("Naus product approximation") {
  auto zeros = DemandModel::scaled_bernoulli(1.0, 0.0);
  CHECK(scan_cdf_naus(zeros, {30, 3, false, 0.5}, 1000, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(scan_cdf_naus(zeros, {8, 3, false, 0.5}, 1000, 1), TooShort);

  auto exp1 = DemandModel::exponential(1.0);
  ScanQuery q1{30, 3, false, 10.0};
  auto mc = scan_cdf_mc(exp1, q1, 100000, 2);
  double naus = scan_cdf_naus(exp1, q1, 100000, 2);
  double width = mc.ci_high - mc.ci_low;
  CHECK(std::abs(naus - mc.p_hat) <= 2 * width + 0.004);

  auto sparse = DemandModel::scaled_bernoulli(1.0, 0.05);
  ScanQuery q2{60, 3, false, 1.5};
  double naus2 = scan_cdf_naus(sparse, q2, 100000, 4);
  double mc2 = scan_cdf_mc(sparse, q2, 100000, 5).p_hat;
  CHECK(std::abs(naus2 - mc2) < 0.02);
}
