#include <doctest.h>

#include <cmath>

#include "dchoice/demand.hpp"
#include "dchoice/errors.hpp"

using namespace dchoice;

TEST_CASE("degenerate Bernoulli samples") {
  Rng rng(1);
  auto ones = DemandModel::scaled_bernoulli(2.0, 1.0).sample(3, rng);
  CHECK(ones == std::vector<double>{2, 2, 2});
  auto zeros = DemandModel::scaled_bernoulli(2.0, 0.0).sample(3, rng);
  CHECK(zeros == std::vector<double>{0, 0, 0});
}

TEST_CASE("exponential sample mean obeys the law of large numbers") {
  Rng rng(42);
  auto model = DemandModel::exponential(1.0);
  double total = 0.0;
  for (int i = 0; i < 1000000; ++i) total += model.sample_one(rng);
  CHECK(total / 1e6 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sampling is deterministic per seed") {
  for (auto model : {DemandModel::exponential(2.0), DemandModel::pareto(1.0, 2.5),
                     DemandModel::scaled_bernoulli(2.0, 0.3)}) {
    Rng a(7), b(7), c(8);
    CHECK(model.sample(5, a) == model.sample(5, b));
    Rng a2(7);
    CHECK(model.sample(5, a2) != model.sample(5, c));
  }
}

TEST_CASE("sum CDF closed forms") {
  auto exp1 = DemandModel::exponential(1.0);
  CHECK(exp1.sum_cdf(1, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(exp1.sum_cdf(1, 0.0) == doctest::Approx(0.0));
  CHECK(exp1.sum_cdf(3, -1.0) == 0.0);

  auto bern = DemandModel::scaled_bernoulli(2.0, 0.5);
  CHECK(bern.sum_cdf(2, 2.0) == doctest::Approx(0.75));  // P(Bin(2,.5) <= 1)
  CHECK(bern.sum_cdf(2, 0.0) == doctest::Approx(0.25));  // atom at zero
  CHECK(bern.sum_cdf(2, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("sum CDF matches empirical CDF of Monte Carlo sums") {
  struct Probe {
    DemandModel model;
    unsigned u;
  };
  Probe probes[] = {{DemandModel::exponential(2.0), 3},
                    {DemandModel::scaled_bernoulli(1.5, 0.4), 4},
                    {DemandModel::pareto(1.0, 2.5), 3}};
  for (const auto& probe : probes) {
    Rng rng(11);
    const int trials = 100000;
    double xs[5];
    // probe points around the mean of the sum
    double anchor = probe.model.is_pareto() ? 2.0 : probe.model.mean();
    for (int i = 0; i < 5; ++i) xs[i] = probe.u * anchor * (0.4 + 0.4 * i);
    int counts[5] = {0, 0, 0, 0, 0};
    for (int t = 0; t < trials; ++t) {
      double sum = 0.0;
      for (unsigned j = 0; j < probe.u; ++j) sum += probe.model.sample_one(rng);
      for (int i = 0; i < 5; ++i)
        if (sum <= xs[i]) ++counts[i];
    }
    for (int i = 0; i < 5; ++i) {
      double f = probe.model.sum_cdf(probe.u, xs[i]);
      double p_hat = counts[i] / double(trials);
      double se = std::sqrt(std::max(p_hat * (1 - p_hat), 1e-9) / trials);
      // Pareto sum_cdf carries its own ~1e-3 quadrature error on top of MC
      CHECK(std::abs(f - p_hat) <= 3 * se + 2e-3);
    }
  }
}

TEST_CASE("sum CDF is a CDF: monotone, 0 at -inf, 1 at +inf") {
  for (auto model : {DemandModel::exponential(1.5), DemandModel::pareto(1.0, 2.0),
                     DemandModel::scaled_bernoulli(2.0, 0.3)}) {
    for (unsigned u : {1u, 4u}) {
      double prev = 0.0;
      for (double x = -1.0; x <= 40.0; x += 0.5) {
        double f = model.sum_cdf(u, x);
        CHECK(f >= prev - 1e-12);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
      }
      CHECK(model.sum_cdf(u, -0.001) == 0.0);
      CHECK(model.sum_cdf(u, 1e9) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("larger Pareto tail index gives pointwise larger CDF") {
  auto heavy = DemandModel::pareto(1.0, 1.5);
  auto light = DemandModel::pareto(1.0, 3.0);
  for (unsigned u : {1u, 3u})
    for (double x : {3.0, 5.0, 8.0, 15.0})
      CHECK(light.sum_cdf(u, x) >= heavy.sum_cdf(u, x) - 2e-3);
}

TEST_CASE("moment generating function") {
  CHECK(DemandModel::exponential(2.0).mgf(1.0) == doctest::Approx(2.0));
  CHECK(DemandModel::scaled_bernoulli(2.0, 0.5).mgf(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(DemandModel::pareto(1.0, 2.0).mgf(0.1), Diverges);
  CHECK_THROWS_AS(DemandModel::exponential(2.0).mgf(2.0), Diverges);
}

TEST_CASE("spec strings parse and round-trip") {
  for (const char* s : {"exp:mu=1.5", "pareto:lambda=1,alpha=2.5", "bern:lambda=2,p=0.3"}) {
    auto model = DemandModel::parse(s);
    CHECK(DemandModel::parse(model.spec()).spec() == model.spec());
  }
  CHECK(DemandModel::parse("exp:mu=1.5").is_exponential());
  CHECK_THROWS_AS(DemandModel::parse("weibull:k=2"), ParseError);
  CHECK_THROWS_AS(DemandModel::parse("exp:mu=-1"), ParseError);
  CHECK_THROWS_AS(DemandModel::parse("bern:lambda=1,p=1.5"), ParseError);
}
