#include <doctest.h>

#include <cmath>

#include "dchoice/allocation.hpp"
#include "dchoice/demand.hpp"
#include "dchoice/errors.hpp"
#include "dchoice/feasibility.hpp"
#include "dchoice/rng.hpp"

using namespace dchoice;

namespace {

double subset_span_ratio(const StorageAllocation& a, const std::vector<double>& rho) {
  // max over nonempty subsets of demand / span, by brute force
  unsigned k = a.n_objects();
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<unsigned> subset;
    double demand = 0.0;
    for (unsigned i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        subset.push_back(i);
        demand += rho[i];
      }
    best = std::max(best, demand / span(a, subset));
  }
  return best;
}

}  // namespace

TEST_CASE("flow oracle on hand-checked cyclic instances") {
  auto a = build(DesignKind::cyclic(), 7, 3);
  std::vector<double> ok = {3, 0, 0, 3, 0, 0, 0};
  auto verdict = check_flow(a, ok, 1.0);
  CHECK(verdict.feasible);
  CHECK(verdict.max_served == doctest::Approx(6.0));
  // flow witness: node loads <= m, per-object totals == rho
  std::vector<double> node_load(7, 0.0), served(7, 0.0);
  for (const auto& f : verdict.flow) {
    node_load[f.node] += f.amount;
    served[f.object] += f.amount;
  }
  for (double load : node_load) CHECK(load <= 1.0 + 1e-9);
  for (unsigned i = 0; i < 7; ++i) CHECK(served[i] == doctest::Approx(ok[i]));

  std::vector<double> bad = {3, 3, 0, 0, 0, 0, 0};
  auto v2 = check_flow(a, bad, 1.0);
  CHECK_FALSE(v2.feasible);
  CHECK(v2.violating_subset == std::vector<unsigned>{0, 1});
  CHECK(v2.demand_excess == doctest::Approx(6.0 - 4.0));  // span {0,1} = 4
}

TEST_CASE("zero demand is always feasible; validation errors") {
  auto a = build(DesignKind::random(), 6, 2, 3);
  std::vector<double> zero(6, 0.0);
  CHECK(check_flow(a, zero, 0.25).feasible);
  std::vector<double> wrong(5, 0.0);
  CHECK_THROWS_AS(check_flow(a, wrong, 1.0), LengthMismatch);
  CHECK_THROWS_AS(check_flow(a, zero, 0.0), NonpositiveThreshold);
}

TEST_CASE("subset oracle on the block design") {
  auto a = build(DesignKind::block(), 7, 3);
  std::vector<double> ones(7, 1.0);
  CHECK(check_subsets(a, ones, 1.0).feasible);
  std::vector<double> spike(7, 0.0);
  spike[1] = 3.0 + 1e-6;
  auto verdict = check_subsets(a, spike, 1.0);
  CHECK_FALSE(verdict.feasible);
  CHECK(verdict.violating_subset == std::vector<unsigned>{1});
  CHECK_THROWS_AS(check_subsets(build(DesignKind::cyclic(), 23, 2),
                                std::vector<double>(23, 0.0), 1.0),
                  TooLarge);
}

TEST_CASE("saturating demand vectors count as feasible") {
  // Bernoulli lambda = m*d loads fill node capacity exactly
  auto a = build(DesignKind::clustering(), 4, 2);
  std::vector<double> exact = {2.0, 0.0, 2.0, 0.0};
  CHECK(check_flow(a, exact, 1.0).feasible);
  CHECK(check_subsets(a, exact, 1.0).feasible);
}

TEST_CASE("flow and subset oracles agree on random instances") {
  Rng rng(2024);
  DemandModel models[] = {DemandModel::exponential(1.0), DemandModel::pareto(1.0, 2.0),
                          DemandModel::scaled_bernoulli(2.0, 0.4)};
  DesignKind kinds[] = {DesignKind::single_choice(2), DesignKind::clustering(),
                        DesignKind::cyclic(),         DesignKind::block(),
                        DesignKind::random(),         DesignKind::random_block_approx(),
                        DesignKind::constrained_random(2)};
  int done = 0;
  while (done < 300) {
    DesignKind kind = kinds[rng.next_below(7)];
    unsigned d = 2 + static_cast<unsigned>(rng.next_below(2));
    unsigned n;
    switch (kind.design) {
      case Design::Block: n = d * d - d + 1; break;
      case Design::Clustering: n = d * (2 + rng.next_below(3)); break;
      case Design::SingleChoice: n = 4, d = 1; break;
      default: n = 6 + static_cast<unsigned>(rng.next_below(5));
    }
    auto a = build(kind, n, d, rng.next_u64());
    if (a.n_objects() > 12) continue;
    const auto& model = models[rng.next_below(3)];
    Rng demand_rng(rng.next_u64());
    auto rho = model.sample(a.n_objects(), demand_rng);
    double m = rng.next_below(2) ? 1.0 : 0.5;
    auto flow = check_flow(a, rho, m);
    auto subsets = check_subsets(a, rho, m);
    CHECK(flow.feasible == subsets.feasible);
    if (!flow.feasible) {
      // both witnesses must actually violate the span condition
      for (auto* v : {&flow, &subsets}) {
        double demand = 0.0;
        for (unsigned i : v->violating_subset) demand += rho[i];
        CHECK(demand > m * span(a, v->violating_subset) - 1e-6);
      }
    }
    ++done;
  }
}

TEST_CASE("feasibility is monotone in m and under demand scaling") {
  Rng rng(5);
  auto a = build(DesignKind::cyclic(), 9, 3);
  auto model = DemandModel::exponential(0.8);
  for (int i = 0; i < 50; ++i) {
    Rng demand_rng(rng.next_u64());
    auto rho = model.sample(9, demand_rng);
    bool at_half = check_flow(a, rho, 0.5).feasible;
    bool at_one = check_flow(a, rho, 1.0).feasible;
    if (at_half) CHECK(at_one);
    if (at_one) {
      auto scaled = rho;
      for (auto& r : scaled) r *= 0.7;
      CHECK(check_flow(a, scaled, 1.0).feasible);
    }
  }
}

TEST_CASE("min_threshold equals the worst subset demand/span ratio") {
  auto sc = build(DesignKind::single_choice(1), 4, 1);
  std::vector<double> rho_sc = {0.4, 0.9, 0.1, 0.3};
  CHECK(min_threshold(sc, rho_sc) == doctest::Approx(0.9).epsilon(1e-5));

  auto cy = build(DesignKind::cyclic(), 7, 3);
  std::vector<double> rho_cy = {3, 3, 0, 0, 0, 0, 0};
  CHECK(min_threshold(cy, rho_cy) == doctest::Approx(1.5).epsilon(1e-5));

  auto cl = build(DesignKind::clustering(), 9, 3);
  std::vector<double> rho_cl = {1, 1, 1, 0, 0, 0, 0, 0, 0};
  CHECK(min_threshold(cl, rho_cl) == doctest::Approx(1.0).epsilon(1e-5));

  // randomized cross-check against brute force
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    auto a = build(DesignKind::random(), 6, 2, rng.next_u64());
    Rng demand_rng(rng.next_u64());
    auto rho = DemandModel::exponential(1.0).sample(6, demand_rng);
    CHECK(min_threshold(a, rho) ==
          doctest::Approx(subset_span_ratio(a, rho)).epsilon(1e-4));
  }
}
