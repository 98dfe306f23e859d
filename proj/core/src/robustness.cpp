#include "dchoice/robustness.hpp"

#include <cmath>

#include "dchoice/errors.hpp"
#include "dchoice/feasibility.hpp"

namespace dchoice {

namespace {

double log_binom(unsigned n, unsigned k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_pmf(unsigned n, unsigned a, double p) {
  if (p <= 0.0) return a == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return a == n ? 1.0 : 0.0;
  return std::exp(log_binom(n, a) + a * std::log(p) + (n - a) * std::log1p(-p));
}

}  // namespace

RobustnessEstimate estimate_P(const StorageAllocation& alloc,
                              const DemandModel& model, double m,
                              std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterMismatch("trials must be >= 1");
  std::uint64_t hits = 0;
  std::vector<double> rho(alloc.n_objects());
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Demand stream depends on (seed, trial) only: sweeps over m or over
    // designs with equal object counts see identical demand vectors.
    Rng rng(derive_seed(seed, 2 * t));
    for (auto& r : rho) r = model.sample_one(rng);
    if (check_flow(alloc, rho, m).feasible) ++hits;
  }
  auto ci = wilson_interval(hits, trials);
  return {static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high,
          trials, seed};
}

RobustnessEstimate estimate_P_design(const DesignKind& kind, unsigned n,
                                     unsigned d, const DemandModel& model,
                                     double m, std::uint64_t trials,
                                     std::uint64_t seed, bool fix_alloc) {
  if (trials < 1) throw ParameterMismatch("trials must be >= 1");
  bool fresh_per_trial = kind.randomized() && !fix_alloc;
  if (!fresh_per_trial) {
    StorageAllocation alloc = build(kind, n, d, seed);
    return estimate_P(alloc, model, m, trials, seed);
  }
  std::uint64_t hits = 0;
  std::vector<double> rho;
  for (std::uint64_t t = 0; t < trials; ++t) {
    StorageAllocation alloc = build(kind, n, d, derive_seed(seed, 2 * t + 1));
    rho.resize(alloc.n_objects());
    Rng rng(derive_seed(seed, 2 * t));
    for (auto& r : rho) r = model.sample_one(rng);
    if (check_flow(alloc, rho, m).feasible) ++hits;
  }
  auto ci = wilson_interval(hits, trials);
  return {static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high,
          trials, seed};
}

double P_single_choice(unsigned n, unsigned b, const DemandModel& model, double m) {
  if (b < 1) throw ParameterMismatch("b must be >= 1");
  return std::pow(model.sum_cdf(b, m), static_cast<double>(n));
}

double P_clustering(unsigned n, unsigned d, const DemandModel& model, double m) {
  if (d < 1 || n % d != 0)
    throw ParameterMismatch("clustering closed form needs d | n");
  return P_clustering_real(n, d, model, m);
}

double P_clustering_real(double n, double d, const DemandModel& model, double m) {
  unsigned du = static_cast<unsigned>(std::lround(d));
  return std::pow(model.sum_cdf(du, m * d), n / d);
}

double P_bernoulli_spike(Design design, unsigned n, unsigned d, double p, double m) {
  if (!(m > 0)) throw NonpositiveThreshold("threshold m must be positive");
  if (p < 0.0 || p > 1.0) throw ParameterMismatch("p must lie in [0,1]");
  if (d < 1 || d > n) throw ParameterMismatch("need 1 <= d <= n");
  switch (design) {
    case Design::Clustering:
      if (n % d != 0) throw ParameterMismatch("clustering needs d | n");
      break;
    case Design::Block:
      if (n != d * d - d + 1) throw ParameterMismatch("block needs n = d^2 - d + 1");
      break;
    case Design::Cyclic:
    case Design::Random:
      break;
    default:
      throw ParameterMismatch("spike formula covers clustering/cyclic/block/random");
  }

  // Conditional on A active objects, feasibility probability is a product
  // over the active objects of the chance each one's choice set avoids the
  // previously placed ones; any non-positive factor means zero ways.
  auto conditional = [&](unsigned a) -> double {
    if (a <= 1) return 1.0;
    double prod = 1.0;
    if (design == Design::Random) {
      double denom = log_binom(n, d);
      for (unsigned i = 1; i < a; ++i) {
        if (n < (i + 1) * d) return 0.0;
        prod *= std::exp(log_binom(n - i * d, d) - denom);
      }
    } else {
      unsigned c = design == Design::Clustering ? d
                   : design == Design::Cyclic   ? 2 * d - 1
                                                : d * d - d + 1;
      for (unsigned i = 1; i < a; ++i) {
        double factor =
            (static_cast<double>(n) - static_cast<double>(i) * c) / (n - i);
        if (factor <= 0.0) return 0.0;
        prod *= factor;
      }
    }
    return prod;
  };

  double total = 0.0;
  for (unsigned a = 0; a <= n; ++a) {
    double w = binom_pmf(n, a, p);
    if (w == 0.0) continue;
    total += w * conditional(a);
  }
  return total;
}

}  // namespace dchoice
