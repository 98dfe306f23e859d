#pragma once

// Robustness metric P = Prob(demand vector is feasible under max-load m):
// Monte Carlo estimation for any allocation, plus the known closed forms.

#include <cstdint>
#include <optional>

#include "dchoice/allocation.hpp"
#include "dchoice/demand.hpp"
#include "dchoice/rng.hpp"

namespace dchoice {

struct RobustnessEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;    // Wilson 95%
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Fraction of sampled demand vectors that are feasible on a fixed
// allocation. Demand stream for trial t depends only on (seed, t), so
// sweeps over m or over designs reuse identical demand vectors.
RobustnessEstimate estimate_P(const StorageAllocation& alloc,
                              const DemandModel& model, double m,
                              std::uint64_t trials, std::uint64_t seed);

// Same, but rebuilds the allocation for every trial when the design is
// randomized (fix_alloc=false averages over construction randomness, which
// is the default for random-style designs). Deterministic designs build
// once either way.
RobustnessEstimate estimate_P_design(const DesignKind& kind, unsigned n,
                                     unsigned d, const DemandModel& model,
                                     double m, std::uint64_t trials,
                                     std::uint64_t seed, bool fix_alloc = false);

// Single-choice closed form F_b(m)^n.
double P_single_choice(unsigned n, unsigned b, const DemandModel& model, double m);

// Clustering closed form F_d(m*d)^(n/d); requires d | n.
double P_clustering(unsigned n, unsigned d, const DemandModel& model, double m);

// Clustering form with a real exponent n/d, for trend reporting where d(n)
// need not divide n.
double P_clustering_real(double n, double d, const DemandModel& model, double m);

// Exact P under spike demands rho_i = m*d * Bernoulli(p) for the four
// structured designs; expectation over the number of active objects of a
// product that counts the ways active objects avoid each other.
double P_bernoulli_spike(Design design, unsigned n, unsigned d, double p, double m);

}  // namespace dchoice
