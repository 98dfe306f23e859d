#pragma once

// Moving-sum (scan) statistics over demand sequences: exact evaluation on a
// sample, Monte Carlo CDF estimation, a Poisson asymptotic form, and the
// Naus product approximation.

#include <cstdint>
#include <vector>

#include "dchoice/demand.hpp"
#include "dchoice/rng.hpp"

namespace dchoice {

struct ScanQuery {
  unsigned n = 0;        // sequence length
  unsigned s = 1;        // window length, 1 <= s <= n
  bool circular = false;
  double x = 0.0;        // threshold
};

struct ScanCdfEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Maximum window sum: n-s+1 linear windows, or n circular windows.
// Windows are evaluated by direct summation in index order so a linear
// window and its circular counterpart are bitwise identical.
double scan_statistic(const std::vector<double>& xs, unsigned s, bool circular);

// P(scan <= x), estimated over `trials` independent demand sequences,
// with a Wilson 95% interval. Comparisons are non-strict with an absolute
// slack of 1e-9 for ties at the threshold.
ScanCdfEstimate scan_cdf_mc(const DemandModel& model, const ScanQuery& q,
                            std::uint64_t trials, std::uint64_t seed);

// Poisson asymptotic: exp(-(n-s+1) * (1 - F_s(x))).
double scan_cdf_poisson(const DemandModel& model, const ScanQuery& q);

// Naus product approximation P2 * (P3/P2)^(n/s - 2); P2 and P3 are the
// no-exceedance probabilities over 2 resp. 3 consecutive windows, each
// estimated by Monte Carlo with trials_per_cell sequences. Requires n >= 3s.
double scan_cdf_naus(const DemandModel& model, const ScanQuery& q,
                     std::uint64_t trials_per_cell, std::uint64_t seed);

}  // namespace dchoice
