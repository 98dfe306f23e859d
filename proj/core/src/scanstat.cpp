#include "dchoice/scanstat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dchoice/errors.hpp"

namespace dchoice {

namespace {

void validate(unsigned s, std::size_t n) {
  if (s < 1 || s > n) throw BadWindow("window length must satisfy 1 <= s <= n");
}

constexpr double kTieSlack = 1e-9;

}  // namespace

double scan_statistic(const std::vector<double>& xs, unsigned s, bool circular) {
  std::size_t n = xs.size();
  validate(s, n);
  // Direct per-window summation, not a sliding sum: O(n*s), but every
  // linear window equals the matching circular window bit for bit, which
  // the S^c >= S invariant relies on.
  double best = -std::numeric_limits<double>::infinity();
  std::size_t n_windows = circular ? n : n - s + 1;
  for (std::size_t i = 0; i < n_windows; ++i) {
    double sum = 0.0;
    for (unsigned j = 0; j < s; ++j) sum += xs[(i + j) % n];
    best = std::max(best, sum);
  }
  return best;
}

ScanCdfEstimate scan_cdf_mc(const DemandModel& model, const ScanQuery& q,
                            std::uint64_t trials, std::uint64_t seed) {
  validate(q.s, q.n);
  std::uint64_t hits = 0;
  std::vector<double> xs(q.n);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (auto& v : xs) v = model.sample_one(rng);
    if (scan_statistic(xs, q.s, q.circular) <= q.x + kTieSlack) ++hits;
  }
  auto ci = wilson_interval(hits, trials);
  return {static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high,
          trials, seed};
}

double scan_cdf_poisson(const DemandModel& model, const ScanQuery& q) {
  validate(q.s, q.n);
  double tail = 1.0 - model.sum_cdf(q.s, q.x);
  return std::exp(-static_cast<double>(q.n - q.s + 1) * tail);
}

double scan_cdf_naus(const DemandModel& model, const ScanQuery& q,
                     std::uint64_t trials_per_cell, std::uint64_t seed) {
  validate(q.s, q.n);
  if (q.n < 3 * q.s) throw TooShort("Naus approximation needs n >= 3s");

  // P_L = probability that no window of length s in an L*s-sample sequence
  // exceeds x.
  auto cell = [&](unsigned L, std::uint64_t stream) {
    std::uint64_t hits = 0;
    std::vector<double> xs(L * q.s);
    for (std::uint64_t t = 0; t < trials_per_cell; ++t) {
      Rng rng(derive_seed(seed, stream * trials_per_cell + t));
      for (auto& v : xs) v = model.sample_one(rng);
      if (scan_statistic(xs, q.s, false) <= q.x + kTieSlack) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials_per_cell);
  };
  double p2 = cell(2, 1);
  double p3 = cell(3, 2);
  if (p2 <= 0.0) return 0.0;
  double exponent = static_cast<double>(q.n) / q.s - 2.0;
  double value = p2 * std::pow(p3 / p2, exponent);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace dchoice
