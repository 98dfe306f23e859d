#pragma once

// Analytic lower/upper bounds on the robustness metric P, each returned as
// a BoundReport so the CLI can tabulate them next to Monte Carlo estimates.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dchoice/allocation.hpp"
#include "dchoice/demand.hpp"

namespace dchoice {

struct BoundReport {
  std::string name;
  std::string kind;  // "lower" | "upper" | "approx"
  double value = 0.0;
  std::map<std::string, double> params;
  bool asymptotic = false;
};

enum class BoundMode { Finite, Asymptotic, SubGaussian };

// Sub-gaussian tail constants are user inputs, never inferred: the source
// results only assert their existence.
struct SubGaussianParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double mu = 0.0;  // demand mean
};

// Knobs for scan-CDF evaluation inside finite-mode bounds.
struct ScanEstimation {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};

// Upper bound for any allocation: min over t of E[F_t(m * span_t)], the
// expectation taken over the span distribution of random t-subsets.
BoundReport ub_span_based(const StorageAllocation& alloc, const DemandModel& model,
                          double m, const std::vector<unsigned>& t_values,
                          const SpanDistMethod& method = {});

// Upper bound for any d-choice design: min over s of P(S_s^(c) <= s*m*d).
// Scan CDFs via Monte Carlo (finite) or the Poisson form (asymptotic).
BoundReport scan_ub_any(unsigned n, unsigned d, const DemandModel& model, double m,
                        std::vector<unsigned> s_values = {}, bool poisson = false,
                        const ScanEstimation& scan = {});

// For r-gap allocations: P(S_{r+1}^(c) <= md) <= P <= P(S_s^(c) <= m(s+2r)).
std::pair<BoundReport, BoundReport> rgap_bounds(unsigned n, unsigned d, unsigned r,
                                                const DemandModel& model, double m,
                                                unsigned s,
                                                const ScanEstimation& scan = {});

// Cyclic design. Finite: scan-CDF bracket (lower at threshold md, upper
// minimized over the s grid at thresholds m(s+d-1)). Asymptotic: Poisson
// forms at md and 2md. SubGaussian: closed forms with user constants.
std::pair<BoundReport, BoundReport> cyclic_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m, BoundMode mode,
    const std::optional<SubGaussianParams>& sg = std::nullopt,
    const ScanEstimation& scan = {}, std::vector<unsigned> s_grid = {});

// Block design: thresholds md/2 (lower) and m(d^2-d) (upper).
std::pair<BoundReport, BoundReport> block_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m, BoundMode mode,
    const std::optional<SubGaussianParams>& sg = std::nullopt,
    const ScanEstimation& scan = {});

// Clustering design. Chernoff mode returns a lower bound only, via a 1-D
// maximization of m*s - ln(MGF(s)); sub-gaussian mode returns both bounds.
std::pair<BoundReport, std::optional<BoundReport>> clustering_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m,
    bool subgaussian = false,
    const std::optional<SubGaussianParams>& sg = std::nullopt);

// Random design upper bound: product over partition groups of
// E[F_{u_i}(m * N_{n,d,u_i})], the expectation over occupancy either
// sampled (a genuine bound up to MC error) or replaced by its mean
// (mean_approx, flagged "approx" since it is not a guaranteed bound).
BoundReport random_ub(unsigned n, unsigned d, const DemandModel& model, double m,
                      const std::vector<unsigned>& partition,
                      bool mean_approx = false, std::uint64_t trials = 100000,
                      std::uint64_t seed = 0);
// Even split into groups of size u; requires u | n.
BoundReport random_ub_even(unsigned n, unsigned d, const DemandModel& model,
                           double m, unsigned u, bool mean_approx = false,
                           std::uint64_t trials = 100000, std::uint64_t seed = 0);

// Constrained-random design lower bound: P(S_d^(c) <= m*d / v_max).
BoundReport constrained_random_lb(unsigned n, unsigned d, unsigned v_max,
                                  const DemandModel& model, double m,
                                  const ScanEstimation& scan = {});

// Evaluates a design's closed form / asymptotic bound along the rule
// d(n) = max(1, round(c * ln(n)^gamma)) to chart convergence of P toward
// 0 or 1. A reporting aid, not a proof.
struct TrendRow {
  unsigned n = 0;
  unsigned d = 0;
  double value = 0.0;
};
std::vector<TrendRow> limit_trend(Design design, const DemandModel& model, double m,
                                  double c, double gamma,
                                  const std::vector<unsigned>& n_grid);

}  // namespace dchoice
