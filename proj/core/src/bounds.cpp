#include "dchoice/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dchoice/errors.hpp"
#include "dchoice/occupancy.hpp"
#include "dchoice/robustness.hpp"
#include "dchoice/scanstat.hpp"

namespace dchoice {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::vector<unsigned> default_s_grid(unsigned n, unsigned d) {
  std::vector<unsigned> grid = {1, d, 2 * d, (n + 3) / 4};
  for (auto& s : grid) s = std::clamp(s, 1u, n);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double scan_cdf(const DemandModel& model, unsigned n, unsigned s, double x,
                bool poisson, const ScanEstimation& scan) {
  ScanQuery q{n, s, true, x};
  if (poisson) return scan_cdf_poisson(model, q);
  return scan_cdf_mc(model, q, scan.trials, derive_seed(scan.seed, s)).p_hat;
}

void require_positive_demands(const DemandModel& model) {
  if (model.has_atom_at_zero())
    throw NonpositiveDemandModel(
        "asymptotic scan bounds assume strictly positive demands; " +
        model.spec() + " has an atom at zero");
}

// exp(-(n-d+1) * (1 - F_d(x))), the Poisson form of P(S_d^(c) <= x).
double poisson_form(const DemandModel& model, unsigned n, unsigned d, double x) {
  return scan_cdf_poisson(model, ScanQuery{n, d, true, x});
}

// Maximize f over [lo, hi] by golden-section search.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c1 = b - inv_phi * (b - a), c2 = a + inv_phi * (b - a);
  double f1 = f(c1), f2 = f(c2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + inv_phi * (b - a);
      f2 = f(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - inv_phi * (b - a);
      f1 = f(c1);
    }
  }
  return f(0.5 * (a + b));
}

}  // namespace

BoundReport ub_span_based(const StorageAllocation& alloc, const DemandModel& model,
                          double m, const std::vector<unsigned>& t_values,
                          const SpanDistMethod& method) {
  if (t_values.empty()) throw ParameterMismatch("t_values must be nonempty");
  BoundReport report{"span_ub", "upper", 1.0, {}, false};
  for (unsigned t : t_values) {
    if (t < 1 || t > alloc.n_objects())
      throw ParameterMismatch("t must lie in [1, number of objects]");
    auto dist = span_t_distribution(alloc, t, method);
    double value = 0.0;
    for (const auto& [sp, mass] : dist) value += mass * model.sum_cdf(t, m * sp);
    if (value < report.value) {
      report.value = value;
      report.params["t"] = t;
    }
  }
  report.params["m"] = m;
  return report;
}

BoundReport scan_ub_any(unsigned n, unsigned d, const DemandModel& model, double m,
                        std::vector<unsigned> s_values, bool poisson,
                        const ScanEstimation& scan) {
  if (s_values.empty()) s_values = {d};
  BoundReport report{"scan_ub", "upper", 1.0, {{"m", m}, {"d", double(d)}}, poisson};
  for (unsigned s : s_values) {
    if (s < 1 || s > n) throw BadWindow("s must lie in [1, n]");
    double value = scan_cdf(model, n, s, double(s) * m * d, poisson, scan);
    if (value < report.value) {
      report.value = value;
      report.params["s"] = s;
    }
  }
  return report;
}

std::pair<BoundReport, BoundReport> rgap_bounds(unsigned n, unsigned d, unsigned r,
                                                const DemandModel& model, double m,
                                                unsigned s,
                                                const ScanEstimation& scan) {
  if (r + 1 < d) throw BadWindow("r-gap bounds need r >= d - 1");
  if (s < 1 || s > n - 2 * r) throw BadWindow("need 1 <= s <= n - 2r");
  BoundReport lower{"rgap_lb", "lower",
                    scan_cdf(model, n, r + 1, m * d, false, scan),
                    {{"r", double(r)}, {"m", m}},
                    false};
  BoundReport upper{"rgap_ub", "upper",
                    scan_cdf(model, n, s, m * (s + 2.0 * r), false, scan),
                    {{"r", double(r)}, {"s", double(s)}, {"m", m}},
                    false};
  return {lower, upper};
}

std::pair<BoundReport, BoundReport> cyclic_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m, BoundMode mode,
    const std::optional<SubGaussianParams>& sg, const ScanEstimation& scan,
    std::vector<unsigned> s_grid) {
  std::map<std::string, double> base{{"m", m}, {"d", double(d)}};
  switch (mode) {
    case BoundMode::Finite: {
      BoundReport lower{"cyclic_lb", "lower",
                        scan_cdf(model, n, d, m * d, false, scan), base, false};
      if (s_grid.empty()) s_grid = default_s_grid(n, d);
      BoundReport upper{"cyclic_ub", "upper", 1.0, base, false};
      for (unsigned s : s_grid) {
        double value = scan_cdf(model, n, s, m * (s + d - 1.0), false, scan);
        if (value < upper.value) {
          upper.value = value;
          upper.params["s"] = s;
        }
      }
      return {lower, upper};
    }
    case BoundMode::Asymptotic: {
      require_positive_demands(model);
      BoundReport lower{"cyclic_lb_poisson", "lower",
                        poisson_form(model, n, d, m * d), base, true};
      BoundReport upper{"cyclic_ub_poisson", "upper",
                        poisson_form(model, n, d, 2.0 * m * d), base, true};
      return {lower, upper};
    }
    case BoundMode::SubGaussian: {
      if (!sg) throw BadMode("sub-gaussian mode needs alpha/beta/gamma/mu");
      if (m < sg->mu) throw BadMode("sub-gaussian bounds need m >= mu");
      double w = double(n) - d + 1.0;
      double lo =
          std::exp(-w * sg->gamma * std::exp(-double(d) * sg->beta * std::pow(m - sg->mu, 2)));
      double hi = std::exp(-w * std::exp(-double(d) * sg->alpha * std::pow(2 * m - sg->mu, 2)));
      base.insert({{"alpha", sg->alpha}, {"beta", sg->beta}, {"gamma", sg->gamma},
                   {"mu", sg->mu}});
      return {BoundReport{"cyclic_lb_subgauss", "lower", clamp01(lo), base, true},
              BoundReport{"cyclic_ub_subgauss", "upper", clamp01(hi), base, true}};
    }
  }
  throw BadMode("unknown bound mode");
}

std::pair<BoundReport, BoundReport> block_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m, BoundMode mode,
    const std::optional<SubGaussianParams>& sg, const ScanEstimation& scan) {
  std::map<std::string, double> base{{"m", m}, {"d", double(d)}};
  double lo_x = m * d / 2.0;
  double hi_x = m * (double(d) * d - d);
  switch (mode) {
    case BoundMode::Finite:
      return {BoundReport{"block_lb", "lower", scan_cdf(model, n, d, lo_x, false, scan),
                          base, false},
              BoundReport{"block_ub", "upper", scan_cdf(model, n, d, hi_x, false, scan),
                          base, false}};
    case BoundMode::Asymptotic: {
      require_positive_demands(model);
      return {BoundReport{"block_lb_poisson", "lower", poisson_form(model, n, d, lo_x),
                          base, true},
              BoundReport{"block_ub_poisson", "upper", poisson_form(model, n, d, hi_x),
                          base, true}};
    }
    case BoundMode::SubGaussian: {
      if (!sg) throw BadMode("sub-gaussian mode needs alpha/beta/gamma/mu");
      if (m < sg->mu) throw BadMode("sub-gaussian bounds need m >= mu");
      double w = double(n) - d + 1.0;
      double lo = std::exp(
          -w * sg->gamma * std::exp(-double(d) * sg->beta * std::pow(m / 2.0 - sg->mu, 2)));
      double hi = std::exp(
          -w * std::exp(-double(d) * sg->alpha * std::pow(m * (d - 1.0) - sg->mu, 2)));
      base.insert({{"alpha", sg->alpha}, {"beta", sg->beta}, {"gamma", sg->gamma},
                   {"mu", sg->mu}});
      return {BoundReport{"block_lb_subgauss", "lower", clamp01(lo), base, true},
              BoundReport{"block_ub_subgauss", "upper", clamp01(hi), base, true}};
    }
  }
  throw BadMode("unknown bound mode");
}

std::pair<BoundReport, std::optional<BoundReport>> clustering_bounds(
    unsigned n, unsigned d, const DemandModel& model, double m, bool subgaussian,
    const std::optional<SubGaussianParams>& sg) {
  if (d < 1 || n % d != 0) throw ParameterMismatch("clustering bounds need d | n");
  std::map<std::string, double> base{{"m", m}, {"d", double(d)}};
  if (subgaussian) {
    if (!sg) throw BadMode("sub-gaussian mode needs alpha/beta/gamma/mu");
    if (!(m > sg->mu)) throw BadMode("sub-gaussian bounds need m > mu");
    double groups = double(n) / d;
    double lo = std::pow(
        clamp01(1.0 - sg->gamma * std::exp(-double(d) * sg->beta * std::pow(m - sg->mu, 2))),
        groups);
    double hi = std::pow(
        clamp01(1.0 - std::exp(-double(d) * sg->alpha * std::pow(m - sg->mu, 2))), groups);
    base.insert({{"alpha", sg->alpha}, {"beta", sg->beta}, {"gamma", sg->gamma},
                 {"mu", sg->mu}});
    return {BoundReport{"clustering_lb_subgauss", "lower", lo, base, false},
            BoundReport{"clustering_ub_subgauss", "upper", hi, base, false}};
  }

  // Chernoff: per-cluster tail P(sum > m*d) <= exp(-d * sup_s (m*s - ln MGF(s))).
  double s_hi;
  if (model.is_exponential()) {
    s_hi = model.as_exponential().mu;  // MGF diverges at the rate
  } else if (model.is_bernoulli()) {
    s_hi = 700.0 / std::max(model.as_bernoulli().lambda, 1e-12);
  } else {
    throw Diverges("Chernoff bound needs a finite MGF on s > 0; " + model.spec() +
                   " has none");
  }
  auto exponent = [&](double s) { return m * s - std::log(model.mgf(s)); };
  double best = golden_max(exponent, 1e-12, s_hi - 1e-12, 1e-8);
  best = std::max(best, 0.0);  // s -> 0 gives exponent 0; never report worse
  double per_cluster = 1.0 - std::exp(-double(d) * best);
  BoundReport lower{"clustering_lb_chernoff", "lower",
                    std::pow(clamp01(per_cluster), double(n) / d), base, false};
  lower.params["exponent"] = best;
  return {lower, std::nullopt};
}

namespace {

double occupancy_expectation(unsigned n, unsigned d, unsigned u,
                             const DemandModel& model, double m,
                             std::uint64_t trials, std::uint64_t seed) {
  OccupancyQuery q{n, d, u};
  double total = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    total += model.sum_cdf(u, m * sample_occupancy(q, rng));
  }
  return total / double(trials);
}

}  // namespace

BoundReport random_ub(unsigned n, unsigned d, const DemandModel& model, double m,
                      const std::vector<unsigned>& partition, bool mean_approx,
                      std::uint64_t trials, std::uint64_t seed) {
  std::uint64_t sum = 0;
  for (unsigned u : partition) {
    if (u < 1) throw BadPartition("partition groups must be nonempty");
    sum += u;
  }
  if (sum != n) throw BadPartition("partition must sum to the number of objects");
  double value = 1.0;
  std::uint64_t stream = 0;
  for (unsigned u : partition) {
    if (mean_approx) {
      value *= model.sum_cdf(u, m * mean_occupancy({n, d, u}));
    } else {
      value *= occupancy_expectation(n, d, u, model, m, trials,
                                     derive_seed(seed, stream++));
    }
  }
  BoundReport report{"random_ub", mean_approx ? "approx" : "upper", clamp01(value),
                     {{"m", m}, {"d", double(d)}, {"groups", double(partition.size())}},
                     false};
  return report;
}

BoundReport random_ub_even(unsigned n, unsigned d, const DemandModel& model,
                           double m, unsigned u, bool mean_approx,
                           std::uint64_t trials, std::uint64_t seed) {
  if (u < 1 || n % u != 0) throw BadPartition("even split needs u | n");
  std::vector<unsigned> partition(n / u, u);
  auto report = random_ub(n, d, model, m, partition, mean_approx, trials, seed);
  report.params["u"] = u;
  return report;
}

BoundReport constrained_random_lb(unsigned n, unsigned d, unsigned v_max,
                                  const DemandModel& model, double m,
                                  const ScanEstimation& scan) {
  if (v_max < 1) throw ParameterMismatch("v_max must be >= 1");
  double x = m * d / double(v_max);
  return {"constrained_random_lb", "lower", scan_cdf(model, n, d, x, false, scan),
          {{"m", m}, {"d", double(d)}, {"v_max", double(v_max)}},
          false};
}

std::vector<TrendRow> limit_trend(Design design, const DemandModel& model, double m,
                                  double c, double gamma,
                                  const std::vector<unsigned>& n_grid) {
  std::vector<TrendRow> rows;
  for (unsigned n : n_grid) {
    double d_real = c * std::pow(std::log(double(n)), gamma);
    unsigned d = std::max(1u, unsigned(std::lround(d_real)));
    double value;
    switch (design) {
      case Design::Clustering:
        // closed form with a real group-count exponent so d need not divide n
        value = P_clustering_real(n, d, model, m);
        break;
      case Design::Cyclic:
        value = poisson_form(model, n, d, m * d);
        break;
      default:
        // universal scan upper bound, Poisson form at threshold m*d^2
        value = poisson_form(model, n, d, m * double(d) * d);
        break;
    }
    rows.push_back({n, d, value});
  }
  return rows;
}

}  // namespace dchoice
