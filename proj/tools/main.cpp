// Command-line experiment runner: build allocation designs, check demand
// feasibility, estimate the robustness metric P over parameter sweeps, and
// tabulate the analytic bounds — all as CSV for downstream plotting.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dchoice/allocation.hpp"
#include "dchoice/bounds.hpp"
#include "dchoice/demand.hpp"
#include "dchoice/errors.hpp"
#include "dchoice/feasibility.hpp"
#include "dchoice/occupancy.hpp"
#include "dchoice/robustness.hpp"
#include "dchoice/scanstat.hpp"

using namespace dchoice;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  std::string out;
  unsigned jobs = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master RNG seed");
  cmd->add_option("--trials", c.trials, "Monte Carlo trials");
  cmd->add_option("--out", c.out, "output CSV path (default stdout)");
  cmd->add_option("--jobs", c.jobs, "worker threads for sweeps (0 = hardware)");
  cmd->set_config("--config", "", "key = value config file; flags override");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(c.out);
    if (!os) throw std::runtime_error("cannot open output file: " + c.out);
    os << text;
  }
}

DesignKind parse_kind(const std::string& name, unsigned b, unsigned v_max) {
  DesignKind kind = DesignKind::parse(name);
  if (kind.design == Design::SingleChoice) kind.b = b;
  if (kind.design == Design::ConstrainedRandom) kind.v_max = v_max;
  return kind;
}

// Run fn(i) for i in [0, count) on a worker pool; each call must be
// independent, so output order is whatever the caller fixes afterwards.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  unsigned workers = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> parse_demand_vector(const std::string& csv) {
  std::vector<double> rho;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) rho.push_back(std::stod(item));
  return rho;
}

// ---------------------------------------------------------------- design --

int cmd_design(const Common& c, const std::string& kind_name, unsigned n, unsigned d,
               unsigned b, unsigned v_max, unsigned n_seeds,
               const std::string& alloc_out) {
  DesignKind kind = parse_kind(kind_name, b, v_max);
  if (n == 0 && kind.design == Design::Block) n = d * d - d + 1;
  if (n == 0) throw ParameterMismatch("--n is required for this design");

  std::string csv = "kind,n,d,seed,balanced,cum_overlap_2";
  for (unsigned t = 1; t <= d; ++t) csv += fmt::format(",overlap_frac_{}", t);
  csv += "\n";
  for (unsigned i = 0; i < n_seeds; ++i) {
    std::uint64_t seed = derive_seed(c.seed, i);
    StorageAllocation alloc = build(kind, n, d, seed);
    auto profile = overlap_profile(alloc);
    csv += fmt::format("{},{},{},{},{},{}", kind.to_string(), n, d, seed,
                       alloc.balanced() ? 1 : 0, cum_overlap(alloc, 2));
    for (unsigned t = 1; t <= d; ++t) {
      auto it = profile.find(t);
      csv += fmt::format(",{}", it == profile.end() ? 0.0 : it->second);
    }
    csv += "\n";
    if (!alloc_out.empty() && i == 0) {
      std::ofstream os(alloc_out);
      if (!os) throw std::runtime_error("cannot open allocation file: " + alloc_out);
      write_allocation(os, alloc);
    }
  }
  emit(c, csv);
  return 0;
}

// -------------------------------------------------------------- feasible --

int cmd_feasible(const std::string& alloc_path, const std::string& rho_arg,
                 double m) {
  std::ifstream is(alloc_path);
  if (!is) throw std::runtime_error("cannot open allocation file: " + alloc_path);
  StorageAllocation alloc = read_allocation(is);
  // --rho is a file of one real per line, or an inline comma-separated list
  std::vector<double> rho;
  if (std::ifstream rf(rho_arg); rf) {
    std::string line;
    while (std::getline(rf, line))
      if (!line.empty()) rho.push_back(std::stod(line));
  } else {
    rho = parse_demand_vector(rho_arg);
  }
  FeasibilityVerdict verdict = check_flow(alloc, rho, m);
  if (verdict.feasible) {
    std::cout << "feasible\n";
    return 0;
  }
  std::string subset;
  for (unsigned i : verdict.violating_subset)
    subset += (subset.empty() ? "" : ",") + std::to_string(i);
  std::cout << fmt::format("infeasible I={{{}}}\n", subset);
  return 1;
}

// -------------------------------------------------------------- simulate --

struct SimPoint {
  DesignKind kind;
  unsigned n, d;
  double m;
};

int cmd_simulate(const Common& c, const std::vector<std::string>& designs,
                 const std::vector<unsigned>& n_grid,
                 const std::vector<unsigned>& d_grid,
                 const std::vector<double>& m_grid, const std::string& model_spec,
                 unsigned b, unsigned v_max, bool fix_alloc) {
  if (designs.empty() || n_grid.empty() || d_grid.empty() || m_grid.empty())
    throw ParameterMismatch("designs and n/d/m grids must be nonempty");
  DemandModel model = DemandModel::parse(model_spec);

  std::vector<SimPoint> points;
  for (const auto& name : designs)
    for (unsigned n : n_grid)
      for (unsigned d : d_grid)
        for (double m : m_grid)
          points.push_back({parse_kind(name, b, v_max), n, d, m});
  std::sort(points.begin(), points.end(), [](const SimPoint& a, const SimPoint& b2) {
    return std::tuple(a.kind.to_string(), a.n, a.d, a.m) <
           std::tuple(b2.kind.to_string(), b2.n, b2.d, b2.m);
  });

  std::vector<std::string> rows(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    const SimPoint& pt = points[i];
    std::string prefix =
        fmt::format("{},{},{},{},{},{},{}", pt.kind.to_string(), pt.n, pt.d, pt.m,
                    model.name(), model.param_string(), c.trials);
    try {
      // one master seed for every point: sweeps share demand streams
      RobustnessEstimate est = estimate_P_design(pt.kind, pt.n, pt.d, model, pt.m,
                                                c.trials, c.seed, fix_alloc);
      rows[i] = fmt::format("{},{},{},{},{}\n", prefix, est.p_hat, est.ci_low,
                            est.ci_high, c.seed);
    } catch (const std::exception&) {
      rows[i] = fmt::format("{},skipped,,,{}\n", prefix, c.seed);
    }
  });

  std::string csv = "design,n,d,m,model,param,trials,p_hat,ci_low,ci_high,seed\n";
  for (const auto& row : rows) csv += row;
  emit(c, csv);
  return 0;
}

// ---------------------------------------------------------------- bounds --

int cmd_bounds(const Common& c, const std::vector<std::string>& bound_names,
               unsigned n, unsigned d, double m, const std::string& model_spec,
               const std::string& mode_name, unsigned r, unsigned s, unsigned u,
               unsigned v_max, const std::vector<double>& sg_consts, bool with_mc,
               unsigned b) {
  DemandModel model = DemandModel::parse(model_spec);
  ScanEstimation scan{c.trials, c.seed};
  std::optional<SubGaussianParams> sg;
  if (sg_consts.size() == 4)
    sg = SubGaussianParams{sg_consts[0], sg_consts[1], sg_consts[2], sg_consts[3]};

  BoundMode mode = BoundMode::Finite;
  if (mode_name == "asymptotic") mode = BoundMode::Asymptotic;
  else if (mode_name == "subgaussian") mode = BoundMode::SubGaussian;
  else if (mode_name != "finite") throw BadMode("mode must be finite|asymptotic|subgaussian");

  struct Row {
    BoundReport report;
    std::string design;
  };
  std::vector<Row> rows;
  for (const auto& name : bound_names) {
    if (name == "span") {
      StorageAllocation alloc = build(DesignKind::cyclic(), n, d, c.seed);
      std::vector<unsigned> ts = {1, 2};
      rows.push_back({ub_span_based(alloc, model, m, ts,
                                    SpanDistMethod::sampled(20000, c.seed)),
                      "cyclic"});
    } else if (name == "scan") {
      rows.push_back({scan_ub_any(n, d, model, m, {}, mode == BoundMode::Asymptotic,
                                  scan),
                      "any"});
    } else if (name == "cyclic") {
      auto [lo, hi] = cyclic_bounds(n, d, model, m, mode, sg, scan);
      rows.push_back({lo, "cyclic"});
      rows.push_back({hi, "cyclic"});
    } else if (name == "block") {
      auto [lo, hi] = block_bounds(n, d, model, m, mode, sg, scan);
      rows.push_back({lo, "block"});
      rows.push_back({hi, "block"});
    } else if (name == "clustering") {
      auto [lo, hi] = clustering_bounds(n, d, model, m,
                                        mode == BoundMode::SubGaussian, sg);
      rows.push_back({lo, "clustering"});
      if (hi) rows.push_back({*hi, "clustering"});
    } else if (name == "rgap") {
      auto [lo, hi] = rgap_bounds(n, d, r, model, m, s ? s : d, scan);
      rows.push_back({lo, "rgap"});
      rows.push_back({hi, "rgap"});
    } else if (name == "random") {
      rows.push_back({random_ub_even(n, d, model, m, u ? u : d, false, c.trials,
                                     c.seed),
                      "random"});
    } else if (name == "constrained-random") {
      rows.push_back({constrained_random_lb(n, d, v_max, model, m, scan),
                      "constrained-random"});
    } else {
      throw ParameterMismatch("unknown bound name: " + name);
    }
  }

  std::string csv = "bound,kind,design,n,d,m,model,param,value,asymptotic,seed";
  if (with_mc) csv += ",mc_p_hat,mc_ci_low,mc_ci_high";
  csv += "\n";
  std::map<std::string, RobustnessEstimate> mc_cache;
  for (const auto& row : rows) {
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}", row.report.name,
                       row.report.kind, row.design, n, d, m, model.name(),
                       model.param_string(), row.report.value,
                       row.report.asymptotic ? 1 : 0, c.seed);
    if (with_mc) {
      std::string key = row.design;
      auto it = mc_cache.find(key);
      if (it == mc_cache.end()) {
        DesignKind kind = DesignKind::cyclic();
        bool have = true;
        if (key == "cyclic" || key == "rgap" || key == "any") kind = DesignKind::cyclic();
        else if (key == "block") kind = DesignKind::block();
        else if (key == "clustering") kind = DesignKind::clustering();
        else if (key == "random") kind = DesignKind::random();
        else if (key == "constrained-random") kind = DesignKind::constrained_random(v_max);
        else have = false;
        RobustnessEstimate est{};
        if (have) {
          unsigned mc_trials = std::min<std::uint64_t>(c.trials, 20000);
          est = estimate_P_design(kind, n, d, model, m, mc_trials, c.seed);
        }
        it = mc_cache.emplace(key, est).first;
      }
      csv += fmt::format(",{},{},{}", it->second.p_hat, it->second.ci_low,
                         it->second.ci_high);
    }
    csv += "\n";
  }
  emit(c, csv);
  (void)b;
  return 0;
}

// ------------------------------------------------------------------ scan --

int cmd_scan(const Common& c, const std::string& model_spec, unsigned n, unsigned s,
             double x, bool circular, const std::string& method) {
  DemandModel model = DemandModel::parse(model_spec);
  ScanQuery q{n, s, circular, x};
  std::string csv = "method,n,s,x,circular,p,ci_low,ci_high,trials,seed\n";
  if (method == "mc") {
    auto est = scan_cdf_mc(model, q, c.trials, c.seed);
    csv += fmt::format("mc,{},{},{},{},{},{},{},{},{}\n", n, s, x, circular ? 1 : 0,
                       est.p_hat, est.ci_low, est.ci_high, c.trials, c.seed);
  } else if (method == "poisson") {
    csv += fmt::format("poisson,{},{},{},{},{},,,0,{}\n", n, s, x, circular ? 1 : 0,
                       scan_cdf_poisson(model, q), c.seed);
  } else if (method == "naus") {
    csv += fmt::format("naus,{},{},{},{},{},,,{},{}\n", n, s, x, circular ? 1 : 0,
                       scan_cdf_naus(model, q, c.trials, c.seed), c.trials, c.seed);
  } else {
    throw BadMode("method must be mc|poisson|naus");
  }
  emit(c, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replicated-storage allocation designs: feasibility, robustness, bounds"};
  app.require_subcommand(1);

  Common c_design, c_sim, c_bounds, c_scan;

  // design
  auto* design = app.add_subcommand("design", "build an allocation, report overlap stats");
  std::string kind_name = "cyclic", alloc_out;
  unsigned n = 0, d = 2, b = 1, v_max = 1, n_seeds = 1;
  design->add_option("--kind", kind_name, "design kind");
  design->add_option("--n", n, "number of nodes");
  design->add_option("--d", d, "replication factor");
  design->add_option("--b", b, "objects per node (single-choice)");
  design->add_option("--v-max", v_max, "sibling overlap cap (constrained-random)");
  design->add_option("--seeds", n_seeds, "number of seeds to aggregate");
  design->add_option("--alloc-out", alloc_out, "write first allocation to file");
  add_common(design, c_design);

  // feasible
  auto* feasible = app.add_subcommand("feasible", "check a demand vector against an allocation");
  std::string alloc_path, rho_csv;
  double m_feas = 1.0;
  feasible->add_option("--alloc", alloc_path, "allocation file")->required();
  feasible->add_option("--rho", rho_csv, "comma-separated demands")->required();
  feasible->add_option("--m", m_feas, "max-load threshold");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of P over grids");
  std::vector<std::string> designs;
  std::vector<unsigned> n_grid, d_grid;
  std::vector<double> m_grid;
  std::string model_spec = "exp:mu=1.0";
  bool fix_alloc = false;
  unsigned b_sim = 1, vmax_sim = 1;
  simulate->add_option("--design", designs, "design kinds (repeatable)");
  simulate->add_option("--n", n_grid, "node counts");
  simulate->add_option("--d", d_grid, "replication factors");
  simulate->add_option("--m", m_grid, "thresholds");
  simulate->add_option("--model", model_spec, "demand model spec");
  simulate->add_option("--b", b_sim, "objects per node (single-choice)");
  simulate->add_option("--v-max", vmax_sim, "sibling overlap cap");
  simulate->add_flag("--fix-alloc", fix_alloc, "freeze one allocation for randomized designs");
  add_common(simulate, c_sim);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "analytic bounds, optionally next to MC");
  std::vector<std::string> bound_names;
  unsigned nb = 20, db = 3, rb = 0, sb = 0, ub = 0, vmaxb = 1, bb = 1;
  double mb = 1.0;
  std::string model_b = "exp:mu=1.0", mode_b = "finite";
  std::vector<double> sg_consts;
  bool with_mc = false;
  bounds_cmd->add_option("--bound", bound_names, "bound names (repeatable)")->required();
  bounds_cmd->add_option("--n", nb, "nodes");
  bounds_cmd->add_option("--d", db, "replication factor");
  bounds_cmd->add_option("--m", mb, "threshold");
  bounds_cmd->add_option("--model", model_b, "demand model spec");
  bounds_cmd->add_option("--mode", mode_b, "finite|asymptotic|subgaussian");
  bounds_cmd->add_option("--r", rb, "gap parameter");
  bounds_cmd->add_option("--s", sb, "window length");
  bounds_cmd->add_option("--u", ub, "even-partition group size");
  bounds_cmd->add_option("--v-max", vmaxb, "sibling overlap cap");
  bounds_cmd->add_option("--subgauss", sg_consts, "alpha beta gamma mu")->expected(4);
  bounds_cmd->add_flag("--with-mc", with_mc, "append MC estimate columns");
  add_common(bounds_cmd, c_bounds);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "scan-statistic CDF");
  std::string model_s = "exp:mu=1.0", method_s = "mc";
  unsigned ns = 20, ss = 2;
  double xs = 1.0;
  bool circular = false;
  scan_cmd->add_option("--model", model_s, "demand model spec");
  scan_cmd->add_option("--n", ns, "sequence length");
  scan_cmd->add_option("--s", ss, "window length");
  scan_cmd->add_option("--x", xs, "threshold");
  scan_cmd->add_flag("--circular", circular, "circular windows");
  scan_cmd->add_option("--method", method_s, "mc|poisson|naus");
  add_common(scan_cmd, c_scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (design->parsed())
      return cmd_design(c_design, kind_name, n, d, b, v_max, n_seeds, alloc_out);
    if (feasible->parsed()) return cmd_feasible(alloc_path, rho_csv, m_feas);
    if (simulate->parsed())
      return cmd_simulate(c_sim, designs, n_grid, d_grid, m_grid, model_spec, b_sim,
                          vmax_sim, fix_alloc);
    if (bounds_cmd->parsed())
      return cmd_bounds(c_bounds, bound_names, nb, db, mb, model_b, mode_b, rb, sb,
                        ub, vmaxb, sg_consts, with_mc, bb);
    if (scan_cmd->parsed())
      return cmd_scan(c_scan, model_s, ns, ss, xs, circular, method_s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
