#include "dchoice/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dchoice/errors.hpp"

namespace dchoice {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ParseError(msg);
}

// key=value,key=value
std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    require(eq != std::string::npos, "expected key=value in model spec");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

double inv_pareto(double u, double lambda, double alpha) {
  // u in [0,1); maps to the Pareto quantile of 1-u
  return lambda * std::pow(1.0 - u, -1.0 / alpha);
}

std::vector<unsigned> first_primes(std::size_t count) {
  std::vector<unsigned> primes;
  for (unsigned c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (unsigned p : primes) {
      if (static_cast<unsigned long long>(p) * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

constexpr std::size_t kParetoQmcSamples = 200000;

// Sorted u-fold Pareto sums from a Kronecker low-discrepancy sequence,
// cached per (u, lambda, alpha).
const std::vector<double>& pareto_sum_samples(unsigned u, double lambda, double alpha) {
  using Key = std::tuple<unsigned, double, double>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{u, lambda, alpha}];
  if (!slot) {
    auto primes = first_primes(u);
    std::vector<double> alphas(u);
    for (unsigned j = 0; j < u; ++j) {
      double r = std::sqrt(static_cast<double>(primes[j]));
      alphas[j] = r - std::floor(r);
    }
    auto sums = std::make_unique<std::vector<double>>(kParetoQmcSamples);
    for (std::size_t i = 0; i < kParetoQmcSamples; ++i) {
      double s = 0.0;
      for (unsigned j = 0; j < u; ++j) {
        double x = static_cast<double>(i + 1) * alphas[j];
        s += inv_pareto(x - std::floor(x), lambda, alpha);
      }
      (*sums)[i] = s;
    }
    std::sort(sums->begin(), sums->end());
    slot = std::move(sums);
  }
  return *slot;
}

}  // namespace

DemandModel DemandModel::exponential(double mu) {
  if (!(mu > 0)) throw ParseError("exp: mu must be > 0");
  return DemandModel(ExpDemand{mu});
}

DemandModel DemandModel::pareto(double lambda, double alpha) {
  if (!(lambda > 0) || !(alpha > 0)) throw ParseError("pareto: lambda, alpha must be > 0");
  return DemandModel(ParetoDemand{lambda, alpha});
}

DemandModel DemandModel::scaled_bernoulli(double lambda, double p) {
  if (!(lambda > 0) || p < 0 || p > 1) throw ParseError("bern: need lambda > 0, 0 <= p <= 1");
  return DemandModel(ScaledBernoulliDemand{lambda, p});
}

DemandModel DemandModel::parse(const std::string& spec) {
  auto colon = spec.find(':');
  require(colon != std::string::npos, "model spec needs '<name>:<params>'");
  std::string name = spec.substr(0, colon);
  auto params = parse_params(spec.substr(colon + 1));
  if (name == "exp") {
    require(params.count("mu") == 1, "exp: need mu");
    return exponential(params["mu"]);
  }
  if (name == "pareto") {
    require(params.count("lambda") && params.count("alpha"), "pareto: need lambda, alpha");
    return pareto(params["lambda"], params["alpha"]);
  }
  if (name == "bern") {
    require(params.count("lambda") && params.count("p"), "bern: need lambda, p");
    return scaled_bernoulli(params["lambda"], params["p"]);
  }
  throw ParseError("unknown demand model: " + name);
}

std::string DemandModel::name() const {
  if (is_exponential()) return "exp";
  if (is_pareto()) return "pareto";
  return "bern";
}

std::string DemandModel::param_string() const {
  std::ostringstream os;
  if (is_exponential()) {
    os << "mu=" << as_exponential().mu;
  } else if (is_pareto()) {
    os << "lambda=" << as_pareto().lambda << ",alpha=" << as_pareto().alpha;
  } else {
    os << "lambda=" << as_bernoulli().lambda << ",p=" << as_bernoulli().p;
  }
  return os.str();
}

std::string DemandModel::spec() const { return name() + ":" + param_string(); }

double DemandModel::sample_one(Rng& rng) const {
  double u = rng.next_double();
  if (is_exponential()) return -std::log1p(-u) / as_exponential().mu;
  if (is_pareto()) return inv_pareto(u, as_pareto().lambda, as_pareto().alpha);
  const auto& b = as_bernoulli();
  return u < b.p ? b.lambda : 0.0;
}

std::vector<double> DemandModel::sample(std::size_t k, Rng& rng) const {
  std::vector<double> out(k);
  for (auto& x : out) x = sample_one(rng);
  return out;
}

double DemandModel::sum_cdf(unsigned u, double x) const {
  if (u < 1) throw ParameterMismatch("sum_cdf: u must be >= 1");
  if (x < 0) return 0.0;
  if (is_exponential()) {
    // Erlang(u, mu): regularized lower incomplete gamma
    return boost::math::gamma_p(static_cast<double>(u), as_exponential().mu * x);
  }
  if (is_bernoulli()) {
    const auto& b = as_bernoulli();
    double kf = std::floor(x / b.lambda + 1e-9);
    if (kf >= u) return 1.0;
    if (b.p <= 0.0) return 1.0;
    if (b.p >= 1.0) return kf >= u ? 1.0 : 0.0;
    return boost::math::cdf(boost::math::binomial_distribution<>(u, b.p), kf);
  }
  const auto& pr = as_pareto();
  if (x < u * pr.lambda) return 0.0;  // sum of u samples is at least u*lambda
  const auto& sums = pareto_sum_samples(u, pr.lambda, pr.alpha);
  auto it = std::upper_bound(sums.begin(), sums.end(), x);
  return static_cast<double>(it - sums.begin()) / static_cast<double>(sums.size());
}

double DemandModel::mgf(double t) const {
  if (is_exponential()) {
    double mu = as_exponential().mu;
    if (t >= mu) throw Diverges("Exp MGF diverges for t >= mu");
    return mu / (mu - t);
  }
  if (is_bernoulli()) {
    const auto& b = as_bernoulli();
    return 1.0 - b.p + b.p * std::exp(b.lambda * t);
  }
  if (t > 0) throw Diverges("Pareto MGF is infinite for t > 0");
  if (t == 0) return 1.0;
  // t < 0: no closed form; deterministic QMC estimate
  const auto& pr = as_pareto();
  const auto& sums = pareto_sum_samples(1, pr.lambda, pr.alpha);
  double acc = 0.0;
  for (double x : sums) acc += std::exp(t * x);
  return acc / static_cast<double>(sums.size());
}

double DemandModel::mean() const {
  if (is_exponential()) return 1.0 / as_exponential().mu;
  if (is_bernoulli()) return as_bernoulli().lambda * as_bernoulli().p;
  const auto& pr = as_pareto();
  if (pr.alpha <= 1.0) return std::numeric_limits<double>::infinity();
  return pr.alpha * pr.lambda / (pr.alpha - 1.0);
}

bool DemandModel::has_atom_at_zero() const {
  return is_bernoulli() && as_bernoulli().p < 1.0;
}

}  // namespace dchoice
