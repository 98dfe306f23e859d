#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dchoice/rng.hpp"

namespace dchoice {

struct ExpDemand {
  double mu;  // rate
};

struct ParetoDemand {
  double lambda;  // minimum value
  double alpha;   // tail index
};

struct ScaledBernoulliDemand {
  double lambda;  // scale
  double p;       // success probability
};

// Object demand distribution: i.i.d. nonnegative loads in units of node
// capacity. Immutable value type.
class DemandModel {
 public:
  static DemandModel exponential(double mu);
  static DemandModel pareto(double lambda, double alpha);
  static DemandModel scaled_bernoulli(double lambda, double p);

  // Parses "exp:mu=1.0", "pareto:lambda=1.0,alpha=2.5", "bern:lambda=2.0,p=0.3".
  static DemandModel parse(const std::string& spec);
  std::string spec() const;
  std::string name() const;        // "exp" | "pareto" | "bern"
  std::string param_string() const;

  double sample_one(Rng& rng) const;
  std::vector<double> sample(std::size_t k, Rng& rng) const;

  // F_u(x) = P(rho_1 + ... + rho_u <= x). Right-continuous; 0 for x < 0.
  // Pareto has no closed form and is evaluated by a cached deterministic
  // quasi-Monte-Carlo estimate (abs error ~1e-3).
  double sum_cdf(unsigned u, double x) const;

  // E[exp(t * rho)]. Throws Diverges outside the domain of finiteness.
  double mgf(double t) const;

  double mean() const;  // +inf for Pareto with alpha <= 1
  bool has_atom_at_zero() const;

  bool is_exponential() const { return std::holds_alternative<ExpDemand>(v_); }
  bool is_pareto() const { return std::holds_alternative<ParetoDemand>(v_); }
  bool is_bernoulli() const { return std::holds_alternative<ScaledBernoulliDemand>(v_); }
  const ExpDemand& as_exponential() const { return std::get<ExpDemand>(v_); }
  const ParetoDemand& as_pareto() const { return std::get<ParetoDemand>(v_); }
  const ScaledBernoulliDemand& as_bernoulli() const { return std::get<ScaledBernoulliDemand>(v_); }

 private:
  using Variant = std::variant<ExpDemand, ParetoDemand, ScaledBernoulliDemand>;
  explicit DemandModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace dchoice
