#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "stlrisk/ext_real.hpp"
#include "stlrisk/formula.hpp"
#include "stlrisk/predicate.hpp"
#include "stlrisk/samples.hpp"
#include "stlrisk/trace.hpp"

namespace stlrisk {

enum class Measure { VaR, CVaR, Expected, MeanVariance, WorstCase };

const char* to_string(Measure m);
/// Accepts "var", "cvar", "expected", "meanvar", "worst"; throws Error(Param).
Measure parse_measure(std::string_view name);

struct Bounds {
  double lo;
  double hi;
};

struct RiskParams {
  double beta = 0.9;
  double delta = 0.05;
  double lambda = 0.0;
  std::optional<Bounds> bounds;  ///< support of Z, for the Hoeffding interval
};

/// VaR point estimate with the DKW confidence bounds.
struct VarTriple {
  ExtReal lower;
  double point;
  ExtReal upper;
  double epsilon;
};

struct RiskResult {
  Measure measure;
  double value;
  std::optional<ExtReal> lower;
  std::optional<ExtReal> upper;
  double beta;
  double delta;
  std::size_t n;
  double epsilon;
};

/// DKW band half-width sqrt(ln(2/delta) / (2N)).
double dkw_epsilon(std::size_t n, double delta);

/// F(alpha) = #{i : Z^i <= alpha} / N.
double empirical_cdf(const RobustnessSamples& z, double alpha);

/// inf {alpha | F(alpha) >= beta}, i.e. the ceil(N beta)-th order statistic.
double var_point(const RobustnessSamples& z, double beta);

/// upper = inf {alpha | F(alpha) - eps >= beta}, +inf when empty;
/// lower = inf {alpha | F(alpha) + eps >= beta}, -inf when every alpha
/// qualifies. With probability >= 1 - delta, lower <= VaR_beta <= upper
/// for a continuous distribution.
VarTriple var_bounds(const RobustnessSamples& z, double beta, double delta);

/// min over alpha of alpha + mean((Z - alpha)^+) / (1 - beta).
double cvar_point(const RobustnessSamples& z, double beta);

double expected(const RobustnessSamples& z);

/// Two-sided Hoeffding interval for E[Z] at level 1 - delta, for Z in [a, b].
/// Throws Error(Bounds) if a sample lies outside [a, b].
Bounds expected_hoeffding(const RobustnessSamples& z, double delta, Bounds support);

/// mean + lambda * sample variance (divisor N - 1; zero when N = 1).
double mean_variance(const RobustnessSamples& z, double lambda);

double worst_case(const RobustnessSamples& z);

/// Z^i -> cost(Z^i). Throws Error(Monotonicity) if cost reorders the samples.
RobustnessSamples apply_cost(const RobustnessSamples& z, const std::function<double(double)>& cost);

/// Applies one estimator to samples already computed.
RiskResult estimate(const RobustnessSamples& z, Measure measure, const RiskParams& params);

/// Z^i = -rho(f, X^i, t) over the ensemble, then the chosen estimator.
/// Throws Error(InfiniteRobustness) when any rho is infinite.
RiskResult risk_of_formula(const Ensemble& e, const Formula& f, const PredicateTable& predicates, std::size_t t,
                           const RiskParams& params, Measure measure, unsigned threads = 1);

/// {"measure", "value", "lower", "upper", "beta", "delta", "n", "epsilon"};
/// infinite bounds serialize as "inf" / "-inf", absent ones as null.
std::string to_json(const RiskResult& r);

}  // namespace stlrisk
