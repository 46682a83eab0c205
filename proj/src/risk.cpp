#include "stlrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "stlrisk/error.hpp"
#include "stlrisk/numfmt.hpp"
#include "stlrisk/semantics.hpp"

namespace stlrisk {

RobustnessSamples::RobustnessSamples(std::vector<double> z) : z_(std::move(z)) {
  if (z_.empty()) throw Error(ErrorCode::Empty, "no robustness samples");
  for (std::size_t i = 0; i < z_.size(); ++i) {
    if (!std::isfinite(z_[i])) {
      throw Error(ErrorCode::InfiniteRobustness,
                  "sample " + std::to_string(i) + " is not finite; risk estimators need real-valued robustness");
    }
  }
}

const char* to_string(Measure m) {
  switch (m) {
    case Measure::VaR: return "var";
    case Measure::CVaR: return "cvar";
    case Measure::Expected: return "expected";
    case Measure::MeanVariance: return "meanvar";
    case Measure::WorstCase: return "worst";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : {Measure::VaR, Measure::CVaR, Measure::Expected, Measure::MeanVariance, Measure::WorstCase}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::Param, "unknown risk measure '" + std::string(name) + "'");
}

namespace {

void check_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::Param, std::string(what) + " must lie in (0,1), got " + format_real(v));
  }
}

std::vector<double> sorted_copy(const RobustnessSamples& z) {
  std::vector<double> s(z.values().begin(), z.values().end());
  std::sort(s.begin(), s.end());
  return s;
}

/// Smallest k in [0, N] with k/N + shift >= beta, or N + 1 when none. The
/// comparison is written exactly as in the set definition so the result is
/// the literal infimum under floating point.
std::size_t smallest_count(std::size_t n, double shift, double beta) {
  auto ok = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n) + shift >= beta; };
  if (!ok(n)) return n + 1;
  std::size_t lo = 0;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

/// inf {alpha in extended reals | F(alpha) + shift >= beta}.
ExtReal quantile_set_inf(const std::vector<double>& sorted, double shift, double beta) {
  const std::size_t k = smallest_count(sorted.size(), shift, beta);
  if (k == 0) return ExtReal::neg_inf();  // F(-inf) = 0 already qualifies
  if (k > sorted.size()) return ExtReal::pos_inf();
  return sorted[k - 1];
}

}  // namespace

double dkw_epsilon(std::size_t n, double delta) {
  check_unit(delta, "delta");
  if (n == 0) throw Error(ErrorCode::Param, "sample count must be positive");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double empirical_cdf(const RobustnessSamples& z, double alpha) {
  const auto v = z.values();
  const auto count = std::count_if(v.begin(), v.end(), [&](double x) { return x <= alpha; });
  return static_cast<double>(count) / static_cast<double>(v.size());
}

double var_point(const RobustnessSamples& z, double beta) {
  check_unit(beta, "beta");
  return quantile_set_inf(sorted_copy(z), 0.0, beta).value();
}

VarTriple var_bounds(const RobustnessSamples& z, double beta, double delta) {
  check_unit(beta, "beta");
  const double eps = dkw_epsilon(z.size(), delta);
  const auto s = sorted_copy(z);
  return {quantile_set_inf(s, eps, beta), quantile_set_inf(s, 0.0, beta).value(), quantile_set_inf(s, -eps, beta),
          eps};
}

double cvar_point(const RobustnessSamples& z, double beta) {
  check_unit(beta, "beta");
  const auto s = sorted_copy(z);
  const std::size_t n = s.size();
  const double scale = 1.0 / ((1.0 - beta) * static_cast<double>(n));
  // g(alpha) = alpha + scale * sum (s_k - alpha)^+ is convex and piecewise
  // linear with kinks at the samples, so its minimum sits on a sample.
  // Suffix sums locate the minimizer in O(N); the returned value is then
  // recomputed from direct differences to avoid cancellation.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + s[i];
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = s[i] + scale * (suffix[i] - static_cast<double>(n - i) * s[i]);
    if (g < best) {
      best = g;
      best_i = i;
    }
  }
  auto g_exact = [&](std::size_t i) {
    double excess = 0.0;
    for (std::size_t k = n; k-- > i;) excess += s[k] - s[i];
    return s[i] + scale * excess;
  };
  double result = g_exact(best_i);
  if (best_i > 0) result = std::min(result, g_exact(best_i - 1));
  if (best_i + 1 < n) result = std::min(result, g_exact(best_i + 1));
  return result;
}

// Sums run over the sorted samples so the result does not depend on order.
double expected(const RobustnessSamples& z) {
  const auto s = sorted_copy(z);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

Bounds expected_hoeffding(const RobustnessSamples& z, double delta, Bounds support) {
  if (!(support.lo < support.hi) || !std::isfinite(support.lo) || !std::isfinite(support.hi)) {
    throw Error(ErrorCode::Param, "Hoeffding bounds need finite a < b");
  }
  for (double v : z.values()) {
    if (v < support.lo || v > support.hi) {
      throw Error(ErrorCode::Bounds, "sample " + format_real(v) + " lies outside [" + format_real(support.lo) + "," +
                                         format_real(support.hi) + "]");
    }
  }
  const double mean = expected(z);
  const double half = (support.hi - support.lo) * dkw_epsilon(z.size(), delta);
  return {mean - half, mean + half};
}

double mean_variance(const RobustnessSamples& z, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::Param, "lambda must be finite and >= 0");
  const double mean = expected(z);
  const std::size_t n = z.size();
  if (n == 1) return mean;
  double ss = 0.0;
  for (double v : sorted_copy(z)) ss += (v - mean) * (v - mean);
  return mean + lambda * ss / static_cast<double>(n - 1);
}

double worst_case(const RobustnessSamples& z) {
  const auto v = z.values();
  return *std::max_element(v.begin(), v.end());
}

RobustnessSamples apply_cost(const RobustnessSamples& z, const std::function<double(double)>& cost) {
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z.values()) out.push_back(cost(v));
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t prev = order[i - 1];
    const std::size_t cur = order[i];
    if (out[cur] < out[prev]) {
      throw Error(ErrorCode::Monotonicity, "cost function is not non-decreasing on the samples: cost(" +
                                               format_real(z[prev]) + ") = " + format_real(out[prev]) + " > cost(" +
                                               format_real(z[cur]) + ") = " + format_real(out[cur]));
    }
  }
  return RobustnessSamples(std::move(out));
}

RiskResult estimate(const RobustnessSamples& z, Measure measure, const RiskParams& params) {
  check_unit(params.beta, "beta");
  check_unit(params.delta, "delta");
  RiskResult r{measure, 0.0, std::nullopt, std::nullopt, params.beta, params.delta, z.size(),
               dkw_epsilon(z.size(), params.delta)};
  switch (measure) {
    case Measure::VaR: {
      const auto t = var_bounds(z, params.beta, params.delta);
      r.value = t.point;
      r.lower = t.lower;
      r.upper = t.upper;
      break;
    }
    case Measure::CVaR:
      r.value = cvar_point(z, params.beta);
      break;
    case Measure::Expected:
      r.value = expected(z);
      if (params.bounds) {
        const auto ci = expected_hoeffding(z, params.delta, *params.bounds);
        r.lower = ci.lo;
        r.upper = ci.hi;
      }
      break;
    case Measure::MeanVariance:
      r.value = mean_variance(z, params.lambda);
      break;
    case Measure::WorstCase:
      r.value = worst_case(z);
      break;
  }
  return r;
}

RiskResult risk_of_formula(const Ensemble& e, const Formula& f, const PredicateTable& predicates, std::size_t t,
                           const RiskParams& params, Measure measure, unsigned threads) {
  check_unit(params.beta, "beta");
  check_unit(params.delta, "delta");
  return estimate(eval_robust_ensemble(f, predicates, e, t, threads), measure, params);
}

std::string to_json(const RiskResult& r) {
  auto ext = [](const std::optional<ExtReal>& v) -> std::string {
    if (!v) return "null";
    if (v->is_pos_inf()) return "\"inf\"";
    if (v->is_neg_inf()) return "\"-inf\"";
    return format_real(v->value());
  };
  std::string out = "{";
  out += "\"measure\": \"" + std::string(to_string(r.measure)) + "\", ";
  out += "\"value\": " + format_real(r.value) + ", ";
  out += "\"lower\": " + ext(r.lower) + ", ";
  out += "\"upper\": " + ext(r.upper) + ", ";
  out += "\"beta\": " + format_real(r.beta) + ", ";
  out += "\"delta\": " + format_real(r.delta) + ", ";
  out += "\"n\": " + std::to_string(r.n) + ", ";
  out += "\"epsilon\": " + format_real(r.epsilon) + "}";
  return out;
}

}  // namespace stlrisk
