// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gen.hpp"
#include "oracle.hpp"
#include "stlrisk/error.hpp"
#include "stlrisk/parser.hpp"
#include "stlrisk/risk.hpp"
#include "stlrisk/scenario.hpp"
#include "stlrisk/semantics.hpp"

using namespace stlrisk;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.ok = false;
    o.detail += " (time limit " + std::to_string(limit_s) + " s exceeded)";
  }
  if (!o.ok) ++failures;
  std::printf("%s %d %s: %s [%.2f s]\n", o.ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

RobustnessSamples samples(std::vector<double> v) { return RobustnessSamples(std::move(v)); }

Outcome soundness() {
  testgen::Rng rng(1001);
  testgen::FormulaShape shape;
  shape.max_depth = 4;
  int checked = 0, violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 10, 3);
    const ExtReal rho = eval_robust(inst.formula, inst.predicates, inst.trace, inst.t);
    if (rho.is_finite() && std::abs(rho.value()) <= 1e-9) continue;
    ++checked;
    const bool sat = eval_boolean(inst.formula, inst.predicates, inst.trace, inst.t);
    if ((rho > ExtReal(0.0) && !sat) || (rho < ExtReal(0.0) && sat)) ++violations;
  }
  return {violations == 0, std::to_string(checked) + " decisive cases, " + std::to_string(violations) + " violations"};
}

Outcome oracle_equivalence() {
  testgen::Rng rng(1002);
  testgen::FormulaShape shape;
  shape.max_depth = 3;
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 8, 3);
    const long t = static_cast<long>(inst.t);
    const double want_r = oracle::robust(inst.formula, inst.predicates, inst.trace, t);
    const bool want_b = oracle::boolean(inst.formula, inst.predicates, inst.trace, t);
    const double got_r = eval_robust(inst.formula, inst.predicates, inst.trace, inst.t).value();
    const bool got_b = eval_boolean(inst.formula, inst.predicates, inst.trace, inst.t);
    if (got_r != want_r || got_b != want_b) ++mismatches;
  }
  return {mismatches == 0, "1000 instances, " + std::to_string(mismatches) + " mismatches"};
}

Outcome dkw_coverage() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double beta = 0.9, delta = 0.05;
  int covered = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> z(200);
    for (auto& v : z) v = u(rng);
    const auto b = var_bounds(samples(z), beta, delta);
    if (b.lower <= ExtReal(beta) && ExtReal(beta) <= b.upper) ++covered;
  }
  const double frac = covered / 500.0;
  return {frac >= 0.93, "coverage " + std::to_string(frac) + " (need >= 0.93)"};
}

Outcome var_ordering() {
  testgen::Rng rng(1004);
  int bad_order = 0, bad_upper = 0, bad_lower = 0, upper_cases = 0, lower_cases = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> z(1 + testgen::pick(rng, 100));
    const bool ties = testgen::pick(rng, 3) == 0;
    for (auto& v : z) {
      v = testgen::uniform(rng, -10.0, 10.0);
      if (ties) v = std::round(v);
    }
    const double beta = testgen::uniform(rng, 0.001, 0.999);
    const double delta = testgen::uniform(rng, 0.001, 0.999);
    const auto b = var_bounds(samples(z), beta, delta);
    if (!(b.lower <= ExtReal(b.point) && ExtReal(b.point) <= b.upper)) ++bad_order;
    if (beta + b.epsilon > 1.0) {
      ++upper_cases;
      if (!b.upper.is_pos_inf()) ++bad_upper;
    }
    if (beta - b.epsilon <= 0.0) {
      ++lower_cases;
      if (!b.lower.is_neg_inf()) ++bad_lower;
    }
  }
  const bool ok = bad_order == 0 && bad_upper == 0 && bad_lower == 0 && upper_cases > 0 && lower_cases > 0;
  return {ok, std::to_string(bad_order) + " order violations; " + std::to_string(upper_cases) +
                  " upper degeneracies (" + std::to_string(bad_upper) + " wrong); " + std::to_string(lower_cases) +
                  " lower degeneracies (" + std::to_string(bad_lower) + " wrong)"};
}

Outcome risk_axioms() {
  testgen::Rng rng(1005);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(1 + testgen::pick(rng, 50));
    for (auto& x : v) x = testgen::uniform(rng, -10.0, 10.0);
    const double beta = testgen::uniform(rng, 0.01, 0.99);
    const double c = testgen::uniform(rng, -5.0, 5.0);
    const double k = testgen::uniform(rng, 0.0, 5.0);
    std::vector<double> up(v), shifted(v), scaled(v), perm(v);
    for (auto& x : up) x += testgen::pick(rng, 2) == 0 ? 0.0 : testgen::uniform(rng, 0.0, 3.0);
    for (auto& x : shifted) x += c;
    for (auto& x : scaled) x *= k;
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::vector<std::function<double(const RobustnessSamples&)>> estimators{
        [&](const RobustnessSamples& s) { return var_point(s, beta); },
        [&](const RobustnessSamples& s) { return cvar_point(s, beta); },
        [](const RobustnessSamples& s) { return expected(s); },
        [](const RobustnessSamples& s) { return worst_case(s); },
    };
    for (const auto& est : estimators) {
      const double base = est(samples(v));
      if (!(base <= est(samples(up)) + 1e-12)) ++violations;
      if (!(std::abs(est(samples(shifted)) - (base + c)) <= 1e-12)) ++violations;
      if (!(std::abs(est(samples(scaled)) - k * base) <= 1e-12)) ++violations;
      if (est(samples(perm)) != base) ++violations;
    }
  }

  // Mean-variance: z = (0,1) <= z' = (1,1). MV(z) = 1/2 + lambda/2 and
  // MV(z') = 1, so monotonicity fails exactly for lambda > 1.
  const auto z = samples({0.0, 1.0});
  const auto zp = samples({1.0, 1.0});
  const double threshold = (mean_variance(zp, 0.0) - mean_variance(z, 0.0)) /
                           (mean_variance(z, 1.0) - mean_variance(z, 0.0) - (mean_variance(zp, 1.0) - mean_variance(zp, 0.0)));
  const bool counterexample = threshold == 1.0 && mean_variance(z, 0.5) <= mean_variance(zp, 0.5) &&
                              mean_variance(z, 1.0) == mean_variance(zp, 1.0) &&
                              mean_variance(z, 1.5) > mean_variance(zp, 1.5);
  return {violations == 0 && counterexample,
          std::to_string(violations) + " axiom violations; mean-variance monotonicity fails for lambda > " +
              std::to_string(threshold)};
}

Outcome surrogate() {
  testgen::Rng rng(1006);
  int violations = 0;
  const Formula f = parse("p");
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = 1 + testgen::pick(rng, 3);
    PredicateTable table;
    table.add("p", testgen::random_predicate(rng, dim));
    std::vector<Trace> traces;
    const std::size_t n = 10 + testgen::pick(rng, 191);
    for (std::size_t k = 0; k < n; ++k) traces.push_back(testgen::random_trace(rng, 1, dim));
    const Ensemble e(std::move(traces));

    const auto z = eval_robust_ensemble(f, table, e, 0);
    const auto zd = apply_cost(z, [](double v) { return std::min(v, 0.0); });  // -max(rho, 0)
    RiskParams params;
    params.beta = testgen::uniform(rng, 0.05, 0.95);
    params.delta = 0.05;
    for (Measure m : {Measure::VaR, Measure::CVaR, Measure::Expected, Measure::WorstCase}) {
      const auto a = estimate(zd, m, params);
      const auto b = estimate(z, m, params);
      if (!(a.value <= b.value + (m == Measure::CVaR ? 1e-12 : 0.0))) ++violations;
      if (m == Measure::VaR && !(*a.upper <= *b.upper && *a.lower <= *b.lower)) ++violations;
    }
  }
  return {violations == 0, "200 ensembles, " + std::to_string(violations) + " violations"};
}

Outcome calibration() {
  const auto p = build_case_study_formula();
  const double want[] = {-0.15, 0.01, 0.25, 0.25, 0.25, 0.25};
  const auto& traj = default_trajectories();
  double worst = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    const auto rho = eval_robust(p.formula, p.predicates, case_study_trace(traj[j], {2.0, 3.0}, {6.0, 4.0}), 0);
    worst = std::max(worst, std::abs(rho.value() - want[j]));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.3g", worst);
  return {worst <= 1e-9, buf};
}

Outcome case_study() {
  CaseStudyConfig config;  // seed 42, N = 6500, delta = 0.001
  config.threads = 0;
  const auto table = run_case_study(config);
  const std::size_t nb = config.betas.size();
  bool signs = true, rows123 = true;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t j = 1; j <= 6; ++j) {
      const ExtReal u = table.upper(j, b);
      if (j <= 2 ? !(u > ExtReal(0.0)) : !(u < ExtReal(0.0))) signs = false;
    }
    if (!(table.upper(1, b) > table.upper(2, b) && table.upper(2, b) > table.upper(3, b))) rows123 = false;
  }
  const std::size_t b975 = static_cast<std::size_t>(
      std::find(config.betas.begin(), config.betas.end(), 0.975) - config.betas.begin());
  const bool tail = b975 < nb && table.upper(6, b975) < table.upper(4, b975) &&
                    table.upper(4, b975) < table.upper(5, b975);
  std::string detail = std::string("signs ") + (signs ? "ok" : "wrong") + ", rows 1>2>3 " +
                       (rows123 ? "ok" : "wrong") + ", beta=0.975 row6<row4<row5 " + (tail ? "ok" : "wrong");
  if (b975 < nb) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " (0.975 column: %.4g %.4g %.4g %.4g %.4g %.4g)", table.upper(1, b975).value(),
                  table.upper(2, b975).value(), table.upper(3, b975).value(), table.upper(4, b975).value(),
                  table.upper(5, b975).value(), table.upper(6, b975).value());
    detail += buf;
  }
  return {signs && rows123 && tail, detail};
}

Outcome parser_round_trip() {
  testgen::Rng rng(1009);
  testgen::FormulaShape shape;
  shape.unbounded = true;
  shape.max_lo = 5;
  shape.max_width = 5;
  int round_trip_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto f = testgen::random_formula(rng, shape, 1 + testgen::pick(rng, 5));
    const auto text = format(f);
    if (!(parse(text) == f) || format(parse(text)) != text) ++round_trip_failures;
  }
  const std::string alphabet = "pqUSGFHO!&|()[],-0123456789 infrtue\t\n";
  int accepted = 0, rejected = 0, bad = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s(testgen::pick(rng, 60), '\0');
    for (auto& ch : s) {
      ch = testgen::pick(rng, 2) == 0 ? static_cast<char>(testgen::pick(rng, 256))
                                      : alphabet[testgen::pick(rng, alphabet.size())];
    }
    try {
      const auto f = parse(s);
      ++accepted;
      if (!(parse(format(f)) == f)) ++bad;
    } catch (const ParseError& e) {
      ++rejected;
      if (e.span().start > e.span().end || e.span().end > s.size()) ++bad;
    }
  }
  return {round_trip_failures == 0 && bad == 0,
          std::to_string(round_trip_failures) + " round-trip failures; fuzz accepted " + std::to_string(accepted) +
              ", rejected " + std::to_string(rejected) + ", malformed " + std::to_string(bad)};
}

}  // namespace

int main() {
  report(1, "soundness sweep", 30, soundness);
  report(2, "oracle equivalence", 10, oracle_equivalence);
  report(3, "DKW coverage", 60, dkw_coverage);
  report(4, "VaR bound ordering and degeneracies", 10, var_ordering);
  report(5, "risk axioms", 10, risk_axioms);
  report(6, "surrogate ordering", 0, surrogate);
  report(7, "trajectory calibration", 0, calibration);
  report(8, "case-study table shape", 60, case_study);
  report(9, "parser round trip and fuzz", 0, parser_round_trip);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
