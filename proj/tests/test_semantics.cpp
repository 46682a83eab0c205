#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "gen.hpp"
#include "oracle.hpp"
#include "stlrisk/error.hpp"
#include "stlrisk/parser.hpp"
#include "stlrisk/scenario.hpp"
#include "stlrisk/semantics.hpp"

using namespace stlrisk;

namespace {

/// p = {x >= 0}, q = {x >= 5}, r = {x >= 2} over a one-dimensional state.
PredicateTable scalar_predicates() {
  PredicateTable t;
  t.add("p", PredicateDef::halfspace({1.0}, 0.0));
  t.add("q", PredicateDef::halfspace({1.0}, -5.0));
  t.add("r", PredicateDef::halfspace({1.0}, -2.0));
  return t;
}

Trace scalar_trace(std::initializer_list<double> values) {
  std::vector<std::vector<double>> rows;
  for (double v : values) rows.push_back({v});
  return Trace(rows);
}

double robust(const std::string& f, const Trace& x, std::size_t t = 0) {
  return eval_robust(parse(f), scalar_predicates(), x, t).value();
}

bool boolean(const std::string& f, const Trace& x, std::size_t t = 0) {
  return eval_boolean(parse(f), scalar_predicates(), x, t);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("boolean examples") {
  const auto x = scalar_trace({3, 1, 2});
  CHECK(boolean("p", x));
  CHECK(boolean("G[0,2] p", x));
  CHECK_FALSE(boolean("G[0,2] r", x));
  CHECK(boolean("p U[1,2] q", scalar_trace({1, 2, 6})));
  CHECK_FALSE(boolean("p U[1,2] q", scalar_trace({1, -2, 6})));
  CHECK(boolean("true", x));
  CHECK(boolean("p", scalar_trace({0.0})));
}

TEST_CASE("robust examples") {
  const auto x = scalar_trace({3, 1, 2});
  CHECK(robust("G[0,2] p", x) == 1.0);
  CHECK(robust("F[0,2] p", x) == 3.0);
  CHECK(robust("true", x) == kInf);
  CHECK(robust("!true", x) == -kInf);
  CHECK(robust("p U[1,2] q", scalar_trace({1, 2, 6})) == 1.0);
  CHECK(robust("p U[1,1] q", scalar_trace({1, 2, 6})) == -3.0);
  CHECK(robust("p U[0,0] q", scalar_trace({6, -9})) == 1.0);
}

TEST_CASE("past operators") {
  const auto x = scalar_trace({6, 2, -1, 3});
  CHECK(robust("O[1,2] q", x, 3) == -3.0);
  CHECK(robust("H[0,3] p", x, 3) == -1.0);
  CHECK(robust("H[0,1] p", x, 3) == -1.0);
  // t'' = 0: inner window (0, 3) = {1, 2} bounds the value by min(2, -1).
  CHECK(robust("p S[3,3] q", x, 3) == -1.0);
  // t'' = 1 wins: min(q(1), r(2)) = 2, while t'' = 2 gives q(2) = -1.
  CHECK(robust("r S[1,2] q", scalar_trace({6, 7, 4, 3}), 3) == 2.0);
  CHECK(boolean("O[3,3] q", x, 3));
}

TEST_CASE("horizon admissibility") {
  const auto x = scalar_trace({3, 1, 2});
  CHECK(code_of([&] { robust("G[0,2] p", x, 1); }) == ErrorCode::InsufficientHorizon);
  CHECK(code_of([&] { boolean("F[0,3] p", x, 0); }) == ErrorCode::InsufficientHorizon);
  CHECK(code_of([&] { robust("O[1,1] p", x, 0); }) == ErrorCode::InsufficientHorizon);
  CHECK(code_of([&] { robust("F[0,inf] p", x, 0); }) == ErrorCode::InsufficientHorizon);
  CHECK(code_of([&] { robust("p", x, 3); }) == ErrorCode::InsufficientHorizon);
  CHECK(code_of([&] { robust("nope", x, 0); }) == ErrorCode::UnknownPredicate);
  PredicateTable wide;
  wide.add("p", PredicateDef::halfspace({1.0, 1.0}, 0.0));
  CHECK(code_of([&] { eval_robust(parse("p"), wide, x, 0); }) == ErrorCode::Dimension);
  CHECK_NOTHROW(robust("G[0,2] p", x, 0));
  CHECK_NOTHROW(robust("O[2,2] p", x, 2));
}

TEST_CASE("agreement with the direct-expansion oracle") {
  testgen::Rng rng(17);
  testgen::FormulaShape shape;
  shape.max_depth = 3;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 8, 3);
    CAPTURE(format(inst.formula));
    const long t = static_cast<long>(inst.t);
    const double want = oracle::robust(inst.formula, inst.predicates, inst.trace, t);
    const double got = eval_robust(inst.formula, inst.predicates, inst.trace, inst.t).value();
    CHECK(got == want);
    CHECK(eval_boolean(inst.formula, inst.predicates, inst.trace, inst.t) ==
          oracle::boolean(inst.formula, inst.predicates, inst.trace, t));
  }
}

TEST_CASE("derived operators agree with their desugaring and negation is exact") {
  testgen::Rng rng(19);
  testgen::FormulaShape shape;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 10, 3);
    CAPTURE(format(inst.formula));
    const auto rho = eval_robust(inst.formula, inst.predicates, inst.trace, inst.t);
    CHECK(eval_robust(desugar(inst.formula), inst.predicates, inst.trace, inst.t) == rho);
    CHECK(eval_boolean(desugar(inst.formula), inst.predicates, inst.trace, inst.t) ==
          eval_boolean(inst.formula, inst.predicates, inst.trace, inst.t));
    CHECK(eval_robust(Formula::negation(inst.formula), inst.predicates, inst.trace, inst.t) == -rho);
  }
}

TEST_CASE("fast paths equal the until forms") {
  testgen::Rng rng(23);
  testgen::FormulaShape shape;
  shape.max_depth = 2;
  for (int i = 0; i < 300; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 10, 2);
    const auto& f = inst.formula;
    const auto iv = TimeInterval(testgen::pick(rng, 2), 2);
    const std::size_t len = inst.trace.length();
    const auto h = horizon(f);
    if (h.future_depth + 2 + h.past_depth > len - 1) continue;
    const std::size_t t = h.past_depth + testgen::pick(rng, len - 2 - h.future_depth - h.past_depth);
    auto rho = [&](const Formula& g, std::size_t at) { return eval_robust(g, inst.predicates, inst.trace, at); };
    CHECK(rho(Formula::eventually(f, iv), t) == rho(Formula::until(Formula::truth(), f, iv), t));
    CHECK(rho(Formula::always(f, iv), t) ==
          rho(Formula::negation(Formula::eventually(Formula::negation(f), iv)), t));
    const std::size_t tp = t + 2;
    CHECK(rho(Formula::once(f, iv), tp) == rho(Formula::since(Formula::truth(), f, iv), tp));
    CHECK(rho(Formula::historically(f, iv), tp) ==
          rho(Formula::negation(Formula::once(Formula::negation(f), iv)), tp));
  }
}

TEST_CASE("soundness of the robust semantics") {
  testgen::Rng rng(29);
  testgen::FormulaShape shape;
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto inst = testgen::random_instance(rng, shape, 10, 3);
    const double rho = eval_robust(inst.formula, inst.predicates, inst.trace, inst.t).value();
    if (std::abs(rho) <= 1e-9) continue;
    ++checked;
    CHECK(eval_boolean(inst.formula, inst.predicates, inst.trace, inst.t) == (rho > 0));
  }
  CHECK(checked > 1000);
}

TEST_CASE("growing every ball never decreases robustness of positive formulas") {
  testgen::Rng rng(31);
  testgen::FormulaShape shape;
  shape.max_depth = 3;
  for (int i = 0; i < 300; ++i) {
    // Negation-free formulas over balls only.
    std::function<Formula(std::size_t)> positive = [&](std::size_t depth) -> Formula {
      if (depth == 0 || testgen::pick(rng, 4) == 0) return Formula::predicate(shape.names[testgen::pick(rng, 3)]);
      const auto iv = testgen::random_interval(rng, shape);
      switch (testgen::pick(rng, 6)) {
        case 0: return Formula::conjunction(positive(depth - 1), positive(depth - 1));
        case 1: return Formula::disjunction(positive(depth - 1), positive(depth - 1));
        case 2: return Formula::until(positive(depth - 1), positive(depth - 1), iv);
        case 3: return Formula::eventually(positive(depth - 1), iv);
        case 4: return Formula::always(positive(depth - 1), iv);
        default: return Formula::since(positive(depth - 1), positive(depth - 1), iv);
      }
    };
    const auto f = positive(3);
    const auto h = horizon(f);
    const std::size_t len = h.future_depth + h.past_depth + 1 + testgen::pick(rng, 3);
    const std::size_t dim = 2;
    const auto x = testgen::random_trace(rng, len, dim);
    PredicateTable small, large;
    const double grow = testgen::uniform(rng, 0.01, 1.0);
    for (const auto& n : shape.names) {
      const std::vector<double> c{testgen::uniform(rng, -1, 1), testgen::uniform(rng, -1, 1)};
      const double r = testgen::uniform(rng, 0.2, 1.5);
      const auto norm = testgen::pick(rng, 2) == 0 ? Norm::L2 : Norm::Linf;
      small.add(n, PredicateDef::ball({0, 1}, c, r, norm));
      large.add(n, PredicateDef::ball({0, 1}, c, r + grow, norm));
    }
    for (std::size_t t = h.past_depth; t + h.future_depth < len; ++t) {
      CHECK(eval_robust(f, large, x, t) >= eval_robust(f, small, x, t));
    }
  }
}

TEST_CASE("ensemble evaluation") {
  PredicateTable preds;
  preds.add("p", PredicateDef::halfspace({1.0}, 0.0));
  const Ensemble one({scalar_trace({0.25})});
  CHECK(eval_robust_ensemble(parse("p"), preds, one, 0).values()[0] == -0.25);

  const Ensemble three({scalar_trace({1}), scalar_trace({-2}), scalar_trace({0})});
  const auto z = eval_robust_ensemble(parse("p"), preds, three, 0);
  CHECK(std::vector<double>(z.values().begin(), z.values().end()) == std::vector<double>{-1, 2, 0});

  CHECK(code_of([&] { eval_robust_ensemble(parse("true"), preds, three, 0); }) == ErrorCode::InfiniteRobustness);
  CHECK(code_of([&] { eval_robust_ensemble(parse("F[0,1] p"), preds, three, 0); }) ==
        ErrorCode::InsufficientHorizon);
}

TEST_CASE("ensemble evaluation is independent of the thread count") {
  CaseStudyConfig config;
  config.n = 100;
  const auto problem = build_case_study_formula();
  const auto e = sample_ensemble(config, 0);
  const auto z1 = eval_robust_ensemble(problem.formula, problem.predicates, e, 0, 1);
  CHECK(z1.size() == 100);
  for (double v : z1.values()) CHECK(std::isfinite(v));
  for (unsigned threads : {0u, 2u, 3u, 8u, 200u}) {
    CHECK(eval_robust_ensemble(problem.formula, problem.predicates, e, 0, threads) == z1);
  }
}
