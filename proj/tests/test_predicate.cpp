#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "gen.hpp"
#include "stlrisk/error.hpp"
#include "stlrisk/predicate.hpp"

using namespace stlrisk;

namespace {

using P2 = std::array<double, 2>;
using Curve = std::function<P2(double)>;

double dist(P2 a, P2 b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

/// Minimum of a unimodal function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-14; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({f(a), f(b), fc, fd});
}

/// Distance from s to a boundary curve parameterized on [0, 1]: a coarse
/// grid picks the basin, golden-section search refines inside it.
double curve_distance(const Curve& c, P2 s, int grid) {
  int best = 0;
  double best_d = dist(c(0.0), s);
  for (int i = 1; i <= grid; ++i) {
    const double d = dist(c(static_cast<double>(i) / grid), s);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const double lo = std::max(0.0, static_cast<double>(best - 1) / grid);
  const double hi = std::min(1.0, static_cast<double>(best + 1) / grid);
  return std::min(best_d, golden_min([&](double u) { return dist(c(u), s); }, lo, hi));
}

double brute_signed(bool inside, const std::vector<Curve>& boundary, P2 s, int grid) {
  double d = HUGE_VAL;
  for (const auto& c : boundary) d = std::min(d, curve_distance(c, s, grid));
  return inside ? d : -d;
}

double brute_l2_ball(P2 s, P2 center, double r) {
  const Curve circle = [=](double u) {
    return P2{center[0] + r * std::cos(2 * M_PI * u), center[1] + r * std::sin(2 * M_PI * u)};
  };
  return brute_signed(dist(s, center) <= r, {circle}, s, 3600);
}

double brute_linf_box(P2 s, P2 center, double r) {
  auto edge = [](P2 a, P2 b) { return Curve([=](double u) { return P2{a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])}; }); };
  const P2 c00{center[0] - r, center[1] - r}, c10{center[0] + r, center[1] - r};
  const P2 c11{center[0] + r, center[1] + r}, c01{center[0] - r, center[1] + r};
  const bool inside = std::abs(s[0] - center[0]) <= r && std::abs(s[1] - center[1]) <= r;
  return brute_signed(inside, {edge(c00, c10), edge(c10, c11), edge(c11, c01), edge(c01, c00)}, s, 400);
}

double brute_halfspace(P2 s, P2 a, double b) {
  // A point on the line and its direction; the segment is long enough to
  // contain the foot of the perpendicular for the sampled states.
  const double n2 = a[0] * a[0] + a[1] * a[1];
  const P2 base{-b * a[0] / n2, -b * a[1] / n2};
  const P2 dir{-a[1], a[0]};
  const Curve line = [=](double u) {
    const double k = (u - 0.5) * 200.0 / std::sqrt(n2);
    return P2{base[0] + k * dir[0], base[1] + k * dir[1]};
  };
  return brute_signed(a[0] * s[0] + a[1] * s[1] + b >= 0.0, {line}, s, 20000);
}

double sd(const PredicateDef& p, std::vector<double> s) { return p.signed_distance(s); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("signed distance examples") {
  const auto d = PredicateDef::ball({0, 1}, std::vector<double>{6, 4}, 0.7, Norm::L2);
  CHECK(sd(d, {6, 4}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(sd(d, {6, 5.4}) == doctest::Approx(-0.7).epsilon(1e-12));
  const auto a = PredicateDef::ball({0, 1}, std::vector<double>{4, 5}, 0.5, Norm::Linf);
  CHECK(sd(a, {4.2, 5.1}) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(brute_linf_box({4.2, 5.1}, {4, 5}, 0.5) - 0.3) < 1e-9);
}

TEST_CASE("halfspace and complement") {
  const auto p = PredicateDef::halfspace({1.0}, 0.0);
  CHECK(sd(p, {3}) == 3.0);
  CHECK(sd(p, {-2}) == -2.0);
  CHECK(p.contains(std::vector<double>{0.0}));
  const auto h = PredicateDef::halfspace({3.0, 4.0}, -5.0);
  CHECK(sd(h, {3, 4}) == doctest::Approx(4.0));
  const auto c = PredicateDef::complement(h);
  CHECK(sd(c, {3, 4}) == doctest::Approx(-4.0));
  CHECK(code_of([] { PredicateDef::halfspace({0.0, 0.0}, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("linf box outside corner uses Euclidean distance") {
  const auto box = PredicateDef::ball({0, 1}, std::vector<double>{0, 0}, 1.0, Norm::Linf);
  CHECK(sd(box, {4, 5}) == doctest::Approx(-5.0));
  CHECK(sd(box, {3, 0.5}) == doctest::Approx(-2.0));
  CHECK(sd(box, {0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("state-slice centers") {
  const auto c = PredicateDef::ball({0, 1}, StateSlice{{2, 3}}, 0.5, Norm::L2);
  CHECK(sd(c, {1, 1, 1, 1}) == doctest::Approx(0.5));
  CHECK(sd(c, {1, 1, 4, 5}) == doctest::Approx(0.5 - 5.0));
  CHECK(code_of([&] { sd(c, {1, 1, 1}); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { c.check_dimension(3); }) == ErrorCode::Dimension);
  CHECK_NOTHROW(c.check_dimension(4));
}

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(PredicateDef::ball({0, 1}, std::vector<double>{0}, 1.0, Norm::L2), Error);
  CHECK_THROWS_AS(PredicateDef::ball({0}, std::vector<double>{0}, 0.0, Norm::L2), Error);
  CHECK_THROWS_AS(PredicateDef::ball({0}, std::vector<double>{0}, -1.0, Norm::L2), Error);
  CHECK_THROWS_AS(PredicateDef::ball({}, std::vector<double>{}, 1.0, Norm::L2), Error);
  CHECK_THROWS_AS(PredicateDef::ball({0}, StateSlice{{1, 2}}, 1.0, Norm::L2), Error);
  const auto h = PredicateDef::halfspace({1.0, 1.0}, 0.0);
  CHECK(code_of([&] { sd(h, {1}); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { sd(h, {1, 2, 3}); }) == ErrorCode::Dimension);
}

TEST_CASE("custom predicates") {
  const auto c = PredicateDef::custom([](std::span<const double> s) { return s[1] - s[0]; }, 2);
  CHECK(sd(c, {1, 4}) == 3.0);
  CHECK(code_of([&] { sd(c, {1}); }) == ErrorCode::Dimension);
}

TEST_CASE("closed forms match a brute-force boundary search") {
  testgen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const P2 s{testgen::uniform(rng, -3, 3), testgen::uniform(rng, -3, 3)};
    const P2 c{testgen::uniform(rng, -1, 1), testgen::uniform(rng, -1, 1)};
    const double r = testgen::uniform(rng, 0.2, 2.0);
    CAPTURE(s[0]);
    CAPTURE(s[1]);
    const auto l2 = PredicateDef::ball({0, 1}, std::vector<double>{c[0], c[1]}, r, Norm::L2);
    CHECK(std::abs(sd(l2, {s[0], s[1]}) - brute_l2_ball(s, c, r)) < 1e-6);
    const auto box = PredicateDef::ball({0, 1}, std::vector<double>{c[0], c[1]}, r, Norm::Linf);
    CHECK(std::abs(sd(box, {s[0], s[1]}) - brute_linf_box(s, c, r)) < 1e-6);
    CHECK(std::abs(sd(PredicateDef::complement(box), {s[0], s[1]}) + brute_linf_box(s, c, r)) < 1e-6);
    P2 a{testgen::uniform(rng, -2, 2), testgen::uniform(rng, -2, 2)};
    if (std::hypot(a[0], a[1]) < 0.1) a = {1.0, 0.0};
    const double b = testgen::uniform(rng, -1, 1);
    const auto h = PredicateDef::halfspace({a[0], a[1]}, b);
    CHECK(std::abs(sd(h, {s[0], s[1]}) - brute_halfspace(s, a, b)) < 1e-6);
  }
}

TEST_CASE("predicate table from JSON") {
  const auto doc = nlohmann::json::parse(R"({
    "p": {"kind": "halfspace", "a": [1], "b": 0},
    "inC": {"kind": "ball", "pos": [0, 1], "center": {"slice": [2, 3]}, "radius": 0.5, "norm": "linf"},
    "out": {"kind": "ball", "pos": [0], "center": [0], "radius": 1, "complement": true}
  })");
  const auto t = PredicateTable::from_json(doc);
  CHECK(t.size() == 3);
  CHECK(sd(t.at("p"), {2}) == 2.0);
  CHECK(sd(t.at("inC"), {0, 0, 0.1, 0}) == doctest::Approx(0.4));
  CHECK(sd(t.at("out"), {3}) == doctest::Approx(2.0));
  CHECK(code_of([&] { t.at("nope"); }) == ErrorCode::UnknownPredicate);

  for (const char* bad : {R"([])", R"({"p": 1})", R"({"p": {"kind": "cone"}})", R"({"p": {"kind": "halfspace", "a": [1]}})",
                          R"({"p": {"kind": "ball", "pos": [0], "center": [0], "radius": -1}})",
                          R"({"p": {"kind": "ball", "pos": [0], "center": [0], "radius": 1, "norm": "l1"}})",
                          R"({"p": {"kind": "ball", "pos": [-1], "center": [0], "radius": 1}})",
                          R"({"p": {"kind": "halfspace", "a": [1], "b": 0, "complement": "yes"}})",
                          R"({"true": {"kind": "halfspace", "a": [1], "b": 0}})"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { PredicateTable::from_json(nlohmann::json::parse(bad)); }) == ErrorCode::Format);
  }
}
