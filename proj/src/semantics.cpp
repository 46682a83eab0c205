#include "stlrisk/semantics.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "stlrisk/error.hpp"

namespace stlrisk {

namespace {

template <class V>
struct Lattice;

template <>
struct Lattice<bool> {
  static bool top() { return true; }
  static bool bottom() { return false; }
  static bool neg(bool v) { return !v; }
  static bool meet(bool a, bool b) { return a && b; }
  static bool join(bool a, bool b) { return a || b; }
  static bool from_distance(double d) { return d >= 0.0; }
};

template <>
struct Lattice<double> {
  static double top() { return std::numeric_limits<double>::infinity(); }
  static double bottom() { return -std::numeric_limits<double>::infinity(); }
  static double neg(double v) { return -v; }
  static double meet(double a, double b) { return std::min(a, b); }
  static double join(double a, double b) { return std::max(a, b); }
  static double from_distance(double d) { return d; }
};

/// Values of one subformula over the time range [first, first + size).
template <class V>
struct Series {
  std::size_t first = 0;
  std::vector<V> values;

  V at(std::size_t t) const { return values[t - first]; }
};

std::size_t sat_add(std::size_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::size_t>::max() - a ? std::numeric_limits<std::size_t>::max()
                                                          : a + static_cast<std::size_t>(b);
}

std::size_t sat_sub(std::size_t a, std::uint64_t b) { return b >= a ? 0 : a - static_cast<std::size_t>(b); }

/// Bottom-up evaluation: each node is computed once for the contiguous time
/// range its parent needs, so total work is O(|f| * L * W).
template <class V>
class Evaluator {
  using L = Lattice<V>;

 public:
  Evaluator(const PredicateTable& predicates, const Trace& x) : predicates_(predicates), x_(x) {}

  Series<V> eval(const Formula& f, std::size_t a, std::size_t b) const {
    const std::size_t last = x_.length() - 1;
    b = std::min(b, last);
    Series<V> out;
    out.first = a;
    out.values.resize(b - a + 1);
    switch (f.op()) {
      case Op::True:
        std::fill(out.values.begin(), out.values.end(), L::top());
        break;
      case Op::Predicate: {
        const PredicateDef& p = predicates_.at(f.name());
        for (std::size_t t = a; t <= b; ++t) out.values[t - a] = L::from_distance(p.signed_distance(x_.state(t)));
        break;
      }
      case Op::Not: {
        const auto c = eval(f.child(), a, b);
        for (std::size_t t = a; t <= b; ++t) out.values[t - a] = L::neg(c.at(t));
        break;
      }
      case Op::And:
      case Op::Or: {
        const auto l = eval(f.lhs(), a, b);
        const auto r = eval(f.rhs(), a, b);
        for (std::size_t t = a; t <= b; ++t) {
          out.values[t - a] = f.op() == Op::And ? L::meet(l.at(t), r.at(t)) : L::join(l.at(t), r.at(t));
        }
        break;
      }
      case Op::Until: {
        const auto& iv = f.interval();
        const std::size_t hi_t = std::min(sat_add(b, iv.hi()), last);
        const auto l = eval(f.lhs(), a, hi_t);
        const auto r = eval(f.rhs(), a, hi_t);
        for (std::size_t t = a; t <= b; ++t) {
          const std::size_t from = sat_add(t, iv.lo());
          const std::size_t to = std::min(sat_add(t, iv.hi()), last);
          V acc = L::bottom();
          V inner = L::top();  // inf of lhs over the open window (t, u)
          for (std::size_t u = t; u <= to; ++u) {
            if (u >= t + 2) inner = L::meet(inner, l.at(u - 1));
            if (u >= from) acc = L::join(acc, L::meet(r.at(u), inner));
          }
          out.values[t - a] = acc;
        }
        break;
      }
      case Op::Since: {
        const auto& iv = f.interval();
        const std::size_t lo_t = sat_sub(a, iv.hi());
        const auto l = eval(f.lhs(), lo_t, b);
        const auto r = eval(f.rhs(), lo_t, b);
        for (std::size_t t = a; t <= b; ++t) {
          const std::size_t to = sat_sub(t, iv.hi());
          V acc = L::bottom();
          V inner = L::top();  // inf of lhs over the open window (u, t)
          for (std::size_t u = t + 1; u-- > to;) {
            if (u + 2 <= t) inner = L::meet(inner, l.at(u + 1));
            if (t - u >= iv.lo()) acc = L::join(acc, L::meet(r.at(u), inner));
          }
          out.values[t - a] = acc;
        }
        break;
      }
      case Op::Eventually:
      case Op::Always: {
        const auto& iv = f.interval();
        const auto c = eval(f.child(), std::min(sat_add(a, iv.lo()), last), std::min(sat_add(b, iv.hi()), last));
        const bool always = f.op() == Op::Always;
        for (std::size_t t = a; t <= b; ++t) {
          const std::size_t to = std::min(sat_add(t, iv.hi()), last);
          V acc = always ? L::top() : L::bottom();
          for (std::size_t u = sat_add(t, iv.lo()); u <= to; ++u) {
            acc = always ? L::meet(acc, c.at(u)) : L::join(acc, c.at(u));
          }
          out.values[t - a] = acc;
        }
        break;
      }
      case Op::Once:
      case Op::Historically: {
        const auto& iv = f.interval();
        const std::size_t lo_t = sat_sub(a, iv.hi());
        const auto c = eval(f.child(), lo_t, b);
        const bool always = f.op() == Op::Historically;
        for (std::size_t t = a; t <= b; ++t) {
          V acc = always ? L::top() : L::bottom();
          if (t >= iv.lo()) {
            const std::size_t from = sat_sub(t, iv.hi());
            const std::size_t to = t - static_cast<std::size_t>(iv.lo());
            for (std::size_t u = from; u <= to; ++u) {
              acc = always ? L::meet(acc, c.at(u)) : L::join(acc, c.at(u));
            }
          }
          out.values[t - a] = acc;
        }
        break;
      }
    }
    return out;
  }

 private:
  const PredicateTable& predicates_;
  const Trace& x_;
};

template <class V>
V evaluate(const Formula& f, const PredicateTable& predicates, const Trace& x, std::size_t t) {
  check_admissible(f, predicates, x.length(), x.dim(), t);
  return Evaluator<V>(predicates, x).eval(f, t, t).at(t);
}

std::string describe_horizon(std::uint64_t v) { return v == kUnbounded ? "inf" : std::to_string(v); }

}  // namespace

void check_admissible(const Formula& f, const PredicateTable& predicates, std::size_t length, std::size_t dim,
                      std::size_t t) {
  for (const auto& name : predicate_names(f)) predicates.at(name).check_dimension(dim);
  if (t >= length) {
    throw Error(ErrorCode::InsufficientHorizon,
                "time " + std::to_string(t) + " is outside the trace of length " + std::to_string(length));
  }
  const Horizon h = horizon(f);
  if (h.future_depth == kUnbounded || h.future_depth > length - 1 - t) {
    throw Error(ErrorCode::InsufficientHorizon, "formula looks " + describe_horizon(h.future_depth) +
                                                    " steps ahead of t=" + std::to_string(t) +
                                                    " but the trace ends at " + std::to_string(length - 1));
  }
  if (h.past_depth == kUnbounded || h.past_depth > t) {
    throw Error(ErrorCode::InsufficientHorizon, "formula looks " + describe_horizon(h.past_depth) +
                                                    " steps back from t=" + std::to_string(t));
  }
}

bool eval_boolean(const Formula& f, const PredicateTable& predicates, const Trace& x, std::size_t t) {
  return evaluate<bool>(f, predicates, x, t);
}

ExtReal eval_robust(const Formula& f, const PredicateTable& predicates, const Trace& x, std::size_t t) {
  return evaluate<double>(f, predicates, x, t);
}

RobustnessSamples eval_robust_ensemble(const Formula& f, const PredicateTable& predicates, const Ensemble& e,
                                       std::size_t t, unsigned threads) {
  check_admissible(f, predicates, e.length(), e.dim(), t);
  const std::size_t n = e.size();
  std::vector<double> z(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        z[i] = -Evaluator<double>(predicates, e[i]).eval(f, t, t).at(t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return RobustnessSamples(std::move(z));
}

}  // namespace stlrisk
