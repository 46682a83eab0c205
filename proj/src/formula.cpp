#include "stlrisk/formula.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "stlrisk/error.hpp"

namespace stlrisk {

TimeInterval::TimeInterval(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {
  if (lo == kUnbounded) throw Error(ErrorCode::Interval, "interval lower bound must be finite");
  if (lo > hi) {
    throw Error(ErrorCode::Interval, "interval lower bound " + std::to_string(lo) +
                                         " exceeds upper bound " + std::to_string(hi));
  }
}

struct Formula::Node {
  Op op;
  std::vector<Formula> operands;
  TimeInterval interval{0, 0};
  std::string name;
};

bool is_core(Op op) {
  switch (op) {
    case Op::True:
    case Op::Predicate:
    case Op::Not:
    case Op::And:
    case Op::Until:
    case Op::Since:
      return true;
    default:
      return false;
  }
}

bool is_temporal(Op op) {
  switch (op) {
    case Op::Until:
    case Op::Since:
    case Op::Eventually:
    case Op::Always:
    case Op::Once:
    case Op::Historically:
      return true;
    default:
      return false;
  }
}

bool is_past(Op op) { return op == Op::Since || op == Op::Once || op == Op::Historically; }

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

bool is_reserved_word(std::string_view s) {
  static constexpr std::array<std::string_view, 8> kReserved{"true", "inf", "U", "S",
                                                             "G",    "F",   "H", "O"};
  return std::find(kReserved.begin(), kReserved.end(), s) != kReserved.end();
}

Formula Formula::make(Op op, Formula* lhs, Formula* rhs, TimeInterval interval, std::string name) {
  auto node = std::make_shared<Node>();
  node->op = op;
  if (lhs) node->operands.push_back(std::move(*lhs));
  if (rhs) node->operands.push_back(std::move(*rhs));
  node->interval = interval;
  node->name = std::move(name);
  return Formula(std::move(node));
}

Formula Formula::truth() { return make(Op::True, nullptr, nullptr, {0, 0}, {}); }

Formula Formula::predicate(std::string name) {
  if (!is_identifier(name) || is_reserved_word(name)) {
    throw Error(ErrorCode::InvalidArgument, "invalid predicate name '" + name + "'");
  }
  return make(Op::Predicate, nullptr, nullptr, {0, 0}, std::move(name));
}

Formula Formula::negation(Formula child) { return make(Op::Not, &child, nullptr, {0, 0}, {}); }

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make(Op::And, &lhs, &rhs, {0, 0}, {});
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return make(Op::Or, &lhs, &rhs, {0, 0}, {});
}

Formula Formula::until(Formula lhs, Formula rhs, TimeInterval interval) {
  return make(Op::Until, &lhs, &rhs, interval, {});
}

Formula Formula::since(Formula lhs, Formula rhs, TimeInterval interval) {
  return make(Op::Since, &lhs, &rhs, interval, {});
}

Formula Formula::eventually(Formula child, TimeInterval interval) {
  return make(Op::Eventually, &child, nullptr, interval, {});
}

Formula Formula::always(Formula child, TimeInterval interval) {
  return make(Op::Always, &child, nullptr, interval, {});
}

Formula Formula::once(Formula child, TimeInterval interval) {
  return make(Op::Once, &child, nullptr, interval, {});
}

Formula Formula::historically(Formula child, TimeInterval interval) {
  return make(Op::Historically, &child, nullptr, interval, {});
}

Op Formula::op() const { return node_->op; }

const Formula& Formula::lhs() const {
  if (node_->operands.empty()) throw Error(ErrorCode::InvalidArgument, "formula node has no operand");
  return node_->operands[0];
}

const Formula& Formula::rhs() const {
  if (node_->operands.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "formula node has no right operand");
  }
  return node_->operands[1];
}

const TimeInterval& Formula::interval() const {
  if (!is_temporal(node_->op)) throw Error(ErrorCode::InvalidArgument, "formula node has no interval");
  return node_->interval;
}

const std::string& Formula::name() const {
  if (node_->op != Op::Predicate) throw Error(ErrorCode::InvalidArgument, "formula node is not a predicate");
  return node_->name;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->operands) n += c.size();
  return n;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->operands) d = std::max(d, c.depth() + 1);
  return d;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  if (x.op == Op::Predicate) return x.name == y.name;
  if (is_temporal(x.op) && !(x.interval == y.interval)) return false;
  return x.operands == y.operands;
}

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Predicate:
      return f;
    case Op::Not:
      return Formula::negation(desugar(f.child()));
    case Op::And:
      return Formula::conjunction(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Or:
      return Formula::negation(Formula::conjunction(Formula::negation(desugar(f.lhs())),
                                                    Formula::negation(desugar(f.rhs()))));
    case Op::Until:
      return Formula::until(desugar(f.lhs()), desugar(f.rhs()), f.interval());
    case Op::Since:
      return Formula::since(desugar(f.lhs()), desugar(f.rhs()), f.interval());
    case Op::Eventually:
      return Formula::until(Formula::truth(), desugar(f.child()), f.interval());
    case Op::Always:
      return Formula::negation(
          Formula::until(Formula::truth(), Formula::negation(desugar(f.child())), f.interval()));
    case Op::Once:
      return Formula::since(Formula::truth(), desugar(f.child()), f.interval());
    case Op::Historically:
      return Formula::negation(
          Formula::since(Formula::truth(), Formula::negation(desugar(f.child())), f.interval()));
  }
  return f;
}

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  if (a == kUnbounded || b == kUnbounded || a > kUnbounded - b) return kUnbounded;
  return a + b;
}

}  // namespace

Horizon horizon(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Predicate:
      return {};
    case Op::Not:
      return horizon(f.child());
    default:
      break;
  }
  Horizon h = horizon(f.lhs());
  if (f.op() == Op::And || f.op() == Op::Or || f.op() == Op::Until || f.op() == Op::Since) {
    const Horizon r = horizon(f.rhs());
    h.future_depth = std::max(h.future_depth, r.future_depth);
    h.past_depth = std::max(h.past_depth, r.past_depth);
  }
  if (is_temporal(f.op())) {
    if (is_past(f.op())) {
      h.past_depth = saturating_add(h.past_depth, f.interval().hi());
    } else {
      h.future_depth = saturating_add(h.future_depth, f.interval().hi());
    }
  }
  return h;
}

namespace {

void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::True:
      return;
    case Op::Predicate:
      out.insert(f.name());
      return;
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Since:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
      return;
    default:
      collect_names(f.child(), out);
  }
}

}  // namespace

std::set<std::string> predicate_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

}  // namespace stlrisk
