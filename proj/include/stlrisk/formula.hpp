#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace stlrisk {

/// Sentinel for an unbounded interval end or an unbounded horizon.
inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// Closed integer time interval [lo, hi]; hi may be kUnbounded.
class TimeInterval {
 public:
  /// Throws Error(Interval) when lo > hi or lo is unbounded.
  TimeInterval(std::uint64_t lo, std::uint64_t hi);

  static TimeInterval unbounded_from(std::uint64_t lo) { return {lo, kUnbounded}; }

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  bool bounded() const { return hi_ != kUnbounded; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
};

enum class Op {
  True,
  Predicate,
  Not,
  And,
  Or,
  Until,         // future until  p U_I q
  Since,         // past until    p S_I q
  Eventually,    // F_I
  Always,        // G_I
  Once,          // past eventually  O_I
  Historically,  // past always      H_I
};

bool is_core(Op op);
bool is_temporal(Op op);
bool is_past(Op op);

/// Immutable STL syntax tree. Copies share structure.
class Formula {
 public:
  static Formula truth();
  /// Name must be an identifier that is not a reserved word of the grammar.
  static Formula predicate(std::string name);
  static Formula negation(Formula child);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula until(Formula lhs, Formula rhs, TimeInterval interval);
  static Formula since(Formula lhs, Formula rhs, TimeInterval interval);
  static Formula eventually(Formula child, TimeInterval interval);
  static Formula always(Formula child, TimeInterval interval);
  static Formula once(Formula child, TimeInterval interval);
  static Formula historically(Formula child, TimeInterval interval);

  Op op() const;
  /// Operand of a unary node, left operand of a binary node.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& child() const { return lhs(); }
  const TimeInterval& interval() const;
  const std::string& name() const;

  std::size_t size() const;
  std::size_t depth() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, Formula* lhs, Formula* rhs, TimeInterval interval, std::string name);

  std::shared_ptr<const Node> node_;
};

struct Horizon {
  std::uint64_t future_depth = 0;  ///< kUnbounded if unbounded
  std::uint64_t past_depth = 0;

  friend bool operator==(const Horizon&, const Horizon&) = default;
};

/// Rewrites derived operators into True, Predicate, Not, And, Until, Since.
Formula desugar(const Formula& f);

Horizon horizon(const Formula& f);

/// Names of all predicates referenced by f, sorted.
std::set<std::string> predicate_names(const Formula& f);

bool is_identifier(std::string_view s);
bool is_reserved_word(std::string_view s);

}  // namespace stlrisk
