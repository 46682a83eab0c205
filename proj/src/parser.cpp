#include "stlrisk/parser.hpp"

#include <charconv>

#include "stlrisk/error.hpp"

namespace stlrisk {
namespace {

// Nesting beyond this is rejected so hostile input cannot exhaust the stack.
constexpr int kMaxNesting = 512;

enum class Tok {
  End,
  Ident,
  Integer,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Bang,
  Amp,
  Pipe,
  Minus,
};

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, {}, {start, start}};
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      return Token{k, src_.substr(start, 1), {start, pos_}};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '!': return single(Tok::Bang);
      case '&': return single(Tok::Amp);
      case '|': return single(Tok::Pipe);
      case '-': return single(Tok::Minus);
      default: break;
    }
    if (is_digit(c)) {
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      return {Tok::Integer, src_.substr(start, pos_ - start), {start, pos_}};
    }
    if (is_alpha(c)) {
      while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      return {Tok::Ident, src_.substr(start, pos_ - start), {start, pos_}};
    }
    throw ParseError(ErrorCode::Syntax, "unexpected character", {start, start + 1});
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

bool is_unary_temporal(std::string_view s) { return s == "G" || s == "F" || s == "H" || s == "O"; }
bool is_binary_temporal(std::string_view s) { return s == "U" || s == "S"; }

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  Formula parse_all() {
    Formula f = disjunction();
    if (cur_.kind != Tok::End) fail("unexpected trailing input");
    return f;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ErrorCode::Syntax, msg, cur_.span);
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth_ > kMaxNesting) p.fail("formula nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  // Each chained operator deepens the left spine of the tree, so it counts
  // against the nesting budget like a parenthesis does.
  Formula disjunction() {
    const int saved = depth_;
    Formula f = conjunction();
    while (cur_.kind == Tok::Pipe) {
      if (++depth_ > kMaxNesting) fail("formula nesting too deep");
      advance();
      f = Formula::disjunction(std::move(f), conjunction());
    }
    depth_ = saved;
    return f;
  }

  Formula conjunction() {
    const int saved = depth_;
    Formula f = until();
    while (cur_.kind == Tok::Amp) {
      if (++depth_ > kMaxNesting) fail("formula nesting too deep");
      advance();
      f = Formula::conjunction(std::move(f), until());
    }
    depth_ = saved;
    return f;
  }

  Formula until() {
    Formula lhs = unary();
    if (cur_.kind == Tok::Ident && is_binary_temporal(cur_.text)) {
      const bool past = cur_.text == "S";
      advance();
      const TimeInterval iv = interval();
      Formula rhs = unary();
      if (cur_.kind == Tok::Ident && is_binary_temporal(cur_.text)) {
        fail("until/since operators do not chain; add parentheses");
      }
      return past ? Formula::since(std::move(lhs), std::move(rhs), iv)
                  : Formula::until(std::move(lhs), std::move(rhs), iv);
    }
    return lhs;
  }

  Formula unary() {
    DepthGuard guard(*this);
    if (cur_.kind == Tok::Bang) {
      advance();
      return Formula::negation(unary());
    }
    if (cur_.kind == Tok::Ident && is_unary_temporal(cur_.text)) {
      const char op = cur_.text.front();
      advance();
      const TimeInterval iv = interval();
      Formula child = unary();
      switch (op) {
        case 'G': return Formula::always(std::move(child), iv);
        case 'F': return Formula::eventually(std::move(child), iv);
        case 'H': return Formula::historically(std::move(child), iv);
        default: return Formula::once(std::move(child), iv);
      }
    }
    return atom();
  }

  Formula atom() {
    if (cur_.kind == Tok::LParen) {
      advance();
      Formula f = disjunction();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (cur_.kind == Tok::Ident) {
      const std::string_view name = cur_.text;
      if (name == "true") {
        advance();
        return Formula::truth();
      }
      if (is_reserved_word(name)) fail("unexpected keyword '" + std::string(name) + "'");
      Formula f = Formula::predicate(std::string(name));
      advance();
      return f;
    }
    fail(cur_.kind == Tok::End ? "unexpected end of input" : "expected a formula");
  }

  std::uint64_t bound(bool allow_inf) {
    if (cur_.kind == Tok::Minus) {
      const SourceSpan at = cur_.span;
      advance();
      SourceSpan span = at;
      if (cur_.kind == Tok::Integer) span.end = cur_.span.end;
      throw ParseError(ErrorCode::Interval, "interval bounds must be non-negative", span);
    }
    if (allow_inf && cur_.kind == Tok::Ident && cur_.text == "inf") {
      advance();
      return kUnbounded;
    }
    if (cur_.kind != Tok::Integer) fail(allow_inf ? "expected integer or 'inf'" : "expected integer");
    std::uint64_t value = 0;
    const auto* first = cur_.text.data();
    const auto* last = first + cur_.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value == kUnbounded) {
      throw ParseError(ErrorCode::Interval, "interval bound out of range", cur_.span);
    }
    advance();
    return value;
  }

  TimeInterval interval() {
    const std::size_t start = cur_.span.start;
    expect(Tok::LBracket, "'[' after temporal operator");
    const std::uint64_t lo = bound(false);
    expect(Tok::Comma, "','");
    const std::uint64_t hi = bound(true);
    const std::size_t end = cur_.span.end;
    expect(Tok::RBracket, "']'");
    if (lo > hi) {
      throw ParseError(ErrorCode::Interval,
                       "interval lower bound " + std::to_string(lo) + " exceeds upper bound " +
                           (hi == kUnbounded ? std::string("inf") : std::to_string(hi)),
                       {start, end});
    }
    return {lo, hi};
  }

  Lexer lexer_;
  Token cur_;
  int depth_ = 0;
};

// Precedence levels, loosest first.
enum Level { kDisj = 0, kConj = 1, kUntil = 2, kUnary = 3 };

Level level_of(Op op) {
  switch (op) {
    case Op::Or: return kDisj;
    case Op::And: return kConj;
    case Op::Until:
    case Op::Since: return kUntil;
    default: return kUnary;
  }
}

void append_interval(std::string& out, const TimeInterval& iv) {
  out += '[';
  out += std::to_string(iv.lo());
  out += ',';
  out += iv.bounded() ? std::to_string(iv.hi()) : std::string("inf");
  out += ']';
}

void emit(const Formula& f, Level context, std::string& out);

// A unary operand emitted right after an interval; no separating space when
// it opens with a parenthesis.
void emit_operand(const Formula& f, std::string& out) {
  std::string sub;
  emit(f, kUnary, sub);
  if (sub.front() != '(') out += ' ';
  out += sub;
}

void emit(const Formula& f, Level context, std::string& out) {
  const bool parens = level_of(f.op()) < context;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::True:
      out += "true";
      break;
    case Op::Predicate:
      out += f.name();
      break;
    case Op::Not:
      out += '!';
      emit(f.child(), kUnary, out);
      break;
    case Op::And:
      emit(f.lhs(), kConj, out);
      out += " & ";
      emit(f.rhs(), kUntil, out);
      break;
    case Op::Or:
      emit(f.lhs(), kDisj, out);
      out += " | ";
      emit(f.rhs(), kConj, out);
      break;
    case Op::Until:
    case Op::Since:
      emit(f.lhs(), kUnary, out);
      out += f.op() == Op::Until ? " U" : " S";
      append_interval(out, f.interval());
      emit_operand(f.rhs(), out);
      break;
    case Op::Eventually:
    case Op::Always:
    case Op::Once:
    case Op::Historically: {
      static constexpr char kNames[] = {'F', 'G', 'O', 'H'};
      out += kNames[static_cast<int>(f.op()) - static_cast<int>(Op::Eventually)];
      append_interval(out, f.interval());
      emit_operand(f.child(), out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string format(const Formula& f) {
  std::string out;
  emit(f, kDisj, out);
  return out;
}

}  // namespace stlrisk
