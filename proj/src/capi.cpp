#include "stlrisk/stlrisk.h"

#include <cmath>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "stlrisk/error.hpp"
#include "stlrisk/numfmt.hpp"
#include "stlrisk/parser.hpp"
#include "stlrisk/predicate.hpp"
#include "stlrisk/risk.hpp"
#include "stlrisk/scenario.hpp"
#include "stlrisk/semantics.hpp"
#include "stlrisk/trace.hpp"

struct stlrisk_formula {
  stlrisk::Formula f;
};
struct stlrisk_predicates {
  stlrisk::PredicateTable table;
};
struct stlrisk_trace {
  stlrisk::Trace x;
};
struct stlrisk_ensemble {
  stlrisk::Ensemble e;
};
struct stlrisk_casestudy_config {
  stlrisk::CaseStudyConfig config;
};
struct stlrisk_casestudy_table {
  stlrisk::CaseStudyTable table;
};

namespace {

using stlrisk::ErrorCode;

struct LastError {
  std::string message;
  std::optional<stlrisk::SourceSpan> span;
};

thread_local LastError g_last;

stlrisk_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return STLRISK_E_SYNTAX;
    case ErrorCode::Interval: return STLRISK_E_INTERVAL;
    case ErrorCode::Format: return STLRISK_E_FORMAT;
    case ErrorCode::Gap: return STLRISK_E_GAP;
    case ErrorCode::Empty: return STLRISK_E_EMPTY;
    case ErrorCode::Mismatch: return STLRISK_E_MISMATCH;
    case ErrorCode::Dimension: return STLRISK_E_DIMENSION;
    case ErrorCode::UnknownPredicate: return STLRISK_E_UNKNOWN_PREDICATE;
    case ErrorCode::InsufficientHorizon: return STLRISK_E_INSUFFICIENT_HORIZON;
    case ErrorCode::Param: return STLRISK_E_PARAM;
    case ErrorCode::Bounds: return STLRISK_E_BOUNDS;
    case ErrorCode::Monotonicity: return STLRISK_E_MONOTONICITY;
    case ErrorCode::InfiniteRobustness: return STLRISK_E_INFINITE_ROBUSTNESS;
    case ErrorCode::Config: return STLRISK_E_CONFIG;
    case ErrorCode::Io: return STLRISK_E_IO;
    case ErrorCode::InvalidArgument: return STLRISK_E_INVALID_ARGUMENT;
  }
  return STLRISK_E_INTERNAL;
}

stlrisk_status fail(stlrisk_status s, std::string message) {
  g_last.message = std::move(message);
  g_last.span.reset();
  return s;
}

template <class Fn>
stlrisk_status guard(Fn&& fn) {
  try {
    fn();
    g_last = {};
    return STLRISK_OK;
  } catch (const stlrisk::ParseError& e) {
    g_last.message = e.what();
    g_last.span = e.span();
    return status_of(e.code());
  } catch (const stlrisk::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(STLRISK_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(STLRISK_E_INTERNAL, e.what());
  } catch (...) {
    return fail(STLRISK_E_INTERNAL, "unknown error");
  }
}

#define STLRISK_REQUIRE(cond)                                                  \
  do {                                                                         \
    if (!(cond)) return fail(STLRISK_E_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

stlrisk::RiskParams to_params(const stlrisk_risk_params& p) {
  stlrisk::RiskParams r;
  r.beta = p.beta;
  r.delta = p.delta;
  r.lambda = p.lambda;
  if (p.has_bounds) r.bounds = stlrisk::Bounds{p.bound_lo, p.bound_hi};
  return r;
}

stlrisk_measure to_c(stlrisk::Measure m) { return static_cast<stlrisk_measure>(static_cast<int>(m)); }

stlrisk::Measure from_c(stlrisk_measure m) {
  if (m < STLRISK_VAR || m > STLRISK_WORST) throw stlrisk::Error(ErrorCode::Param, "unknown risk measure");
  return static_cast<stlrisk::Measure>(static_cast<int>(m));
}

stlrisk_risk_result to_c(const stlrisk::RiskResult& r) {
  stlrisk_risk_result out{};
  out.measure = to_c(r.measure);
  out.value = r.value;
  out.has_lower = r.lower.has_value();
  out.lower = r.lower ? r.lower->value() : 0.0;
  out.has_upper = r.upper.has_value();
  out.upper = r.upper ? r.upper->value() : 0.0;
  out.beta = r.beta;
  out.delta = r.delta;
  out.n = r.n;
  out.epsilon = r.epsilon;
  return out;
}

stlrisk::RiskResult from_c(const stlrisk_risk_result& r) {
  stlrisk::RiskResult out{from_c(r.measure), r.value, std::nullopt, std::nullopt, r.beta, r.delta, r.n, r.epsilon};
  if (r.has_lower) out.lower = r.lower;
  if (r.has_upper) out.upper = r.upper;
  return out;
}

}  // namespace

extern "C" {

const char* stlrisk_last_error(void) { return g_last.message.c_str(); }

int stlrisk_last_error_span(size_t* start, size_t* end) {
  if (!g_last.span) return 0;
  if (start) *start = g_last.span->start;
  if (end) *end = g_last.span->end;
  return 1;
}

const char* stlrisk_status_name(stlrisk_status status) {
  switch (status) {
    case STLRISK_OK: return "Ok";
    case STLRISK_E_INTERNAL: return "InternalError";
    default: break;
  }
  if (status > STLRISK_OK && status < STLRISK_E_INTERNAL) {
    return stlrisk::to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  }
  return "UnknownStatus";
}

const char* stlrisk_version(void) { return STLRISK_VERSION; }

void stlrisk_string_free(char* s) { delete[] s; }

stlrisk_status stlrisk_format_real(double v, char** out) {
  STLRISK_REQUIRE(out);
  return guard([&] { *out = dup_string(stlrisk::format_real(v)); });
}

stlrisk_status stlrisk_formula_parse(const char* text, stlrisk_formula** out) {
  STLRISK_REQUIRE(text && out);
  return guard([&] { *out = new stlrisk_formula{stlrisk::parse(text)}; });
}

void stlrisk_formula_free(stlrisk_formula* f) { delete f; }

stlrisk_status stlrisk_formula_format(const stlrisk_formula* f, char** out) {
  STLRISK_REQUIRE(f && out);
  return guard([&] { *out = dup_string(stlrisk::format(f->f)); });
}

stlrisk_status stlrisk_formula_horizon(const stlrisk_formula* f, uint64_t* future_depth, uint64_t* past_depth) {
  STLRISK_REQUIRE(f);
  return guard([&] {
    const auto h = stlrisk::horizon(f->f);
    if (future_depth) *future_depth = h.future_depth;
    if (past_depth) *past_depth = h.past_depth;
  });
}

stlrisk_status stlrisk_formula_predicate_names(const stlrisk_formula* f, char** out) {
  STLRISK_REQUIRE(f && out);
  return guard([&] {
    std::string joined;
    for (const auto& name : stlrisk::predicate_names(f->f)) {
      if (!joined.empty()) joined += '\n';
      joined += name;
    }
    *out = dup_string(joined);
  });
}

stlrisk_status stlrisk_predicates_load(const char* path, stlrisk_predicates** out) {
  STLRISK_REQUIRE(path && out);
  return guard([&] { *out = new stlrisk_predicates{stlrisk::PredicateTable::load_json(path)}; });
}

stlrisk_status stlrisk_predicates_parse(const char* json_text, stlrisk_predicates** out) {
  STLRISK_REQUIRE(json_text && out);
  return guard([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw stlrisk::Error(ErrorCode::Format, std::string("invalid JSON: ") + e.what());
    }
    *out = new stlrisk_predicates{stlrisk::PredicateTable::from_json(doc)};
  });
}

void stlrisk_predicates_free(stlrisk_predicates* p) { delete p; }

stlrisk_status stlrisk_trace_create(size_t dim, size_t length, const double* values, stlrisk_trace** out) {
  STLRISK_REQUIRE(out && (values || dim * length == 0));
  return guard([&] {
    if (dim == 0) throw stlrisk::Error(ErrorCode::Format, "trace dimension must be positive");
    std::vector<double> v(values, values + dim * length);
    *out = new stlrisk_trace{stlrisk::Trace(dim, std::move(v))};
  });
}

stlrisk_status stlrisk_trace_load(const char* path, stlrisk_trace** out) {
  STLRISK_REQUIRE(path && out);
  return guard([&] { *out = new stlrisk_trace{stlrisk::load_trace_csv(path)}; });
}

void stlrisk_trace_free(stlrisk_trace* x) { delete x; }
size_t stlrisk_trace_length(const stlrisk_trace* x) { return x ? x->x.length() : 0; }
size_t stlrisk_trace_dim(const stlrisk_trace* x) { return x ? x->x.dim() : 0; }

stlrisk_status stlrisk_ensemble_load(const char* path, stlrisk_ensemble** out) {
  STLRISK_REQUIRE(path && out);
  return guard([&] { *out = new stlrisk_ensemble{stlrisk::load_ensemble(path)}; });
}

void stlrisk_ensemble_free(stlrisk_ensemble* e) { delete e; }
size_t stlrisk_ensemble_size(const stlrisk_ensemble* e) { return e ? e->e.size() : 0; }
size_t stlrisk_ensemble_length(const stlrisk_ensemble* e) { return e ? e->e.length() : 0; }

stlrisk_status stlrisk_ensemble_files(const stlrisk_ensemble* e, char** out) {
  STLRISK_REQUIRE(e && out);
  return guard([&] {
    std::string joined;
    for (const auto& f : e->e.metadata().files) {
      if (!joined.empty()) joined += '\n';
      joined += f;
    }
    *out = dup_string(joined);
  });
}

int stlrisk_ensemble_seed(const stlrisk_ensemble* e, uint64_t* seed) {
  if (!e || !e->e.metadata().seed) return 0;
  if (seed) *seed = *e->e.metadata().seed;
  return 1;
}

stlrisk_status stlrisk_eval_boolean(const stlrisk_formula* f, const stlrisk_predicates* p, const stlrisk_trace* x,
                                    size_t t, int* out) {
  STLRISK_REQUIRE(f && p && x && out);
  return guard([&] { *out = stlrisk::eval_boolean(f->f, p->table, x->x, t) ? 1 : 0; });
}

stlrisk_status stlrisk_eval_robust(const stlrisk_formula* f, const stlrisk_predicates* p, const stlrisk_trace* x,
                                   size_t t, double* out) {
  STLRISK_REQUIRE(f && p && x && out);
  return guard([&] { *out = stlrisk::eval_robust(f->f, p->table, x->x, t).value(); });
}

stlrisk_risk_params stlrisk_risk_params_default(void) {
  const stlrisk::RiskParams d;
  return {d.beta, d.delta, d.lambda, 0, 0.0, 0.0};
}

stlrisk_status stlrisk_measure_parse(const char* name, stlrisk_measure* out) {
  STLRISK_REQUIRE(name && out);
  return guard([&] { *out = to_c(stlrisk::parse_measure(name)); });
}

stlrisk_status stlrisk_risk_estimate(const double* z, size_t n, stlrisk_measure measure,
                                     const stlrisk_risk_params* params, stlrisk_risk_result* out) {
  STLRISK_REQUIRE((z || n == 0) && params && out);
  return guard([&] {
    const stlrisk::RobustnessSamples samples(std::vector<double>(z, z + n));
    *out = to_c(stlrisk::estimate(samples, from_c(measure), to_params(*params)));
  });
}

stlrisk_status stlrisk_risk_of_formula(const stlrisk_ensemble* e, const stlrisk_formula* f,
                                       const stlrisk_predicates* p, size_t t, stlrisk_measure measure,
                                       const stlrisk_risk_params* params, unsigned threads,
                                       stlrisk_risk_result* out) {
  STLRISK_REQUIRE(e && f && p && params && out);
  return guard([&] {
    *out = to_c(stlrisk::risk_of_formula(e->e, f->f, p->table, t, to_params(*params), from_c(measure), threads));
  });
}

stlrisk_status stlrisk_risk_result_json(const stlrisk_risk_result* r, char** out) {
  STLRISK_REQUIRE(r && out);
  return guard([&] { *out = dup_string(stlrisk::to_json(from_c(*r))); });
}

stlrisk_status stlrisk_casestudy_config_default(stlrisk_casestudy_config** out) {
  STLRISK_REQUIRE(out);
  return guard([&] { *out = new stlrisk_casestudy_config{}; });
}

stlrisk_status stlrisk_casestudy_config_load(const char* path, stlrisk_casestudy_config** out) {
  STLRISK_REQUIRE(path && out);
  return guard([&] { *out = new stlrisk_casestudy_config{stlrisk::load_case_study_config(path)}; });
}

void stlrisk_casestudy_config_free(stlrisk_casestudy_config* c) { delete c; }

stlrisk_status stlrisk_casestudy_config_set_seed(stlrisk_casestudy_config* c, uint64_t seed) {
  STLRISK_REQUIRE(c);
  c->config.seed = seed;
  return guard([] {});
}

stlrisk_status stlrisk_casestudy_config_set_n(stlrisk_casestudy_config* c, size_t n) {
  STLRISK_REQUIRE(c);
  if (n == 0) return fail(STLRISK_E_CONFIG, "n must be at least 1");
  c->config.n = n;
  return guard([] {});
}

stlrisk_status stlrisk_casestudy_config_set_threads(stlrisk_casestudy_config* c, unsigned threads) {
  STLRISK_REQUIRE(c);
  c->config.threads = threads;
  return guard([] {});
}

stlrisk_status stlrisk_casestudy_config_json(const stlrisk_casestudy_config* c, char** out) {
  STLRISK_REQUIRE(c && out);
  return guard([&] { *out = dup_string(stlrisk::to_json(c->config).dump()); });
}

stlrisk_status stlrisk_casestudy_run(const stlrisk_casestudy_config* c, stlrisk_casestudy_table** out) {
  STLRISK_REQUIRE(c && out);
  return guard([&] { *out = new stlrisk_casestudy_table{stlrisk::run_case_study(c->config)}; });
}

void stlrisk_casestudy_table_free(stlrisk_casestudy_table* t) { delete t; }

size_t stlrisk_casestudy_table_rows(const stlrisk_casestudy_table* t) { return t ? t->table.rows.size() : 0; }

stlrisk_status stlrisk_casestudy_table_row(const stlrisk_casestudy_table* t, size_t i, stlrisk_casestudy_row* out) {
  STLRISK_REQUIRE(t && out);
  if (i >= t->table.rows.size()) return fail(STLRISK_E_INVALID_ARGUMENT, "row index out of range");
  const auto& r = t->table.rows[i];
  *out = {r.trajectory, r.beta, r.var_lower.value(), r.var_point, r.var_upper.value()};
  return guard([] {});
}

stlrisk_status stlrisk_casestudy_table_csv(const stlrisk_casestudy_table* t, char** out) {
  STLRISK_REQUIRE(t && out);
  return guard([&] { *out = dup_string(stlrisk::table_csv(t->table)); });
}

stlrisk_status stlrisk_casestudy_table_json(const stlrisk_casestudy_table* t, const stlrisk_casestudy_config* c,
                                            char** out) {
  STLRISK_REQUIRE(t && c && out);
  return guard([&] { *out = dup_string(stlrisk::table_json(t->table, c->config)); });
}

}  // extern "C"
