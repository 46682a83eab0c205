/* stlrisk C API: STL parsing, robust monitoring and sample-based risk. */
#ifndef STLRISK_STLRISK_H
#define STLRISK_STLRISK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(STLRISK_BUILDING)
#define STLRISK_API __declspec(dllexport)
#else
#define STLRISK_API __declspec(dllimport)
#endif
#else
#define STLRISK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define STLRISK_VERSION "0.1.0"

typedef enum stlrisk_status {
  STLRISK_OK = 0,
  STLRISK_E_SYNTAX,
  STLRISK_E_INTERVAL,
  STLRISK_E_FORMAT,
  STLRISK_E_GAP,
  STLRISK_E_EMPTY,
  STLRISK_E_MISMATCH,
  STLRISK_E_DIMENSION,
  STLRISK_E_UNKNOWN_PREDICATE,
  STLRISK_E_INSUFFICIENT_HORIZON,
  STLRISK_E_PARAM,
  STLRISK_E_BOUNDS,
  STLRISK_E_MONOTONICITY,
  STLRISK_E_INFINITE_ROBUSTNESS,
  STLRISK_E_CONFIG,
  STLRISK_E_IO,
  STLRISK_E_INVALID_ARGUMENT,
  STLRISK_E_INTERNAL
} stlrisk_status;

typedef enum stlrisk_measure {
  STLRISK_VAR = 0,
  STLRISK_CVAR,
  STLRISK_EXPECTED,
  STLRISK_MEANVAR,
  STLRISK_WORST
} stlrisk_measure;

typedef struct stlrisk_formula stlrisk_formula;
typedef struct stlrisk_predicates stlrisk_predicates;
typedef struct stlrisk_trace stlrisk_trace;
typedef struct stlrisk_ensemble stlrisk_ensemble;
typedef struct stlrisk_casestudy_config stlrisk_casestudy_config;
typedef struct stlrisk_casestudy_table stlrisk_casestudy_table;

typedef struct stlrisk_risk_params {
  double beta;
  double delta;
  double lambda;
  int has_bounds;
  double bound_lo;
  double bound_hi;
} stlrisk_risk_params;

/* Infinite bounds are reported as +-HUGE_VAL. */
typedef struct stlrisk_risk_result {
  stlrisk_measure measure;
  double value;
  int has_lower;
  double lower;
  int has_upper;
  double upper;
  double beta;
  double delta;
  size_t n;
  double epsilon;
} stlrisk_risk_result;

typedef struct stlrisk_casestudy_row {
  size_t trajectory;
  double beta;
  double var_lower;
  double var_point;
  double var_upper;
} stlrisk_casestudy_row;

/* Errors. The message and span refer to the last failed call on this thread. */
STLRISK_API const char* stlrisk_last_error(void);
/* Returns 1 and fills [start, end) byte offsets when the last error was a
 * parse error. */
STLRISK_API int stlrisk_last_error_span(size_t* start, size_t* end);
STLRISK_API const char* stlrisk_status_name(stlrisk_status status);
STLRISK_API const char* stlrisk_version(void);
/* Frees strings returned through char** out-parameters. */
STLRISK_API void stlrisk_string_free(char* s);
/* 12 significant digits; "inf" / "-inf" for infinities. */
STLRISK_API stlrisk_status stlrisk_format_real(double v, char** out);

/* Formulas. */
STLRISK_API stlrisk_status stlrisk_formula_parse(const char* text, stlrisk_formula** out);
STLRISK_API void stlrisk_formula_free(stlrisk_formula* f);
STLRISK_API stlrisk_status stlrisk_formula_format(const stlrisk_formula* f, char** out);
/* UINT64_MAX for an unbounded horizon. */
STLRISK_API stlrisk_status stlrisk_formula_horizon(const stlrisk_formula* f, uint64_t* future_depth,
                                                   uint64_t* past_depth);
/* Sorted names separated by '\n'. */
STLRISK_API stlrisk_status stlrisk_formula_predicate_names(const stlrisk_formula* f, char** out);

/* Predicate tables. */
STLRISK_API stlrisk_status stlrisk_predicates_load(const char* path, stlrisk_predicates** out);
STLRISK_API stlrisk_status stlrisk_predicates_parse(const char* json_text, stlrisk_predicates** out);
STLRISK_API void stlrisk_predicates_free(stlrisk_predicates* p);

/* Traces: `values` holds `length` rows of `dim` components. */
STLRISK_API stlrisk_status stlrisk_trace_create(size_t dim, size_t length, const double* values,
                                                stlrisk_trace** out);
STLRISK_API stlrisk_status stlrisk_trace_load(const char* path, stlrisk_trace** out);
STLRISK_API void stlrisk_trace_free(stlrisk_trace* x);
STLRISK_API size_t stlrisk_trace_length(const stlrisk_trace* x);
STLRISK_API size_t stlrisk_trace_dim(const stlrisk_trace* x);

/* Ensembles: a directory of CSV files or a JSON manifest. */
STLRISK_API stlrisk_status stlrisk_ensemble_load(const char* path, stlrisk_ensemble** out);
STLRISK_API void stlrisk_ensemble_free(stlrisk_ensemble* e);
STLRISK_API size_t stlrisk_ensemble_size(const stlrisk_ensemble* e);
STLRISK_API size_t stlrisk_ensemble_length(const stlrisk_ensemble* e);
/* Trace files the ensemble was read from, in ensemble order, separated by '\n'. */
STLRISK_API stlrisk_status stlrisk_ensemble_files(const stlrisk_ensemble* e, char** out);
/* Returns 1 and writes the seed when the manifest recorded one. */
STLRISK_API int stlrisk_ensemble_seed(const stlrisk_ensemble* e, uint64_t* seed);

/* Semantics. */
STLRISK_API stlrisk_status stlrisk_eval_boolean(const stlrisk_formula* f, const stlrisk_predicates* p,
                                                const stlrisk_trace* x, size_t t, int* out);
/* +-HUGE_VAL for infinite robustness. */
STLRISK_API stlrisk_status stlrisk_eval_robust(const stlrisk_formula* f, const stlrisk_predicates* p,
                                               const stlrisk_trace* x, size_t t, double* out);

/* Risk. */
STLRISK_API stlrisk_risk_params stlrisk_risk_params_default(void);
STLRISK_API stlrisk_status stlrisk_measure_parse(const char* name, stlrisk_measure* out);
STLRISK_API stlrisk_status stlrisk_risk_estimate(const double* z, size_t n, stlrisk_measure measure,
                                                 const stlrisk_risk_params* params, stlrisk_risk_result* out);
/* threads = 0 uses the hardware concurrency. */
STLRISK_API stlrisk_status stlrisk_risk_of_formula(const stlrisk_ensemble* e, const stlrisk_formula* f,
                                                   const stlrisk_predicates* p, size_t t, stlrisk_measure measure,
                                                   const stlrisk_risk_params* params, unsigned threads,
                                                   stlrisk_risk_result* out);
STLRISK_API stlrisk_status stlrisk_risk_result_json(const stlrisk_risk_result* r, char** out);

/* Case study. */
STLRISK_API stlrisk_status stlrisk_casestudy_config_default(stlrisk_casestudy_config** out);
STLRISK_API stlrisk_status stlrisk_casestudy_config_load(const char* path, stlrisk_casestudy_config** out);
STLRISK_API void stlrisk_casestudy_config_free(stlrisk_casestudy_config* c);
STLRISK_API stlrisk_status stlrisk_casestudy_config_set_seed(stlrisk_casestudy_config* c, uint64_t seed);
STLRISK_API stlrisk_status stlrisk_casestudy_config_set_n(stlrisk_casestudy_config* c, size_t n);
STLRISK_API stlrisk_status stlrisk_casestudy_config_set_threads(stlrisk_casestudy_config* c, unsigned threads);
STLRISK_API stlrisk_status stlrisk_casestudy_config_json(const stlrisk_casestudy_config* c, char** out);
STLRISK_API stlrisk_status stlrisk_casestudy_run(const stlrisk_casestudy_config* c, stlrisk_casestudy_table** out);
STLRISK_API void stlrisk_casestudy_table_free(stlrisk_casestudy_table* t);
STLRISK_API size_t stlrisk_casestudy_table_rows(const stlrisk_casestudy_table* t);
STLRISK_API stlrisk_status stlrisk_casestudy_table_row(const stlrisk_casestudy_table* t, size_t i,
                                                       stlrisk_casestudy_row* out);
STLRISK_API stlrisk_status stlrisk_casestudy_table_csv(const stlrisk_casestudy_table* t, char** out);
STLRISK_API stlrisk_status stlrisk_casestudy_table_json(const stlrisk_casestudy_table* t,
                                                        const stlrisk_casestudy_config* c, char** out);

#ifdef __cplusplus
}
#endif

#endif /* STLRISK_STLRISK_H */
