/* SPDX-License-Identifier: Apache-2.0
 *
 * actwarp - numerical verification engine for almost-contact metric
 * structures, immersed submanifolds and warped products defined by
 * closed-form coordinate expressions.
 *
 * All functions are thread-safe as long as each handle is used from one
 * thread at a time. Functions returning actw_status set a thread-local
 * message retrievable through actw_last_error() on failure. Strings
 * returned as const char* are owned by the handle they came from and stay
 * valid until it is freed.
 */
#ifndef ACTWARP_H
#define ACTWARP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum actw_status {
  ACTW_OK = 0,
  ACTW_ERR_DOMAIN = 1,           /* evaluation left the expression domain */
  ACTW_ERR_PARSE = 2,            /* expression or config text is malformed */
  ACTW_ERR_VALIDATION = 3,       /* config or argument fails validation */
  ACTW_ERR_SINGULAR = 4,         /* metric singular or ill-conditioned */
  ACTW_ERR_NUMERIC = 5,          /* frame, rank, fit or split failure */
  ACTW_ERR_PRECONDITION = 6,     /* scenario does not meet a check's gate */
  ACTW_ERR_IO = 7,               /* file access */
  ACTW_ERR_UNKNOWN_MODEL = 8,    /* unknown builtin model name */
  ACTW_ERR_INVALID_ARGUMENT = 9, /* bad pointer/size/enum from the caller */
  ACTW_ERR_INTERNAL = 10
} actw_status;

typedef struct actw_expr actw_expr;     /* immutable scalar expression */
typedef struct actw_config actw_config; /* parsed scenario configuration */
typedef struct actw_run actw_run;       /* finished run with its reports */

const char* actw_version(void);

/* Thread-local message describing the most recent failure in this thread. */
const char* actw_last_error(void);

/* ------------------------------------------------------------------ */
/* Expressions over coordinates x0..x{dim-1}                           */
/* ------------------------------------------------------------------ */

/* Grammar: infix + - * /, '^' with a numeric exponent, function calls
 * sin/cos/exp/log/sqrt, decimal literals; whitespace-insensitive. */
actw_status actw_expr_parse(const char* text, int dim, actw_expr** out);
void actw_expr_free(actw_expr* e);

actw_status actw_expr_eval(const actw_expr* e, const double* coords, int dim, double* out);

/* Number of Taylor coefficients of a jet of the given dimension/order
 * (order 1..3), or -1 for invalid arguments. */
int actw_jet_size(int dim, int order);

/* Taylor coefficients at a point (partial derivative divided by the
 * multi-index factorial), ordered by total degree and then
 * lexicographically by exponent tuple. coeffs_len must be at least
 * actw_jet_size(dim, order). */
actw_status actw_expr_jet(const actw_expr* e, const double* coords, int dim, int order,
                          double* coeffs, int coeffs_len);

/* ------------------------------------------------------------------ */
/* Scenario configurations                                             */
/* ------------------------------------------------------------------ */

actw_status actw_config_load(const char* path, actw_config** out);
actw_status actw_config_parse(const char* text, actw_config** out);
void actw_config_free(actw_config* c);

void actw_config_set_seed(actw_config* c, uint64_t seed);
void actw_config_set_samples(actw_config* c, int count);
void actw_config_set_tolerance_identity(actw_config* c, double tol);
void actw_config_set_tolerance_inequality(actw_config* c, double tol);
const char* actw_config_scenario_id(const actw_config* c);

/* ------------------------------------------------------------------ */
/* Runs                                                                */
/* ------------------------------------------------------------------ */

/* checks_csv: comma-separated check names, "all", or NULL/"" for the
 * list configured in the file. Prerequisites run automatically; checks a
 * scenario cannot support are reported as skipped with a reason. */
actw_status actw_run_checks(const actw_config* c, const char* checks_csv, actw_run** out);

actw_status actw_run_validate(const actw_config* c, actw_run** out);
actw_status actw_run_estimate_ab(const actw_config* c, actw_run** out);
actw_status actw_run_analyze(const actw_config* c, actw_run** out);

/* parameter: "theta", "warping-scale" or "epsilon-perturbation". */
actw_status actw_run_sweep(const actw_config* c, const char* parameter, const double* values,
                           int count, actw_run** out);

void actw_run_free(actw_run* r);

/* 0 when every executed check passed, 1 otherwise. */
int actw_run_exit_code(const actw_run* r);

/* Machine-readable report; byte-identical for identical config + seed. */
const char* actw_run_report_json(const actw_run* r);

/* Human-readable summary table. */
const char* actw_run_table(const actw_run* r);

double actw_run_alpha(const actw_run* r);
double actw_run_beta(const actw_run* r);

/* Registry of check names, in execution order. */
int actw_known_check_count(void);
const char* actw_known_check_name(int index);

#ifdef __cplusplus
}
#endif

#endif /* ACTWARP_H */
