/*
 * epinet C API.
 *
 * Extinction analysis for SIS epidemics on networks whose edges switch as
 * independent Markov chains. All objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns an epinet_status; on failure, epinet_last_error() describes the
 * problem (the message is per thread and valid until the next failing call).
 *
 * Strings returned by *_json / *_csv accessors are owned by the handle and
 * stay valid until it is freed.
 */
#ifndef EPINET_H
#define EPINET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EPINET_BUILDING_LIBRARY)
#    define EPINET_API __declspec(dllexport)
#  else
#    define EPINET_API __declspec(dllimport)
#  endif
#else
#  define EPINET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epinet_status {
  EPINET_OK = 0,
  EPINET_ERR_INVALID_ARGUMENT = 1,
  EPINET_ERR_PARSE = 2,
  EPINET_ERR_CAPACITY = 3,
  EPINET_ERR_NUMERICAL = 4,
  EPINET_ERR_IO = 5,
  EPINET_ERR_INTERNAL = 6
} epinet_status;

typedef enum epinet_document_kind {
  EPINET_DOC_BINARY_NETWORK = 0,
  EPINET_DOC_WEIGHTED_NETWORK = 1,
  EPINET_DOC_COMMUNITY = 2,
  EPINET_DOC_POWER_LAW = 3,
  EPINET_DOC_EXPECTED_DEGREES = 4
} epinet_document_kind;

typedef struct epinet_network epinet_network;
typedef struct epinet_report epinet_report;
typedef struct epinet_simulation epinet_simulation;

EPINET_API const char* epinet_version(void);
EPINET_API const char* epinet_last_error(void);

/* ---- spec documents ---------------------------------------------------- */

EPINET_API epinet_status epinet_network_parse(const char* json_text, epinet_network** out);
EPINET_API epinet_status epinet_network_load(const char* path, epinet_network** out);
EPINET_API void epinet_network_free(epinet_network* net);
EPINET_API epinet_status epinet_network_info(const epinet_network* net, epinet_document_kind* kind,
                                             size_t* vertices, size_t* edges);

/* ---- analyses ----------------------------------------------------------- */

typedef struct epinet_analyze_options {
  size_t exact_cap;           /* max joint configurations for the exact test */
  size_t exact_dimension_cap; /* max n * configurations */
  int dump_matrix;            /* nonzero: keep a MatrixMarket dump of the mean dynamics */
} epinet_analyze_options;

EPINET_API void epinet_analyze_options_default(epinet_analyze_options* opts);

/* opts may be NULL for defaults. */
EPINET_API epinet_status epinet_analyze(const epinet_network* net, double beta, double delta,
                                        const epinet_analyze_options* opts, epinet_report** out);

/* name: "community" or "powerlaw". */
EPINET_API epinet_status epinet_example(const char* name, epinet_report** out);

EPINET_API epinet_status epinet_oracle_suite(size_t count, uint64_t seed, epinet_report** out);

typedef struct epinet_uncertainty_bound {
  double f_min;
  double s_star;
  double s0;
  double s_upper;
  int min_at_zero;
} epinet_uncertainty_bound;

EPINET_API epinet_status epinet_f_eval(double s, size_t n, double delta_u, double* out);
EPINET_API epinet_status epinet_minimize_f(size_t n, double delta_u, epinet_uncertainty_bound* out);

/* Dense kernels over row-major n x n arrays. */
EPINET_API epinet_status epinet_lambda_max_dense(const double* matrix, size_t n, double* out);
EPINET_API epinet_status epinet_spectral_abscissa(const double* matrix, size_t n, double* out);

/* Report accessors. */
EPINET_API const char* epinet_report_json(const epinet_report* report);
EPINET_API const char* epinet_report_summary(const epinet_report* report);
/* NULL unless dump_matrix was requested and the exact test ran. */
EPINET_API const char* epinet_report_matrix_market(const epinet_report* report);
/* 1 when every internal check of the run passed (oracle, example tolerances);
 * always 1 for plain analyses. */
EPINET_API int epinet_report_ok(const epinet_report* report);
/* sufficient: 1 stable a.s., 0 inconclusive; exact: 0 not run, 1 mean stable,
 * 2 not mean stable, 3 skipped (too large). Either pointer may be NULL. */
EPINET_API epinet_status epinet_report_verdicts(const epinet_report* report, int* sufficient, int* exact);
EPINET_API void epinet_report_free(epinet_report* report);

/* ---- simulation ---------------------------------------------------------- */

typedef struct epinet_sim_options {
  double horizon;
  double step;
  double sample_interval; /* 0: horizon / 100 */
  size_t trials;          /* Monte Carlo trials for the decay estimate */
  uint64_t seed;
  int linearized;         /* trajectory of the linearized model */
  int coupled;            /* both models on one switching path */
} epinet_sim_options;

EPINET_API void epinet_sim_options_default(epinet_sim_options* opts);

/* p0 may be NULL (all ones). */
EPINET_API epinet_status epinet_simulate(const epinet_network* net, double beta, double delta, const double* p0,
                                         size_t p0_len, const epinet_sim_options* opts, epinet_simulation** out);
EPINET_API const char* epinet_simulation_trajectory_csv(const epinet_simulation* sim);
/* Linearized trajectory of a coupled run, NULL otherwise. */
EPINET_API const char* epinet_simulation_linear_csv(const epinet_simulation* sim);
EPINET_API const char* epinet_simulation_events_csv(const epinet_simulation* sim);
EPINET_API const char* epinet_simulation_json(const epinet_simulation* sim);
/* min over samples of ||p_lin||_1 - ||p||_1 for coupled runs, NaN otherwise. */
EPINET_API double epinet_simulation_min_margin(const epinet_simulation* sim);
EPINET_API void epinet_simulation_free(epinet_simulation* sim);

#ifdef __cplusplus
}
#endif

#endif /* EPINET_H */
