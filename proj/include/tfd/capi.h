/* C interface to the time-fractional diffusion library.
 *
 * Every entry point returns a tfd_status; rich results live behind opaque
 * handles with explicit _free functions.  On any failure the thread-local
 * message from tfd_last_error() describes what went wrong.  The status
 * values mirror the CLI exit codes.
 */
#ifndef TFD_CAPI_H
#define TFD_CAPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TFD_API __declspec(dllexport)
#else
#define TFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tfd_status {
    TFD_OK = 0,
    TFD_ERR_CHECK_FAILED = 1,  /* an invariant or assertion did not hold */
    TFD_ERR_BAD_INPUT = 2,     /* invalid arguments, config, or file */
    TFD_ERR_NO_CONVERGENCE = 3 /* the solver gave up */
} tfd_status;

/* Thread-local message describing the most recent failure. */
TFD_API const char* tfd_last_error(void);

/* ---- special functions -------------------------------------------------- */

/* E_{alpha,beta}(z); see the library docs for the supported horizon. */
TFD_API tfd_status tfd_ml_eval(double alpha, double beta, double z, double* out);

/* ---- problems and solutions --------------------------------------------- */

typedef struct tfd_problem_s tfd_problem;
typedef struct tfd_solution_s tfd_solution;

TFD_API tfd_status tfd_problem_parse_file(const char* path, tfd_problem** out);
TFD_API tfd_status tfd_problem_parse_string(const char* text, tfd_problem** out);
/* Shipped presets: "heat", "forced", "drift". */
TFD_API tfd_status tfd_problem_preset(const char* name, tfd_problem** out);
TFD_API void tfd_problem_free(tfd_problem* p);
TFD_API uint64_t tfd_problem_hash(const tfd_problem* p);
/* Override selected fields after parsing (pass <= 0 to keep). */
TFD_API tfd_status tfd_problem_set_steps(tfd_problem* p, int steps);
TFD_API tfd_status tfd_problem_set_modes(tfd_problem* p, int modes);
TFD_API tfd_status tfd_problem_set_alpha(tfd_problem* p, double alpha);
/* "auto", "picard", "l1", "both" */
TFD_API tfd_status tfd_problem_set_method(tfd_problem* p, const char* method);

TFD_API tfd_status tfd_solve(const tfd_problem* p, tfd_solution** out);
TFD_API void tfd_solution_free(tfd_solution* s);
TFD_API tfd_status tfd_solution_write_csv(const tfd_solution* s, const char* path);
TFD_API tfd_status tfd_solution_write_trace(const tfd_solution* s, const char* path);
TFD_API double tfd_solution_residual(const tfd_solution* s);
/* sup-norm gap between the two solvers; negative when only one ran */
TFD_API double tfd_solution_cross_discrepancy(const tfd_solution* s);

/* ---- studies and verification ------------------------------------------- */

/* Manufactured-solution convergence study.  g_text e.g. "1 + t^2"; writes the
 * error table CSV when out_csv is non-NULL; reports the observed temporal
 * orders.  Returns TFD_OK regardless of the order values. */
TFD_API tfd_status tfd_convergence_study(const tfd_problem* base, const char* g_text, int mode,
                                         const int* step_counts, size_t count,
                                         const char* out_csv, double* observed_order_final,
                                         double* observed_order_l2l2);

/* Identity-residual refinement suite over named profiles
 * ("smooth", "linear", "ml", "power").  Writes a residual table to
 * out_report when non-NULL.  *all_pass is 1 when every profile shows the
 * expected monotone decay; the call then returns TFD_OK, otherwise
 * TFD_ERR_CHECK_FAILED. */
TFD_API tfd_status tfd_verify_identities(double alpha, const char* profiles,
                                         const int* step_counts, size_t count,
                                         const char* out_report, int* all_pass);

/* Closed-form counterexample demonstration for forcing t^beta.  Writes the
 * report when out_report is non-NULL; *continuous reports whether the
 * solution stays continuous at t = 0. */
TFD_API tfd_status tfd_counterexample(double alpha, double beta, const char* out_report,
                                      int* continuous);

/* Solve the problem and run the first-energy-estimate check on the result.
 * *holds is 1 when the estimate holds at every node; the call returns
 * TFD_ERR_CHECK_FAILED if it does not.  lhs/rhs receive the final-time
 * totals; out_csv gets the (term,value) table when non-NULL. */
TFD_API tfd_status tfd_energy_check(const tfd_problem* p, const char* out_csv, int* holds,
                                    double* lhs, double* rhs);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TFD_CAPI_H */
