/* qwbound: certified bounds on the order-2 quantum Wasserstein distance.
 *
 * C API over opaque handles. Every function that can fail returns a
 * qwb_status; QWB_OK is success, anything else is an error whose detail
 * is available from qwb_last_error() (thread local).
 */
#ifndef QWBOUND_H
#define QWBOUND_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwb_status {
    QWB_OK = 0,
    QWB_ERR_NOT_SQUARE = 1,
    QWB_ERR_NOT_HERMITIAN = 2,
    QWB_ERR_NOT_PSD = 3,
    QWB_ERR_TRACE_MISMATCH = 4,
    QWB_ERR_ZERO_MATRIX = 5,
    QWB_ERR_BAD_RANK = 6,
    QWB_ERR_DIMENSION_MISMATCH = 7,
    QWB_ERR_ORDER_TOO_SMALL = 8,
    QWB_ERR_SOLVER_FAILED = 9,
    QWB_ERR_NO_DUAL = 10,
    QWB_ERR_ATOMS_INFEASIBLE = 11,
    QWB_ERR_MALFORMED_PROBLEM = 12,
    QWB_ERR_UNSUPPORTED_CONE = 13,
    QWB_ERR_PARSE = 14,
    QWB_ERR_IO = 15,
    QWB_ERR_INVALID_ARGUMENT = 16,
    QWB_ERR_INTERNAL = 17
} qwb_status;

typedef struct qwb_state qwb_state;   /* validated density matrix */
typedef struct qwb_plan qwb_plan;     /* quantum transport plan */
typedef struct qwb_result qwb_result; /* bound computation report */

/* Message for the last error raised on this thread. */
const char* qwb_last_error(void);
const char* qwb_version(void);

/* ---- states ------------------------------------------------------------ */

/* Loads a state file (JSON with fields n, re, optional im). When
 * project != 0 the matrix is first projected to the nearest density
 * matrix instead of being rejected. */
qwb_status qwb_state_load(const char* path, double tol, int project, qwb_state** out);

/* re/im are n*n row-major arrays; im may be NULL for a real matrix. */
qwb_status qwb_state_create(int n, const double* re, const double* im, double tol, int project,
                            qwb_state** out);

/* Seeded random rank-`rank` state; bit-identical for equal seeds. */
qwb_status qwb_state_random(int n, int rank, uint64_t seed, qwb_state** out);

int qwb_state_dim(const qwb_state* s);
qwb_status qwb_state_entry(const qwb_state* s, int i, int j, double* re, double* im);
qwb_status qwb_state_save(const qwb_state* s, const char* path);
void qwb_state_free(qwb_state* s);

/* ---- options ------------------------------------------------------------ */

typedef struct qwb_options {
    int t;              /* relaxation order, >= 2 (default 2) */
    int convention;     /* 0 = paper (entrywise conjugate), 1 = frobenius */
    double tolerance;   /* solver KKT tolerance (default 1e-8) */
    uint64_t seed;      /* seed for sampled atoms and diagnostics */
    int gauge;          /* 0 = none, 1 = trace-gamma-zero (default) */
    int extra_atoms;    /* random atoms added for the LP bound (default 500) */
    int max_iterations; /* interior-point iteration cap (default 100) */
    int verbosity;      /* 0 silent */
} qwb_options;

void qwb_options_init(qwb_options* opts);

/* ---- bounds ------------------------------------------------------------- */

/* SDP lower bound + dual certificate + plan upper bounds. */
qwb_status qwb_bound(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                     qwb_result** out);

/* Upper bounds only (product plan and discrete-atom LP). */
qwb_status qwb_upper(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                     qwb_result** out);

/* Values below are NaN when the corresponding side was not computed. */
double qwb_result_lower_bound(const qwb_result* r);
double qwb_result_certified_value(const qwb_result* r);
double qwb_result_duality_gap(const qwb_result* r);
double qwb_result_upper_product(const qwb_result* r);
double qwb_result_upper_lp(const qwb_result* r);
double qwb_result_w2_lower(const qwb_result* r);
double qwb_result_moment_bound_violation(const qwb_result* r);
double qwb_result_dual_sample_min(const qwb_result* r);

/* Full report as a JSON document (owned by the result). */
const char* qwb_result_json(const qwb_result* r);
void qwb_result_free(qwb_result* r);

/* Lets the caller label the report with input provenance before reading
 * the JSON; digests are FNV-1a of the file bytes. */
qwb_status qwb_result_set_inputs(qwb_result* r, const char* command, const char* rho_file,
                                 const char* nu_file, int projected);

/* ---- transport plans ----------------------------------------------------- */

qwb_status qwb_plan_load(const char* path, qwb_plan** out);
qwb_status qwb_plan_product(const qwb_state* rho, const qwb_state* nu, qwb_plan** out);
qwb_status qwb_plan_save(const qwb_plan* plan, const char* path);
int qwb_plan_size(const qwb_plan* plan);

qwb_status qwb_plan_check(const qwb_plan* plan, const qwb_state* rho, const qwb_state* nu,
                          double tol, double* weight_sum_error, double* max_norm_error,
                          double* rho_residual, double* nu_residual, int* feasible);

qwb_status qwb_plan_cost(const qwb_plan* plan, int convention, double* cost);
void qwb_plan_free(qwb_plan* plan);

/* ---- SDPA export --------------------------------------------------------- */

/* Writes the level-t relaxation in SDPA sparse format (.dat-s). Returns
 * the problem statistics through the optional out parameters. */
qwb_status qwb_export_sdpa(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                           const char* path, int* psd_side, int* num_vars, int* num_rows);

/* Parses the file back and compares with a fresh export; sets
 * *structurally_equal to 1 on an exact structural match. */
qwb_status qwb_sdpa_roundtrip(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                              const char* path, int* structurally_equal);

#ifdef __cplusplus
}
#endif

#endif /* QWBOUND_H */
