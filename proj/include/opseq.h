/* C interface to the operator-sequence verification library.
 *
 * Conventions:
 *   - Every function that can fail returns an opseq_status; OPSEQ_OK is 0.
 *     On failure, opseq_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Output parameters are written only on OPSEQ_OK.
 *   - Objects returned through opseq_*_create/..._out parameters are owned
 *     by the caller and released with the matching opseq_*_free.
 *   - Complex scalars travel as (re, im) pairs; complex arrays are
 *     interleaved re,im doubles of length 2*n.
 */
#ifndef OPSEQ_H
#define OPSEQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum opseq_status {
    OPSEQ_OK = 0,
    OPSEQ_ERR_INVALID_ARGUMENT = 1,
    OPSEQ_ERR_DIMENSION = 2,
    OPSEQ_ERR_NOT_PSD = 3,
    OPSEQ_ERR_CONVERGENCE = 4,
    OPSEQ_ERR_PREMISE = 5,
    OPSEQ_ERR_PARSE = 6,
    OPSEQ_ERR_INTERNAL = 7
} opseq_status;

typedef struct opseq_herm opseq_herm;     /* Hermitian matrix */
typedef struct opseq_band opseq_band;     /* band operator on l2 of the naturals */
typedef struct opseq_config opseq_config; /* experiment configuration */
typedef struct opseq_report opseq_report; /* experiment outcome + CSV */

const char* opseq_version(void);
const char* opseq_last_error(void);

/* ---- Hermitian matrices -------------------------------------------------- */

opseq_status opseq_herm_create(int dim, opseq_herm** out); /* zero matrix */
opseq_status opseq_herm_random(int dim, uint64_t seed, double scale, opseq_herm** out);
opseq_status opseq_herm_random_psd(int dim, uint64_t seed, double scale, opseq_herm** out);
void opseq_herm_free(opseq_herm* h);

opseq_status opseq_herm_dim(const opseq_herm* h, int* out);
/* Lower-triangle write, requires i >= j; the (j, i) mirror is implied. */
opseq_status opseq_herm_set(opseq_herm* h, int i, int j, double re, double im);
opseq_status opseq_herm_get(const opseq_herm* h, int i, int j, double* re, double* im);

/* out = a + alpha * b */
opseq_status opseq_herm_add_scaled(const opseq_herm* a, const opseq_herm* b, double alpha,
                                   opseq_herm** out);

/* Ascending eigenvalues; len must equal the dimension. */
opseq_status opseq_herm_eigenvalues(const opseq_herm* h, double* out, size_t len);
opseq_status opseq_herm_op_norm(const opseq_herm* h, double* out);
opseq_status opseq_herm_min_eigenvalue(const opseq_herm* h, double* out);
opseq_status opseq_herm_is_psd(const opseq_herm* h, int* out);
/* Semidefinite order: *out = 1 iff a <= b. */
opseq_status opseq_herm_leq(const opseq_herm* a, const opseq_herm* b, int* out);
/* Positive square root; fails with OPSEQ_ERR_NOT_PSD on a negative spectrum. */
opseq_status opseq_herm_sqrt_psd(const opseq_herm* h, opseq_herm** out);
/* Modulus |H| = sqrt(H* H). */
opseq_status opseq_herm_abs(const opseq_herm* h, opseq_herm** out);
/* lhs = ||sqrt(b) - sqrt(c)||, rhs = sqrt(||b - c||), for PSD b and c. */
opseq_status opseq_herm_sqrt_gap(const opseq_herm* b, const opseq_herm* c, double* lhs,
                                 double* rhs);

/* ---- band operators -------------------------------------------------------- */

opseq_status opseq_band_zero(opseq_band** out);
opseq_status opseq_band_identity(opseq_band** out);
/* n-th power of the forward shift, n >= 1. */
opseq_status opseq_band_shift_power(int n, opseq_band** out);
void opseq_band_free(opseq_band* b);

/* Sets the diagonal at `offset` (positive offsets below the main diagonal)
 * to the eventually constant sequence head[0..head_len) followed by the
 * constant tail. head is interleaved re,im (2*head_len doubles). */
opseq_status opseq_band_set_diagonal(opseq_band* b, int offset, const double* head,
                                     size_t head_len, double tail_re, double tail_im);

opseq_status opseq_band_width(const opseq_band* b, int* out);
opseq_status opseq_band_entry(const opseq_band* b, long i, long j, double* re, double* im);
opseq_status opseq_band_adjoint(const opseq_band* b, opseq_band** out);
opseq_status opseq_band_compose(const opseq_band* a, const opseq_band* b, opseq_band** out);
/* out = a + (re + i*im) * b; the algebra is exact, never truncated. */
opseq_status opseq_band_add_scaled(const opseq_band* a, const opseq_band* b, double re,
                                   double im, opseq_band** out);
/* Exact equality of operators (canonical representations). */
opseq_status opseq_band_equals(const opseq_band* a, const opseq_band* b, int* out);
opseq_status opseq_band_is_selfadjoint(const opseq_band* b, int* out);

/* <A x, y> for finitely supported x, y given as index/coefficient lists;
 * coefficients are interleaved re,im (2*n doubles). */
opseq_status opseq_band_pairing(const opseq_band* a, const long* idx_x, const double* coef_x,
                                size_t nx, const long* idx_y, const double* coef_y, size_t ny,
                                double* re, double* im);

/* Operator norm of the window x window top-left compression. */
opseq_status opseq_band_section_norm(const opseq_band* a, int window, double* out);

/* <|P A P| x, x> on the given window and on the doubled window, plus a
 * stability flag (drift <= 1e-3). Self-adjoint operators only; the window
 * must be at least 4 * width and cover the support of x. */
opseq_status opseq_band_modulus_probe(const opseq_band* a, int window, const long* idx_x,
                                      const double* coef_x, size_t nx, double* value,
                                      double* doubled, int* stable);

/* ---- experiments ------------------------------------------------------------- */

/* Parses `key = value` configuration text (may be empty for all defaults).
 * Collected issues surface through opseq_last_error(). */
opseq_status opseq_config_parse(const char* text, opseq_config** out);
opseq_status opseq_config_set_experiment(opseq_config* c, const char* name);
/* key is one of "dim", "n_max", "k". */
opseq_status opseq_config_set_int(opseq_config* c, const char* key, long long value);
opseq_status opseq_config_set_seed(opseq_config* c, uint64_t seed);
opseq_status opseq_config_set_tol(opseq_config* c, double tol);
opseq_status opseq_config_set_rate(opseq_config* c, const char* rate);
void opseq_config_free(opseq_config* c);

/* Runs the configured experiment (deterministic per configuration). */
opseq_status opseq_run(const opseq_config* c, opseq_report** out);
opseq_status opseq_report_passed(const opseq_report* r, int* out);
/* CSV text; the pointer is owned by the report and freed with it. */
opseq_status opseq_report_csv(const opseq_report* r, const char** out);
void opseq_report_free(opseq_report* r);

#ifdef __cplusplus
}
#endif

#endif /* OPSEQ_H */
