/* C interface for the graph-guided banding library.
 *
 * All functions return GGB_OK (0) on success and a nonzero status otherwise;
 * ggb_last_error() describes the most recent failure on the calling thread.
 * Handles are opaque and must be released with the matching *_free call.
 * Node ids are 1-based at this interface; matrices are dense row-major.
 */
#ifndef GGB_H
#define GGB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ggb_graph ggb_graph;
typedef struct ggb_matrix ggb_matrix;
typedef struct ggb_fit ggb_fit;

typedef enum {
  GGB_OK = 0,
  GGB_ERR_INVALID = 1,     /* bad argument or parameter */
  GGB_ERR_RANGE = 2,       /* index out of range, self loop, duplicate edge */
  GGB_ERR_DIMENSION = 3,   /* shape mismatch, asymmetry */
  GGB_ERR_DATA = 4,        /* too few rows, zero variance, not PSD, singular truth */
  GGB_ERR_NUMERIC = 5,     /* eigensolver or iteration failure */
  GGB_ERR_PARSE = 6,       /* file format problems (message carries line) */
  GGB_ERR_IO = 7,          /* filesystem problems */
  GGB_ERR_UNKNOWN = 8
} ggb_status;

const char* ggb_last_error(void);
const char* ggb_version(void);

/* ---- graphs ---------------------------------------------------------- */

/* kind: "path" (param1 = p), "lattice" (rows, cols),
 * "scalefree" (p), "gnm" (p, m). */
ggb_status ggb_graph_generate(const char* kind, int param1, int param2,
                              uint64_t seed, ggb_graph** out);
ggb_status ggb_graph_build(int p, const int* u, const int* v, int m, ggb_graph** out);
ggb_status ggb_graph_rewire(const ggb_graph* g, double pi, uint64_t seed, ggb_graph** out);
ggb_status ggb_graph_read(const char* path, ggb_graph** out);
ggb_status ggb_graph_write(const ggb_graph* g, const char* path);
int ggb_graph_p(const ggb_graph* g);
int ggb_graph_m(const ggb_graph* g);
int ggb_graph_diameter(const ggb_graph* g);
void ggb_graph_free(ggb_graph* g);

/* ---- matrices -------------------------------------------------------- */

ggb_status ggb_matrix_create(int rows, int cols, const double* data, ggb_matrix** out);
int ggb_matrix_rows(const ggb_matrix* m);
int ggb_matrix_cols(const ggb_matrix* m);
const double* ggb_matrix_data(const ggb_matrix* m); /* row-major */
ggb_status ggb_matrix_read(const char* path, ggb_matrix** out);
ggb_status ggb_matrix_read_symmetric(const char* path, ggb_matrix** out);
ggb_status ggb_matrix_write(const ggb_matrix* m, const char* path);
void ggb_matrix_free(ggb_matrix* m);

ggb_status ggb_sample_cov(const ggb_matrix* x, ggb_matrix** s);
ggb_status ggb_corr_from_cov(const ggb_matrix* s, ggb_matrix** r);

/* ---- simulation ------------------------------------------------------ */

ggb_status ggb_gen_covariance(const ggb_graph* g, const int* bandwidths,
                              double sigma_floor, ggb_matrix** out);
ggb_status ggb_draw_bandwidths(int p, const int* values, const double* probs,
                               int nvalues, uint64_t seed, int* out_bandwidths);
ggb_status ggb_sample_gaussian(const ggb_matrix* sigma, int n, uint64_t seed,
                               ggb_matrix** x);
/* Runs a scenario described by a JSON config and writes the three CSVs. */
ggb_status ggb_scenario_run(const char* config_json, const char* results_csv,
                            const char* summary_csv, const char* roc_csv, int jobs);

/* ---- estimation ------------------------------------------------------ */

typedef struct {
  double lam;            /* penalty level, >= 0 */
  double delta;          /* eigenvalue floor; -HUGE_VAL disables it */
  int depth;             /* group depth M; -1 = auto (diameter/eccentricity) */
  double outer_tol;      /* dual ascent stopping tolerance */
  int outer_max_iter;
  double prox_tol;       /* inner solver tolerance */
  int prox_max_sweeps;
  int correlation;       /* nonzero: estimate on the correlation matrix */
} ggb_config;

void ggb_config_init(ggb_config* cfg); /* fills the documented defaults */

/* method: "ggb-global", "ggb-local", "soft" (graph may be NULL for soft).
 * weights: optional group weights (global: one per depth, local: one per
 * node-depth pair in node-major order); pass NULL for sqrt-size defaults. */
ggb_status ggb_estimate(const ggb_matrix* s, const ggb_graph* g, const char* method,
                        const ggb_config* cfg, const double* weights, int nweights,
                        ggb_fit** out);

ggb_status ggb_fit_sigma(const ggb_fit* fit, ggb_matrix** out);
double ggb_fit_lam(const ggb_fit* fit);
int ggb_fit_outer_iters(const ggb_fit* fit);
int ggb_fit_converged(const ggb_fit* fit);
double ggb_fit_objective(const ggb_fit* fit);
double ggb_fit_kkt_residual(const ggb_fit* fit);     /* NaN when not computed */
double ggb_fit_min_eigenvalue(const ggb_fit* fit);   /* NaN when floor disabled */
int ggb_fit_bandwidth(const ggb_fit* fit);           /* -1 when not applicable */
/* Per-node bandwidths for local fits; out must hold p ints. */
ggb_status ggb_fit_node_bandwidths(const ggb_fit* fit, int* out, int p);
void ggb_fit_free(ggb_fit* fit);

ggb_status ggb_lambda_max(const ggb_matrix* s, const ggb_graph* g, const char* method,
                          int depth, double* out);

/* Descending log-spaced grid; out must hold count doubles. */
ggb_status ggb_lambda_grid(double lam_max, int count, double ratio, double* out);

/* Fits a strictly descending grid with warm starts; out_fits must hold
 * nlam pointers, each later released with ggb_fit_free. */
ggb_status ggb_fit_path(const ggb_matrix* s, const ggb_graph* g, const char* method,
                        const ggb_config* cfg, const double* lams, int nlam,
                        ggb_fit** out_fits);

/* K-fold cross validation; grids are sorted descending internally.
 * lams_sorted and mean_err must hold nlam doubles (may be NULL). */
ggb_status ggb_cross_validate(const ggb_matrix* x, const ggb_graph* g, const char* method,
                              const ggb_config* cfg, const double* lams, int nlam,
                              int folds, uint64_t seed, double* lam_cv,
                              double* lams_sorted, double* mean_err);

/* ---- evaluation ------------------------------------------------------ */

ggb_status ggb_losses(const ggb_matrix* est, const ggb_matrix* truth,
                      double* frobenius, double* op, double* entropy);
ggb_status ggb_support_metrics(const ggb_matrix* est, const ggb_matrix* truth,
                               double* sensitivity, double* specificity);
/* Returns 1, 0, or -1 on error. */
int ggb_is_psd(const ggb_matrix* m, double tol);
/* Smallest global bandwidth covering the support of sigma over graph g. */
ggb_status ggb_bandwidth_global(const ggb_matrix* sigma, const ggb_graph* g, int* out);
/* Lexicographically smallest covering vector; out must hold p ints. */
ggb_status ggb_bandwidth_local(const ggb_matrix* sigma, const ggb_graph* g, int* out, int p);

#ifdef __cplusplus
}
#endif

#endif /* GGB_H */
