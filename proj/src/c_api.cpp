#include "ggb.h"

#include <cmath>
#include <cstring>
#include <string>

#include "ggb/estimate.hpp"
#include "ggb/graph.hpp"
#include "ggb/io.hpp"
#include "ggb/linalg.hpp"
#include "ggb/metrics.hpp"
#include "ggb/simlab.hpp"
#include "ggb/types.hpp"

struct ggb_graph {
  ggb::SeedGraph g;
};

struct ggb_matrix {
  ggb::Mat m;  // column-major inside, exposed row-major through a mirror
  mutable std::vector<double> row_major;
};

struct ggb_fit {
  ggb::FitResult fit;
};

namespace {

thread_local std::string g_last_error;

ggb_status status_of(const ggb::Error& e) {
  using ggb::ErrorCode;
  switch (e.code) {
    case ErrorCode::invalid_param:
      return GGB_ERR_INVALID;
    case ErrorCode::out_of_range:
    case ErrorCode::self_loop:
    case ErrorCode::duplicate_edge:
    case ErrorCode::full_graph:
      return GGB_ERR_RANGE;
    case ErrorCode::dimension_mismatch:
    case ErrorCode::not_symmetric:
      return GGB_ERR_DIMENSION;
    case ErrorCode::too_few_rows:
    case ErrorCode::zero_variance:
    case ErrorCode::not_psd:
    case ErrorCode::singular_truth:
    case ErrorCode::unreachable_nonzero:
      return GGB_ERR_DATA;
    case ErrorCode::no_convergence:
      return GGB_ERR_NUMERIC;
    case ErrorCode::parse:
      return GGB_ERR_PARSE;
    case ErrorCode::io:
      return GGB_ERR_IO;
  }
  return GGB_ERR_UNKNOWN;
}

template <typename Fn>
ggb_status guarded(Fn&& fn) {
  try {
    fn();
    return GGB_OK;
  } catch (const ggb::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GGB_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return GGB_ERR_UNKNOWN;
  }
}

ggb_status invalid(const char* msg) {
  g_last_error = msg;
  return GGB_ERR_INVALID;
}

ggb::GraphKind kind_from(const char* kind) {
  const std::string k = kind ? kind : "";
  if (k == "path") return ggb::GraphKind::path;
  if (k == "lattice") return ggb::GraphKind::lattice2d;
  if (k == "scalefree") return ggb::GraphKind::scale_free;
  if (k == "gnm") return ggb::GraphKind::erdos_renyi_gnm;
  ggb::fail(ggb::ErrorCode::invalid_param, "unknown graph kind '" + k + "'");
}

ggb::EstimatorConfig config_from(const ggb_config* cfg) {
  ggb::EstimatorConfig out;
  if (!cfg) return out;
  out.lam = cfg->lam;
  out.delta = std::isinf(cfg->delta) && cfg->delta < 0 ? ggb::kNoFloor : cfg->delta;
  out.depth = cfg->depth;
  out.outer_tol = cfg->outer_tol;
  out.outer_max_iter = cfg->outer_max_iter;
  out.prox.tol = cfg->prox_tol;
  out.prox.max_sweeps = cfg->prox_max_sweeps;
  out.correlation = cfg->correlation != 0;
  return out;
}

ggb_matrix* wrap(ggb::Mat m) {
  auto* out = new ggb_matrix;
  out->m = std::move(m);
  return out;
}

ggb::FitResult run_estimate(const ggb::Mat& s, const ggb::SeedGraph* g, const char* method,
                            const ggb_config* cfg, const double* weights, int nweights) {
  ggb::Method m = ggb::method_from_name(method ? method : "");
  ggb::EstimatorConfig ecfg = config_from(cfg);
  if (weights && nweights > 0) ecfg.weights.assign(weights, weights + nweights);
  if (ecfg.correlation) return ggb::estimate_correlation(s, g, m, ecfg);
  return ggb::estimate(s, g, m, ecfg);
}

}  // namespace

extern "C" {

const char* ggb_last_error(void) { return g_last_error.c_str(); }

const char* ggb_version(void) { return ggb::version(); }

/* ---- graphs ---------------------------------------------------------- */

ggb_status ggb_graph_generate(const char* kind, int param1, int param2, uint64_t seed,
                              ggb_graph** out) {
  if (!out) return invalid("null output handle");
  return guarded([&] {
    *out = new ggb_graph{ggb::generate_graph(kind_from(kind), param1, param2, seed)};
  });
}

ggb_status ggb_graph_build(int p, const int* u, const int* v, int m, ggb_graph** out) {
  if (!out || (!u && m > 0) || (!v && m > 0)) return invalid("null argument");
  return guarded([&] {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m > 0 ? m : 0);
    for (int i = 0; i < m; ++i) edges.emplace_back(u[i] - 1, v[i] - 1);
    *out = new ggb_graph{ggb::build_graph(p, edges)};
  });
}

ggb_status ggb_graph_rewire(const ggb_graph* g, double pi, uint64_t seed, ggb_graph** out) {
  if (!g || !out) return invalid("null argument");
  return guarded([&] { *out = new ggb_graph{ggb::rewire(g->g, pi, seed)}; });
}

ggb_status ggb_graph_read(const char* path, ggb_graph** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new ggb_graph{ggb::read_edge_list(path)}; });
}

ggb_status ggb_graph_write(const ggb_graph* g, const char* path) {
  if (!g || !path) return invalid("null argument");
  return guarded([&] { ggb::write_edge_list(g->g, path); });
}

int ggb_graph_p(const ggb_graph* g) { return g ? g->g.p : 0; }
int ggb_graph_m(const ggb_graph* g) { return g ? g->g.m() : 0; }

int ggb_graph_diameter(const ggb_graph* g) {
  if (!g) return -1;
  return ggb::diameter(ggb::hop_distances(g->g));
}

void ggb_graph_free(ggb_graph* g) { delete g; }

/* ---- matrices -------------------------------------------------------- */

ggb_status ggb_matrix_create(int rows, int cols, const double* data, ggb_matrix** out) {
  if (!out || !data) return invalid("null argument");
  if (rows < 1 || cols < 1) return invalid("matrix dimensions must be positive");
  return guarded([&] {
    ggb::Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = data[static_cast<size_t>(i) * cols + j];
    *out = wrap(std::move(m));
  });
}

int ggb_matrix_rows(const ggb_matrix* m) { return m ? static_cast<int>(m->m.rows()) : 0; }
int ggb_matrix_cols(const ggb_matrix* m) { return m ? static_cast<int>(m->m.cols()) : 0; }

const double* ggb_matrix_data(const ggb_matrix* m) {
  if (!m) return nullptr;
  m->row_major.resize(static_cast<size_t>(m->m.rows()) * m->m.cols());
  for (Eigen::Index i = 0; i < m->m.rows(); ++i)
    for (Eigen::Index j = 0; j < m->m.cols(); ++j)
      m->row_major[static_cast<size_t>(i) * m->m.cols() + j] = m->m(i, j);
  return m->row_major.data();
}

ggb_status ggb_matrix_read(const char* path, ggb_matrix** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = wrap(ggb::read_matrix_csv(path)); });
}

ggb_status ggb_matrix_read_symmetric(const char* path, ggb_matrix** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = wrap(ggb::read_symmetric_csv(path)); });
}

ggb_status ggb_matrix_write(const ggb_matrix* m, const char* path) {
  if (!m || !path) return invalid("null argument");
  return guarded([&] { ggb::write_matrix_csv(m->m, path); });
}

void ggb_matrix_free(ggb_matrix* m) { delete m; }

ggb_status ggb_sample_cov(const ggb_matrix* x, ggb_matrix** s) {
  if (!x || !s) return invalid("null argument");
  return guarded([&] { *s = wrap(ggb::sample_cov(x->m)); });
}

ggb_status ggb_corr_from_cov(const ggb_matrix* s, ggb_matrix** r) {
  if (!s || !r) return invalid("null argument");
  return guarded([&] { *r = wrap(ggb::corr_from_cov(ggb::symmetrize(s->m))); });
}

/* ---- simulation ------------------------------------------------------ */

ggb_status ggb_gen_covariance(const ggb_graph* g, const int* bandwidths, double sigma_floor,
                              ggb_matrix** out) {
  if (!g || !bandwidths || !out) return invalid("null argument");
  return guarded([&] {
    std::vector<int> bw(bandwidths, bandwidths + g->g.p);
    *out = wrap(ggb::generate_covariance(g->g, bw, sigma_floor));
  });
}

ggb_status ggb_draw_bandwidths(int p, const int* values, const double* probs, int nvalues,
                               uint64_t seed, int* out_bandwidths) {
  if (!values || !probs || !out_bandwidths) return invalid("null argument");
  if (nvalues < 1) return invalid("need at least one bandwidth value");
  return guarded([&] {
    std::map<int, double> law;
    for (int i = 0; i < nvalues; ++i) law[values[i]] += probs[i];
    std::vector<int> bw = ggb::draw_bandwidths(p, law, seed);
    std::copy(bw.begin(), bw.end(), out_bandwidths);
  });
}

ggb_status ggb_sample_gaussian(const ggb_matrix* sigma, int n, uint64_t seed, ggb_matrix** x) {
  if (!sigma || !x) return invalid("null argument");
  return guarded([&] { *x = wrap(ggb::sample_gaussian(sigma->m, n, seed)); });
}

ggb_status ggb_scenario_run(const char* config_json, const char* results_csv,
                            const char* summary_csv, const char* roc_csv, int jobs) {
  if (!config_json || !results_csv || !summary_csv || !roc_csv) return invalid("null argument");
  return guarded([&] {
    ggb::ScenarioConfig cfg = ggb::scenario_config_from_json(config_json);
    if (jobs > 0) cfg.jobs = jobs;
    ggb::ScenarioResult result = ggb::run_scenario(cfg);
    ggb::write_scenario_csvs(result, results_csv, summary_csv, roc_csv);
  });
}

/* ---- estimation ------------------------------------------------------ */

void ggb_config_init(ggb_config* cfg) {
  if (!cfg) return;
  ggb::EstimatorConfig d;
  cfg->lam = d.lam;
  cfg->delta = -HUGE_VAL;
  cfg->depth = d.depth;
  cfg->outer_tol = d.outer_tol;
  cfg->outer_max_iter = d.outer_max_iter;
  cfg->prox_tol = d.prox.tol;
  cfg->prox_max_sweeps = d.prox.max_sweeps;
  cfg->correlation = 0;
}

ggb_status ggb_estimate(const ggb_matrix* s, const ggb_graph* g, const char* method,
                        const ggb_config* cfg, const double* weights, int nweights,
                        ggb_fit** out) {
  if (!s || !method || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ggb_fit{run_estimate(s->m, g ? &g->g : nullptr, method, cfg, weights, nweights)};
  });
}

ggb_status ggb_fit_sigma(const ggb_fit* fit, ggb_matrix** out) {
  if (!fit || !out) return invalid("null argument");
  return guarded([&] { *out = wrap(fit->fit.sigma_hat); });
}

double ggb_fit_lam(const ggb_fit* fit) { return fit ? fit->fit.lam : 0.0; }
int ggb_fit_outer_iters(const ggb_fit* fit) { return fit ? fit->fit.outer_iters : 0; }
int ggb_fit_converged(const ggb_fit* fit) { return fit && fit->fit.converged ? 1 : 0; }
double ggb_fit_objective(const ggb_fit* fit) { return fit ? fit->fit.objective : 0.0; }
double ggb_fit_kkt_residual(const ggb_fit* fit) {
  return fit ? fit->fit.kkt_residual : std::numeric_limits<double>::quiet_NaN();
}
double ggb_fit_min_eigenvalue(const ggb_fit* fit) {
  return fit ? fit->fit.min_eigenvalue : std::numeric_limits<double>::quiet_NaN();
}
int ggb_fit_bandwidth(const ggb_fit* fit) {
  if (!fit) return -1;
  return fit->fit.method == ggb::Method::ggb_global ? fit->fit.bandwidth : -1;
}

ggb_status ggb_fit_node_bandwidths(const ggb_fit* fit, int* out, int p) {
  if (!fit || !out) return invalid("null argument");
  if (fit->fit.node_bandwidths.empty()) return invalid("fit has no per-node bandwidths");
  if (static_cast<int>(fit->fit.node_bandwidths.size()) != p)
    return invalid("wrong node count");
  std::copy(fit->fit.node_bandwidths.begin(), fit->fit.node_bandwidths.end(), out);
  return GGB_OK;
}

void ggb_fit_free(ggb_fit* fit) { delete fit; }

ggb_status ggb_lambda_max(const ggb_matrix* s, const ggb_graph* g, const char* method,
                          int depth, double* out) {
  if (!s || !method || !out) return invalid("null argument");
  return guarded([&] {
    *out = ggb::lambda_max(ggb::symmetrize(s->m), g ? &g->g : nullptr,
                           ggb::method_from_name(method), depth);
  });
}

ggb_status ggb_lambda_grid(double lam_max, int count, double ratio, double* out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    std::vector<double> grid = ggb::default_lambda_grid(lam_max, count, ratio);
    std::copy(grid.begin(), grid.end(), out);
  });
}

ggb_status ggb_fit_path(const ggb_matrix* s, const ggb_graph* g, const char* method,
                        const ggb_config* cfg, const double* lams, int nlam,
                        ggb_fit** out_fits) {
  if (!s || !method || !lams || !out_fits) return invalid("null argument");
  if (nlam < 1) return invalid("need at least one lam");
  return guarded([&] {
    ggb::Method m = ggb::method_from_name(method);
    ggb::EstimatorConfig ecfg = config_from(cfg);
    std::vector<double> grid(lams, lams + nlam);
    std::vector<ggb::FitResult> fits;
    if (m == ggb::Method::soft) {
      for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        ggb::require(grid[i] > grid[i + 1], ggb::ErrorCode::invalid_param,
                     "grid must be strictly descending");
      for (double lam : grid) {
        ecfg.lam = lam;
        fits.push_back(ggb::soft_fit(s->m, ecfg));
      }
    } else {
      ggb::require(g != nullptr, ggb::ErrorCode::invalid_param, "graph required");
      fits = ggb::fit_path(s->m, g->g, m, ecfg, grid);
    }
    for (int i = 0; i < nlam; ++i) out_fits[i] = new ggb_fit{std::move(fits[i])};
  });
}

ggb_status ggb_cross_validate(const ggb_matrix* x, const ggb_graph* g, const char* method,
                              const ggb_config* cfg, const double* lams, int nlam, int folds,
                              uint64_t seed, double* lam_cv, double* lams_sorted,
                              double* mean_err) {
  if (!x || !method || !lams || !lam_cv) return invalid("null argument");
  if (nlam < 1) return invalid("need at least one lam");
  return guarded([&] {
    ggb::CvResult cv =
        ggb::cross_validate(x->m, g ? &g->g : nullptr, ggb::method_from_name(method),
                            config_from(cfg), std::vector<double>(lams, lams + nlam), folds,
                            seed);
    *lam_cv = cv.lam_cv;
    if (lams_sorted) std::copy(cv.lams.begin(), cv.lams.end(), lams_sorted);
    if (mean_err) std::copy(cv.mean_err.begin(), cv.mean_err.end(), mean_err);
  });
}

/* ---- evaluation ------------------------------------------------------ */

ggb_status ggb_losses(const ggb_matrix* est, const ggb_matrix* truth, double* frobenius,
                      double* op, double* entropy) {
  if (!est || !truth) return invalid("null argument");
  return guarded([&] {
    ggb::LossReport r = ggb::losses(est->m, truth->m);
    if (frobenius) *frobenius = r.frobenius;
    if (op) *op = r.op;
    if (entropy) *entropy = r.entropy;
  });
}

ggb_status ggb_support_metrics(const ggb_matrix* est, const ggb_matrix* truth,
                               double* sensitivity, double* specificity) {
  if (!est || !truth) return invalid("null argument");
  return guarded([&] {
    ggb::RocPoint pt = ggb::support_metrics(est->m, truth->m);
    if (sensitivity) *sensitivity = pt.sensitivity;
    if (specificity) *specificity = pt.specificity;
  });
}

int ggb_is_psd(const ggb_matrix* m, double tol) {
  if (!m) return -1;
  int result = -1;
  ggb_status st = guarded([&] { result = ggb::is_psd(m->m, tol) ? 1 : 0; });
  return st == GGB_OK ? result : -1;
}

ggb_status ggb_bandwidth_global(const ggb_matrix* sigma, const ggb_graph* g, int* out) {
  if (!sigma || !g || !out) return invalid("null argument");
  return guarded([&] {
    *out = ggb::bandwidth_global(sigma->m, ggb::hop_distances(g->g));
  });
}

ggb_status ggb_bandwidth_local(const ggb_matrix* sigma, const ggb_graph* g, int* out, int p) {
  if (!sigma || !g || !out) return invalid("null argument");
  if (p != g->g.p) return invalid("wrong node count");
  return guarded([&] {
    std::vector<int> bw = ggb::bandwidth_local(sigma->m, ggb::hop_distances(g->g));
    std::copy(bw.begin(), bw.end(), out);
  });
}

}  // extern "C"
