#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ggb/groups.hpp"
#include "ggb/prox.hpp"
#include "ggb/types.hpp"

namespace ggb {

enum class Method { ggb_global, ggb_local, soft };

// delta = -inf drops the eigenvalue floor; the fit is then a single prox.
inline constexpr double kNoFloor = -std::numeric_limits<double>::infinity();

struct EstimatorConfig {
  double lam = 0.0;
  double delta = kNoFloor;
  int depth = kAutoDepth;            // global M or uniform local M_j
  std::vector<double> weights;       // empty = sqrt-size defaults
  double outer_tol = 1e-7;
  int outer_max_iter = 500;
  ProxOptions prox;                  // inner solver controls
  bool correlation = false;          // estimate on corr(S), report covariance-scale fit of R
};

struct FitResult {
  Mat sigma_hat;
  double lam = 0.0;
  double delta = kNoFloor;
  Method method = Method::ggb_global;
  int bandwidth = -1;                    // global fits: max active distance
  std::vector<int> node_bandwidths;      // local fits: per-node row maxima
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();  // when delta finite
  int outer_iters = 0;
  bool converged = true;
  ProxResult prox;                       // diagnostics from the final prox call
};

// Prox of the full penalized objective at M (diagonal passes through).
using ProxFn = std::function<ProxResult(const Mat& m)>;

// Dual block ascent: alternate the penalty prox with the eigenvalue floor.
// With delta = -inf this is a single prox call.
FitResult fit_constrained(const Mat& s, const ProxFn& prox, double lam, double delta,
                          double outer_tol, int outer_max_iter);

FitResult ggb_global(const Mat& s, const SeedGraph& g, const EstimatorConfig& cfg);
FitResult ggb_local(const Mat& s, const SeedGraph& g, const EstimatorConfig& cfg);
FitResult soft_fit(const Mat& s, const EstimatorConfig& cfg);

// Prebuilt-group variants used by paths, cross validation and scenarios.
FitResult ggb_global(const Mat& s, const GlobalGroups& gs, const EstimatorConfig& cfg,
                     LocalProxState* warm = nullptr);
FitResult ggb_local(const Mat& s, const LocalGroups& gs, const EstimatorConfig& cfg,
                    LocalProxState* warm = nullptr);

FitResult estimate(const Mat& s, const SeedGraph* g, Method method, const EstimatorConfig& cfg);

// Runs the method on corr_from_cov(s); result has unit diagonal when
// delta = -inf.
FitResult estimate_correlation(const Mat& s, const SeedGraph* g, Method method,
                               const EstimatorConfig& cfg);

// Smallest lam at which the fit is exactly diagonal.
double lambda_max_global(const Mat& s, const GlobalGroups& gs);
double lambda_max_local(const Mat& s, const LocalGroups& gs);
double lambda_max_soft(const Mat& s);
double lambda_max(const Mat& s, const SeedGraph* g, Method method, int depth = kAutoDepth);

// Log-spaced grid from lam_max down to lam_max / ratio, descending.
std::vector<double> default_lambda_grid(double lam_max, int count = 20, double ratio = 100.0);

// Max scaled stationarity violation of a delta = -inf global fit:
// dual feasibility of every group, activity of the reported latent groups,
// reconstruction of sigma_hat by the latent blocks, support containment.
double kkt_check_global(const Mat& s, const FitResult& fit, const GlobalGroups& gs, double lam);

// Fits along a strictly descending grid, warm-starting inner state.
std::vector<FitResult> fit_path(const Mat& s, const SeedGraph& g, Method method,
                                const EstimatorConfig& cfg, const std::vector<double>& lams);

enum class BandwidthMode { global, local };

// global: max hop distance over entries with |value| > 1e-10 (error if a
// nonzero sits on an unreachable pair). local: lexicographically smallest
// (B_1..B_p) covering every nonzero, d(j,k) <= max(B_j, B_k).
int bandwidth_global(const Mat& sigma, const HopDistances& d);
std::vector<int> bandwidth_local(const Mat& sigma, const HopDistances& d);
std::vector<int> bandwidth_row_max(const Mat& sigma, const HopDistances& d);

}  // namespace ggb
