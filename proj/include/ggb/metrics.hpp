#pragma once

#include <cstdint>
#include <vector>

#include "ggb/estimate.hpp"
#include "ggb/types.hpp"

namespace ggb {

struct LossReport {
  double frobenius = 0.0;
  double op = 0.0;
  double entropy = 0.0;  // +inf when the estimate is not PD relative to truth
};

struct RocPoint {
  double lam = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  bool degenerate = false;  // no true positives or no true negatives to rate
};

// truth must be PD; entropy loss sums -log(mu) + mu - 1 over eigenvalues of
// truth^{-1/2} est truth^{-1/2}.
LossReport losses(const Mat& est, const Mat& truth);

// Off-diagonal support comparison at absolute threshold 1e-10.
RocPoint support_metrics(const Mat& est, const Mat& truth, double lam = 0.0);

std::vector<RocPoint> roc_curve(const std::vector<FitResult>& path, const Mat& truth);

bool is_psd(const Mat& a, double tol = 1e-8);

struct CvResult {
  double lam_cv = 0.0;
  std::vector<double> lams;        // descending
  std::vector<double> mean_err;    // aligned with lams
  Mat fold_err;                    // folds x lams
};

// K-fold with seeded shuffle; criterion is mean Frobenius distance between
// the held-out sample covariance and the fit on the complement. Ties take
// the larger lam. Grid is sorted descending internally.
CvResult cross_validate(const Mat& x, const SeedGraph* g, Method method,
                        const EstimatorConfig& cfg, const std::vector<double>& lams,
                        int folds, std::uint64_t seed);

}  // namespace ggb
