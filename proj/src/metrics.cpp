#include "ggb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ggb/linalg.hpp"
#include "ggb/rng.hpp"

namespace ggb {

namespace {
constexpr double kZeroTol = 1e-10;
}

LossReport losses(const Mat& est, const Mat& truth) {
  require(est.rows() == truth.rows() && est.cols() == truth.cols(),
          ErrorCode::dimension_mismatch, "estimate and truth sizes differ");
  LossReport out;
  Mat diff = est - truth;
  out.frobenius = diff.norm();
  out.op = operator_norm(0.5 * (diff + diff.transpose()));

  EigenPair te = sym_eigen(truth);
  require(te.values.minCoeff() > 0.0, ErrorCode::singular_truth,
          "entropy loss needs a positive definite truth");
  Vec inv_sqrt = te.values.cwiseSqrt().cwiseInverse();
  Mat t_half_inv = te.vectors * inv_sqrt.asDiagonal() * te.vectors.transpose();
  Mat w = t_half_inv * est * t_half_inv;
  EigenPair we = sym_eigen(0.5 * (w + w.transpose()));
  if (we.values.minCoeff() <= 0.0) {
    out.entropy = std::numeric_limits<double>::infinity();
    return out;
  }
  double e = 0.0;
  for (Eigen::Index i = 0; i < we.values.size(); ++i)
    e += -std::log(we.values(i)) + we.values(i) - 1.0;
  out.entropy = e;
  return out;
}

RocPoint support_metrics(const Mat& est, const Mat& truth, double lam) {
  require(est.rows() == truth.rows() && est.cols() == truth.cols(),
          ErrorCode::dimension_mismatch, "estimate and truth sizes differ");
  RocPoint pt;
  pt.lam = lam;
  long tp = 0, fn = 0, tn = 0, fp = 0;
  for (Eigen::Index j = 0; j < est.rows(); ++j)
    for (Eigen::Index k = 0; k < est.cols(); ++k) {
      if (j == k) continue;
      const bool truth_nz = std::abs(truth(j, k)) > kZeroTol;
      const bool est_nz = std::abs(est(j, k)) > kZeroTol;
      if (truth_nz)
        est_nz ? ++tp : ++fn;
      else
        est_nz ? ++fp : ++tn;
    }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  pt.sensitivity = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : nan;
  pt.specificity = tn + fp > 0 ? static_cast<double>(tn) / (tn + fp) : nan;
  pt.degenerate = tp + fn == 0 || tn + fp == 0;
  return pt;
}

std::vector<RocPoint> roc_curve(const std::vector<FitResult>& path, const Mat& truth) {
  std::vector<RocPoint> out;
  out.reserve(path.size());
  for (const auto& fit : path) out.push_back(support_metrics(fit.sigma_hat, truth, fit.lam));
  return out;
}

bool is_psd(const Mat& a, double tol) {
  return sym_eigen(symmetrize(a)).values.minCoeff() >= -tol;
}

CvResult cross_validate(const Mat& x, const SeedGraph* g, Method method,
                        const EstimatorConfig& cfg, const std::vector<double>& lams,
                        int folds, std::uint64_t seed) {
  const auto n = x.rows();
  require(folds >= 2, ErrorCode::invalid_param, "need at least two folds");
  require(n >= 2 * folds, ErrorCode::too_few_rows,
          "need at least two observations per fold");
  require(!lams.empty(), ErrorCode::invalid_param, "empty grid");

  CvResult cv;
  cv.lams = lams;
  std::sort(cv.lams.begin(), cv.lams.end(), std::greater<>());
  for (std::size_t i = 0; i + 1 < cv.lams.size(); ++i)
    require(cv.lams[i] > cv.lams[i + 1], ErrorCode::invalid_param, "duplicate lam in grid");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);

  // First (n mod folds) folds take the extra row.
  std::vector<std::vector<int>> fold_rows(folds);
  const auto base = n / folds;
  const auto extra = n % folds;
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    const auto size = base + (f < extra ? 1 : 0);
    fold_rows[f].assign(perm.begin() + pos, perm.begin() + pos + size);
    pos += size;
  }

  const int nlam = static_cast<int>(cv.lams.size());
  cv.fold_err = Mat::Zero(folds, nlam);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> heldout = fold_rows[f];
    std::vector<int> rest;
    for (int other = 0; other < folds; ++other)
      if (other != f) rest.insert(rest.end(), fold_rows[other].begin(), fold_rows[other].end());

    Mat x_out(heldout.size(), x.cols()), x_in(rest.size(), x.cols());
    for (std::size_t i = 0; i < heldout.size(); ++i) x_out.row(i) = x.row(heldout[i]);
    for (std::size_t i = 0; i < rest.size(); ++i) x_in.row(i) = x.row(rest[i]);

    Mat s_out = sample_cov(x_out);
    Mat s_in = sample_cov(x_in);
    std::vector<FitResult> path;
    if (method == Method::soft) {
      EstimatorConfig c = cfg;
      for (double lam : cv.lams) {
        c.lam = lam;
        path.push_back(soft_fit(s_in, c));
      }
    } else {
      require(g != nullptr, ErrorCode::invalid_param, "graph required");
      path = fit_path(s_in, *g, method, cfg, cv.lams);
    }
    for (int i = 0; i < nlam; ++i)
      cv.fold_err(f, i) = (s_out - path[i].sigma_hat).norm();
  }

  cv.mean_err.assign(nlam, 0.0);
  for (int i = 0; i < nlam; ++i) cv.mean_err[i] = cv.fold_err.col(i).mean();
  // Grid is descending, so scanning with strict improvement keeps the
  // largest lam among ties.
  int best = 0;
  for (int i = 1; i < nlam; ++i)
    if (cv.mean_err[i] < cv.mean_err[best]) best = i;
  cv.lam_cv = cv.lams[best];
  return cv;
}

}  // namespace ggb
