#include "ggb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ggb {

double max_abs_asymmetry(const Mat& a) {
  return a.rows() == a.cols() ? (a - a.transpose()).cwiseAbs().maxCoeff() : 0.0;
}

Mat symmetrize(const Mat& a, double tol) {
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch, "matrix must be square");
  require(max_abs_asymmetry(a) <= tol, ErrorCode::not_symmetric,
          "matrix asymmetry exceeds tolerance");
  return 0.5 * (a + a.transpose());
}

EigenPair sym_eigen(const Mat& a) {
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch, "matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  require(es.info() == Eigen::Success, ErrorCode::no_convergence,
          "symmetric eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat eigen_clip(const Mat& a, double floor) {
  EigenPair e = sym_eigen(a);
  Vec v = e.values.cwiseMax(floor);
  return e.vectors * v.asDiagonal() * e.vectors.transpose();
}

Mat sample_cov(const Mat& x) {
  const auto n = x.rows();
  require(n >= 2, ErrorCode::too_few_rows, "need at least two observations");
  Mat centered = x.rowwise() - x.colwise().mean();
  Mat s = (centered.transpose() * centered) / static_cast<double>(n);
  return 0.5 * (s + s.transpose());
}

Mat corr_from_cov(const Mat& s) {
  require(s.rows() == s.cols(), ErrorCode::dimension_mismatch, "matrix must be square");
  const auto p = s.rows();
  Vec d(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    require(s(j, j) > 0.0, ErrorCode::zero_variance, "nonpositive variance on the diagonal");
    d(j) = 1.0 / std::sqrt(s(j, j));
  }
  Mat r = d.asDiagonal() * s * d.asDiagonal();
  for (Eigen::Index j = 0; j < p; ++j) r(j, j) = 1.0;
  return 0.5 * (r + r.transpose());
}

double frobenius_norm(const Mat& a) { return a.norm(); }

double operator_norm(const Mat& a) {
  EigenPair e = sym_eigen(a);
  return e.values.cwiseAbs().maxCoeff();
}

double max_abs_offdiag(const Mat& a) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      if (j != k) m = std::max(m, std::abs(a(j, k)));
  return m;
}

}  // namespace ggb
