#pragma once

#include "ggb/types.hpp"

namespace ggb {

struct EigenPair {
  Vec values;  // ascending
  Mat vectors; // columns match values
};

// A must be square; asymmetry up to tol is averaged away, larger errors.
Mat symmetrize(const Mat& a, double tol = 1e-8);

double max_abs_asymmetry(const Mat& a);

EigenPair sym_eigen(const Mat& a);

// Nearest (Frobenius) matrix to A with all eigenvalues >= floor.
Mat eigen_clip(const Mat& a, double floor);

// S = (1/n) sum (x_i - mean)(x_i - mean)^T; rows of x are observations.
Mat sample_cov(const Mat& x);

// R_jk = S_jk / sqrt(S_jj S_kk); zero or negative diagonal entries error.
Mat corr_from_cov(const Mat& s);

double frobenius_norm(const Mat& a);
double operator_norm(const Mat& a);      // symmetric: max |eigenvalue|
double max_abs_offdiag(const Mat& a);

}  // namespace ggb
