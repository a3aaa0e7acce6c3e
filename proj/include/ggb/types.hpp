#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ggb {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IntMat = Eigen::MatrixXi;

enum class ErrorCode {
  invalid_param,
  out_of_range,
  self_loop,
  duplicate_edge,
  full_graph,
  dimension_mismatch,
  not_symmetric,
  too_few_rows,
  zero_variance,
  no_convergence,
  not_psd,
  singular_truth,
  unreachable_nonzero,
  parse,
  io,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, ErrorCode c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

inline const char* version() { return "1.0.0"; }

}  // namespace ggb
