#pragma once

#include <vector>

#include "ggb/groups.hpp"
#include "ggb/types.hpp"

namespace ggb {

struct ProxOptions {
  double tol = 1e-8;        // max entry change per sweep
  int max_sweeps = 100000;  // cold starts at small lam can need tens of thousands
  bool record_objectives = false;
};

// Output of a latent overlapping group lasso prox evaluation. sigma_minus has
// zero diagonal and support inside the group union. Active groups carry the
// Frobenius norms of their latent blocks; global groups use node = -1.
struct ProxResult {
  Mat sigma_minus;
  std::vector<int> active_node;
  std::vector<int> active_depth;     // 1-based depth b
  std::vector<double> latent_norms;  // ||V(g)||_F, aligned with active_*
  double penalty = 0.0;              // sum of w_g ||V(g)||_F
  int sweeps = 0;
  bool converged = true;
  std::vector<double> objectives;    // per sweep when recorded
};

// Shellwise solution of
//   min_x 0.5 * sum_a ||m_a - x_a||^2 + lam * min_{V} sum_b w_b ||V(b)||
// over nested groups g_1 c g_2 c ... c g_K whose shell masses are
// masses[a] = ||m_a||^2 and cumulative squared weights wsq[b] = w_b^2.
// keep[a] is the factor applied to shell a; active lists the hull
// breakpoints (0-based group index) carrying latent mass.
struct NestedShrink {
  std::vector<double> keep;
  std::vector<int> active;
  std::vector<double> latent_norm;
  double penalty = 0.0;  // sum over active of w * ||V||
};
NestedShrink nested_group_shrink(const std::vector<double>& masses,
                                 const std::vector<double>& wsq, double lam);

// Off-diagonals shrunk toward zero by lam, diagonal untouched.
Mat soft_threshold_offdiag(const Mat& m, double lam);

// M * max(0, 1 - t / ||M||_F); zero matrix stays zero.
Mat group_soft_threshold(const Mat& m, double t);

// Exact prox of the global penalty via the concave-majorant reduction.
ProxResult prox_global(const Mat& m, const GlobalGroups& gs, double lam);

// Reference solver: block coordinate descent over the latent blocks.
// Kept deliberately independent of the reduction above.
ProxResult prox_global_oracle(const Mat& m, const GlobalGroups& gs, double lam,
                              const ProxOptions& opts = {});

// Warm-startable latent state for the local prox: per node, the total
// contribution of that node's blocks at each ring entry.
struct LocalProxState {
  std::vector<std::vector<double>> t;  // t[j] aligned with flattened rings[j]
};

// Block coordinate descent over per-node nested families; each node update
// is one nested_group_shrink on its cross-shaped partial residual.
ProxResult prox_local(const Mat& m, const LocalGroups& gs, double lam,
                      const ProxOptions& opts = {}, LocalProxState* state = nullptr);

}  // namespace ggb
