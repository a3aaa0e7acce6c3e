#include "ggb/groups.hpp"

#include <algorithm>
#include <cmath>

namespace ggb {

GlobalGroups global_groups(const HopDistances& d, int M) {
  if (M == kAutoDepth) M = std::max(1, diameter(d));
  require(M >= 1, ErrorCode::invalid_param, "global depth must be >= 1");
  GlobalGroups gs;
  gs.p = d.p;
  gs.M = M;
  gs.shell_pairs.assign(M, {});
  for (int j = 0; j < d.p; ++j)
    for (int k = j + 1; k < d.p; ++k) {
      if (!d.reachable(j, k)) continue;
      const int dist = d.d(j, k);
      if (dist >= 1 && dist <= M) gs.shell_pairs[dist - 1].emplace_back(j, k);
    }
  gs.sizes.resize(M);
  gs.weights.resize(M);
  std::int64_t cum = 0;
  for (int b = 0; b < M; ++b) {
    cum += 2 * static_cast<std::int64_t>(gs.shell_pairs[b].size());
    gs.sizes[b] = cum;
    gs.weights[b] = std::sqrt(static_cast<double>(cum));
  }
  return gs;
}

LocalGroups local_groups(const HopDistances& d, const std::vector<int>& depths) {
  const int p = d.p;
  require(depths.empty() || static_cast<int>(depths.size()) == p, ErrorCode::dimension_mismatch,
          "depth vector length must match node count");
  LocalGroups gs;
  gs.p = p;
  gs.depth.resize(p);
  gs.rings.resize(p);
  gs.sizes.resize(p);
  gs.weights.resize(p);
  for (int j = 0; j < p; ++j) {
    const int ecc = eccentricity(d, j);
    int mj = depths.empty() || depths[j] == kAutoDepth ? ecc : depths[j];
    require(mj >= 0, ErrorCode::invalid_param, "local depth must be >= 0");
    mj = std::min(mj, ecc);  // deeper groups would duplicate the last one
    gs.depth[j] = mj;
    gs.rings[j].assign(mj, {});
    for (int k = 0; k < p; ++k) {
      if (k == j || !d.reachable(j, k)) continue;
      const int dist = d.d(j, k);
      if (dist <= mj) gs.rings[j][dist - 1].push_back(k);
    }
    gs.sizes[j].resize(mj);
    gs.weights[j].resize(mj);
    int cum = 0;
    for (int b = 0; b < mj; ++b) {
      cum += static_cast<int>(gs.rings[j][b].size());
      gs.sizes[j][b] = cum;
      gs.weights[j][b] = std::sqrt(static_cast<double>(cum));
    }
  }
  return gs;
}

void set_weights(GlobalGroups& gs, const std::vector<double>& w) {
  require(w.size() == gs.weights.size(), ErrorCode::dimension_mismatch,
          "expected one weight per group");
  for (double x : w)
    require(x > 0.0, ErrorCode::invalid_param, "weights must be positive");
  gs.weights = w;
}

void set_weights(LocalGroups& gs, const std::vector<double>& w_flat) {
  std::size_t total = 0;
  for (const auto& w : gs.weights) total += w.size();
  require(w_flat.size() == total, ErrorCode::dimension_mismatch,
          "expected one weight per (node, depth) group");
  std::size_t i = 0;
  for (auto& w : gs.weights)
    for (double& x : w) {
      require(w_flat[i] > 0.0, ErrorCode::invalid_param, "weights must be positive");
      x = w_flat[i++];
    }
}

}  // namespace ggb
