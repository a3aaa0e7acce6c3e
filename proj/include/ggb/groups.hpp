#pragma once

#include <vector>

#include "ggb/graph.hpp"
#include "ggb/types.hpp"

namespace ggb {

// Nested global groups g_b = { (j,k) : 1 <= d(j,k) <= b }, b = 1..M.
// Shells s_b = g_b \ g_{b-1} hold the ordered pairs at distance exactly b;
// sizes count ordered pairs, so default weights are sqrt(2 * #unordered).
struct GlobalGroups {
  int p = 0;
  int M = 0;
  // shell_pairs[b-1]: unordered pairs (j < k) at distance exactly b.
  std::vector<std::vector<std::pair<int, int>>> shell_pairs;
  std::vector<std::int64_t> sizes;   // |g_b| in ordered pairs, cumulative
  std::vector<double> weights;       // w_b, default sqrt(|g_b|)

  bool in_union(int j, int k, const HopDistances& d) const {
    return j != k && d.reachable(j, k) && d.d(j, k) <= M;
  }
};

// Per-node nested groups g_{j,b} = { k : 1 <= d(j,k) <= b }, b = 1..M_j.
// Sizes count nodes; the matrix footprint of g_{j,b} is the symmetric cross
// (row j and column j entries for k in the group).
struct LocalGroups {
  int p = 0;
  std::vector<int> depth;                          // M_j (effective, capped at ecc)
  std::vector<std::vector<std::vector<int>>> rings;  // rings[j][b-1]: nodes at distance b
  std::vector<std::vector<int>> sizes;             // |g_{j,b}| cumulative node counts
  std::vector<std::vector<double>> weights;        // w_{j,b}, default sqrt(|g_{j,b}|)
};

inline constexpr int kAutoDepth = -1;

// M = kAutoDepth picks diameter(d) (at least 1). Empty shells allowed.
GlobalGroups global_groups(const HopDistances& d, int M = kAutoDepth);

// depths empty or all kAutoDepth picks M_j = eccentricity(j); explicit depths
// are capped at eccentricity (deeper groups duplicate the last one). Nodes
// with no reachable neighbor get no groups.
LocalGroups local_groups(const HopDistances& d, const std::vector<int>& depths = {});

// Replace default weights; count and positivity checked.
void set_weights(GlobalGroups& gs, const std::vector<double>& w);
void set_weights(LocalGroups& gs, const std::vector<double>& w_flat);  // (j,b) lexicographic

}  // namespace ggb
