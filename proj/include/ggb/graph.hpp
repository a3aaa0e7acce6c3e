#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ggb/types.hpp"

namespace ggb {

// Undirected simple graph on nodes 0..p-1 (external interfaces are 1-based).
// Edges kept sorted as (u < v) pairs; adjacency lists sorted.
struct SeedGraph {
  int p = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;

  int m() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
};

// All-pairs hop distances; kUnreachable marks pairs in different components.
struct HopDistances {
  static constexpr int kUnreachable = -1;
  int p = 0;
  IntMat d;  // p x p, d(j,j) = 0

  bool reachable(int j, int k) const { return d(j, k) != kUnreachable; }
};

// Node ordering with the tour cost that produced it.
struct Ordering {
  std::vector<int> order;  // permutation of 0..p-1
  double cost = 0.0;
};

enum class GraphKind { path, lattice2d, scale_free, erdos_renyi_gnm };

SeedGraph build_graph(int p, const std::vector<std::pair<int, int>>& edges);

HopDistances hop_distances(const SeedGraph& g);

int eccentricity(const HopDistances& d, int j);   // max finite distance from j
int diameter(const HopDistances& d);              // max finite distance overall

// param1/param2 per kind: path(p,-), lattice2d(rows,cols),
// scale_free(p,-), erdos_renyi_gnm(p,m).
SeedGraph generate_graph(GraphKind kind, int param1, int param2, std::uint64_t seed);

// Each original edge is independently deleted with probability pi and
// replaced by a uniformly chosen currently-absent pair. Edge count preserved.
SeedGraph rewire(const SeedGraph& g, double pi, std::uint64_t seed);

// Heuristic tour minimizing sum of (hop distance - 1) over consecutive pairs,
// closing leg included; unreachable pairs cost p. Multi-start nearest
// neighbor plus 2-opt, deterministic tie-breaks.
Ordering tsp_ordering(const SeedGraph& g);

double tour_cost(const HopDistances& d, const std::vector<int>& order);

}  // namespace ggb
