#include "ggb/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <set>

#include "ggb/rng.hpp"

namespace ggb {

namespace {

void rebuild_adjacency(SeedGraph& g) {
  g.adj.assign(g.p, {});
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
}

std::pair<int, int> ordered(int u, int v) { return u < v ? std::pair{u, v} : std::pair{v, u}; }

}  // namespace

bool SeedGraph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= p || v >= p) return false;
  const auto& a = adj[u];
  return std::binary_search(a.begin(), a.end(), v);
}

SeedGraph build_graph(int p, const std::vector<std::pair<int, int>>& edges) {
  require(p >= 1, ErrorCode::invalid_param, "node count must be >= 1");
  SeedGraph g;
  g.p = p;
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    require(u >= 0 && u < p && v >= 0 && v < p, ErrorCode::out_of_range,
            "edge endpoint out of range");
    require(u != v, ErrorCode::self_loop, "self loops are not allowed");
    auto e = ordered(u, v);
    require(seen.insert(e).second, ErrorCode::duplicate_edge, "duplicate edge");
  }
  g.edges.assign(seen.begin(), seen.end());
  rebuild_adjacency(g);
  return g;
}

HopDistances hop_distances(const SeedGraph& g) {
  HopDistances h;
  h.p = g.p;
  h.d = IntMat::Constant(g.p, g.p, HopDistances::kUnreachable);
  std::vector<int> queue;
  queue.reserve(g.p);
  for (int s = 0; s < g.p; ++s) {
    queue.clear();
    queue.push_back(s);
    h.d(s, s) = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      const int du = h.d(s, u);
      for (int v : g.adj[u]) {
        if (h.d(s, v) == HopDistances::kUnreachable) {
          h.d(s, v) = du + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return h;
}

int eccentricity(const HopDistances& h, int j) {
  require(j >= 0 && j < h.p, ErrorCode::out_of_range, "node out of range");
  int e = 0;
  for (int k = 0; k < h.p; ++k)
    if (h.reachable(j, k)) e = std::max(e, h.d(j, k));
  return e;
}

int diameter(const HopDistances& h) {
  int dm = 0;
  for (int j = 0; j < h.p; ++j) dm = std::max(dm, eccentricity(h, j));
  return dm;
}

namespace {

SeedGraph make_path(int p) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < p; ++i) e.emplace_back(i, i + 1);
  return build_graph(p, e);
}

SeedGraph make_lattice(int rows, int cols) {
  require(rows >= 1 && cols >= 1, ErrorCode::invalid_param, "lattice dims must be >= 1");
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
    }
  return build_graph(rows * cols, e);
}

// Linear preferential attachment, one edge per arriving node; attachment
// probability proportional to degree + 1 so the first pick is well defined.
SeedGraph make_scale_free(int p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> e;
  std::vector<std::int64_t> deg(p, 0);
  std::int64_t total = 0;  // sum of (deg + 1) over existing nodes
  for (int t = 1; t < p; ++t) {
    total = 0;
    for (int i = 0; i < t; ++i) total += deg[i] + 1;
    std::int64_t pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
    int target = 0;
    for (int i = 0; i < t; ++i) {
      pick -= deg[i] + 1;
      if (pick < 0) {
        target = i;
        break;
      }
    }
    e.emplace_back(target, t);
    ++deg[target];
    ++deg[t];
  }
  return build_graph(p, e);
}

// Uniform m-subset of all unordered pairs via Floyd's sampling.
SeedGraph make_gnm(int p, int m, std::uint64_t seed) {
  const std::int64_t total = static_cast<std::int64_t>(p) * (p - 1) / 2;
  require(m >= 0 && m <= total, ErrorCode::invalid_param, "edge count out of range");
  Rng rng(seed);
  std::set<std::int64_t> chosen;
  for (std::int64_t j = total - m; j < total; ++j) {
    std::int64_t t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::pair<int, int>> e;
  for (std::int64_t id : chosen) {
    // pair id in row-major upper triangle: row u has (p-1-u) pairs
    int u = 0;
    std::int64_t rest = id;
    while (rest >= p - 1 - u) {
      rest -= p - 1 - u;
      ++u;
    }
    e.emplace_back(u, u + 1 + static_cast<int>(rest));
  }
  return build_graph(p, e);
}

}  // namespace

SeedGraph generate_graph(GraphKind kind, int param1, int param2, std::uint64_t seed) {
  switch (kind) {
    case GraphKind::path:
      require(param1 >= 1, ErrorCode::invalid_param, "path needs p >= 1");
      return make_path(param1);
    case GraphKind::lattice2d:
      return make_lattice(param1, param2);
    case GraphKind::scale_free:
      require(param1 >= 1, ErrorCode::invalid_param, "scale-free needs p >= 1");
      return make_scale_free(param1, seed);
    case GraphKind::erdos_renyi_gnm:
      require(param1 >= 1, ErrorCode::invalid_param, "gnm needs p >= 1");
      return make_gnm(param1, param2, seed);
  }
  fail(ErrorCode::invalid_param, "unknown graph kind");
}

SeedGraph rewire(const SeedGraph& g, double pi, std::uint64_t seed) {
  require(pi >= 0.0 && pi <= 1.0, ErrorCode::invalid_param, "rewiring probability in [0,1]");
  const std::int64_t total = static_cast<std::int64_t>(g.p) * (g.p - 1) / 2;
  Rng rng(seed);
  std::set<std::pair<int, int>> current(g.edges.begin(), g.edges.end());
  for (auto e : g.edges) {  // original edges, fixed order
    if (rng.uniform() >= pi) continue;
    current.erase(e);
    require(static_cast<std::int64_t>(current.size()) < total, ErrorCode::full_graph,
            "no absent pair available for rewiring");
    for (;;) {
      int u = static_cast<int>(rng.below(g.p));
      int v = static_cast<int>(rng.below(g.p));
      if (u == v) continue;
      auto cand = u < v ? std::pair{u, v} : std::pair{v, u};
      if (current.insert(cand).second) break;
    }
  }
  SeedGraph out;
  out.p = g.p;
  out.edges.assign(current.begin(), current.end());
  rebuild_adjacency(out);
  return out;
}

double tour_cost(const HopDistances& h, const std::vector<int>& order) {
  const int p = h.p;
  auto leg = [&](int a, int b) {
    return h.reachable(a, b) ? static_cast<double>(h.d(a, b) - 1) : static_cast<double>(p);
  };
  double c = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i)
    c += leg(order[i], order[(i + 1) % order.size()]);
  return c;
}

Ordering tsp_ordering(const SeedGraph& g) {
  const int p = g.p;
  HopDistances h = hop_distances(g);
  auto leg = [&](int a, int b) {
    return h.reachable(a, b) ? static_cast<double>(h.d(a, b) - 1) : static_cast<double>(p);
  };

  if (p == 1) return {{0}, 0.0};

  // Multi-start nearest neighbor, smallest-index tie breaks.
  std::vector<int> best;
  double best_cost = 0.0;
  for (int start = 0; start < p; ++start) {
    std::vector<int> tour{start};
    std::vector<char> used(p, 0);
    used[start] = 1;
    for (int step = 1; step < p; ++step) {
      const int cur = tour.back();
      int pick = -1;
      double pick_cost = 0.0;
      for (int v = 0; v < p; ++v) {
        if (used[v]) continue;
        const double c = leg(cur, v);
        if (pick < 0 || c < pick_cost) {
          pick = v;
          pick_cost = c;
        }
      }
      tour.push_back(pick);
      used[pick] = 1;
    }
    const double c = tour_cost(h, tour);
    if (best.empty() || c < best_cost) {
      best = tour;
      best_cost = c;
    }
  }

  // 2-opt, first improvement, fixed scan order until no move helps.
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i + 1 < p && !improved; ++i) {
      for (int j = i + 2; j < p && !improved; ++j) {
        const int a = best[i], b = best[i + 1];
        const int c = best[j], d = best[(j + 1) % p];
        if (a == d) continue;  // same edge wrapped
        const double delta = leg(a, c) + leg(b, d) - leg(a, b) - leg(c, d);
        if (delta < -1e-12) {
          std::reverse(best.begin() + i + 1, best.begin() + j + 1);
          best_cost += delta;
          improved = true;
        }
      }
    }
  }
  return {best, tour_cost(h, best)};
}

}  // namespace ggb
