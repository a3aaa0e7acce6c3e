#pragma once

// Shared test oracles. Everything in this header is deliberately naive and
// kept independent of the library's production solver paths: distances come
// from Floyd-Warshall instead of BFS, eigenvalues from a local Jacobi sweep
// instead of Eigen, prox solutions from FISTA on the latent blocks instead
// of the breakpoint kernel, and constrained fits from Douglas-Rachford
// instead of the dual ascent loop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "ggb/graph.hpp"
#include "ggb/groups.hpp"
#include "ggb/prox.hpp"
#include "ggb/types.hpp"

namespace support {

using ggb::Mat;
using ggb::Vec;

inline constexpr int kUnreached = std::numeric_limits<int>::max() / 4;

// All-pairs hop distances by Floyd-Warshall. kUnreached marks no path.
inline std::vector<std::vector<int>> fw_distances(
    int p, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> d(p, std::vector<int>(p, kUnreached));
  for (int i = 0; i < p; ++i) d[i][i] = 0;
  for (auto [u, v] : edges) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Nodes within b hops of j (excluding j), via repeated boolean products.
inline std::vector<bool> reach_within(int p, const std::vector<std::pair<int, int>>& edges,
                                      int j, int b) {
  std::vector<std::vector<bool>> adj(p, std::vector<bool>(p, false));
  for (auto [u, v] : edges) adj[u][v] = adj[v][u] = true;
  std::vector<bool> cur(p, false), all(p, false);
  cur[j] = true;
  for (int step = 0; step < b; ++step) {
    std::vector<bool> next(p, false);
    for (int a = 0; a < p; ++a)
      if (cur[a])
        for (int c = 0; c < p; ++c)
          if (adj[a][c]) next[c] = true;
    for (int c = 0; c < p; ++c)
      if (next[c]) all[c] = true;
    cur = next;
  }
  all[j] = false;
  return all;
}

inline Mat naive_cov(const Mat& x) {
  const auto n = x.rows(), p = x.cols();
  Mat s = Mat::Zero(p, p);
  std::vector<double> mean(p, 0.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) mean[j] += x(i, j);
    mean[j] /= static_cast<double>(n);
  }
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = 0; k < p; ++k) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        acc += (x(i, j) - mean[j]) * (x(i, k) - mean[k]);
      s(j, k) = acc / static_cast<double>(n);
    }
  return s;
}

// Cyclic Jacobi eigensolver for symmetric matrices.
struct JacobiEig {
  std::vector<double> values;  // unsorted
  Mat vectors;                 // columns match values
};

inline JacobiEig jacobi_eig(Mat a, int max_sweeps = 100) {
  const auto p = a.rows();
  Mat v = Mat::Identity(p, p);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) off += a(i, j) * a(i, j);
    if (off <= 1e-30) break;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (std::abs(a(i, j)) < 1e-300) continue;
        const double tau = (a(j, j) - a(i, i)) / (2.0 * a(i, j));
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aik = a(i, k), ajk = a(j, k);
          a(i, k) = c * aik - s * ajk;
          a(j, k) = s * aik + c * ajk;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aki = a(k, i), akj = a(k, j);
          a(k, i) = c * aki - s * akj;
          a(k, j) = s * aki + c * akj;
          const double vki = v(k, i), vkj = v(k, j);
          v(k, i) = c * vki - s * vkj;
          v(k, j) = s * vki + c * vkj;
        }
      }
  }
  JacobiEig out;
  out.vectors = v;
  out.values.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) out.values[i] = a(i, i);
  return out;
}

// U max(mu, floor) U^T computed with the Jacobi solver above.
inline Mat jacobi_clip(const Mat& s, double floor_value) {
  JacobiEig e = jacobi_eig((s + s.transpose()) / 2.0);
  const auto p = s.rows();
  Mat out = Mat::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double mu = std::max(e.values[i], floor_value);
    out += mu * e.vectors.col(i) * e.vectors.col(i).transpose();
  }
  return (out + out.transpose()) / 2.0;
}

// Exhaustive closed-tour cost with legs d(j,k)-1 (p for unreachable pairs).
inline double tsp_exhaustive(const ggb::HopDistances& h) {
  const int p = h.p;
  auto leg = [&](int a, int b) {
    return h.reachable(a, b) ? static_cast<double>(h.d(a, b) - 1)
                             : static_cast<double>(p);
  };
  std::vector<int> rest(p - 1);
  std::iota(rest.begin(), rest.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = leg(0, rest.front()) + leg(rest.back(), 0);
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) c += leg(rest[i], rest[i + 1]);
    best = std::min(best, c);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Latent-block formulation. A group is a plain list of ordered matrix entries
// plus a weight; both the global shells and the per-node crosses reduce to
// this shape, so one FISTA solver covers both estimators.

struct LatentGroup {
  std::vector<std::pair<int, int>> entries;
  double weight = 0.0;
};

inline std::vector<LatentGroup> global_latent_groups(const ggb::GlobalGroups& gs) {
  std::vector<LatentGroup> out;
  std::vector<std::pair<int, int>> acc;
  for (int b = 0; b < gs.M; ++b) {
    for (auto [j, k] : gs.shell_pairs[b]) {
      acc.emplace_back(j, k);
      acc.emplace_back(k, j);
    }
    if (acc.empty()) continue;  // empty leading group: nothing to decompose
    out.push_back({acc, gs.weights[b]});
  }
  return out;
}

inline std::vector<LatentGroup> local_latent_groups(const ggb::LocalGroups& gs) {
  std::vector<LatentGroup> out;
  for (int j = 0; j < gs.p; ++j) {
    std::vector<std::pair<int, int>> acc;
    for (int b = 0; b < gs.depth[j]; ++b) {
      for (int k : gs.rings[j][b]) {
        acc.emplace_back(j, k);
        acc.emplace_back(k, j);
      }
      if (acc.empty()) continue;
      out.push_back({acc, gs.weights[j][b]});
    }
  }
  return out;
}

// 0.5 * sum_{j != k} (m - sigma)^2 + lam * penalty, the off-diagonal part of
// the prox objective. Entries outside every group count in full since the
// prox zeroes them.
inline double prox_objective(const Mat& m, const Mat& sigma_minus, double lam,
                             double penalty) {
  const auto p = m.rows();
  double q = 0.0;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = 0; k < p; ++k) {
      if (j == k) continue;
      const double r = m(j, k) - sigma_minus(j, k);
      q += r * r;
    }
  return 0.5 * q + lam * penalty;
}

struct LatentSolution {
  Mat sigma_minus;   // sum of latent blocks; zero diagonal and off-union
  double objective;  // prox_objective of the final iterate
  double penalty;    // lam-free weighted norm sum
};

// FISTA on min over blocks of 0.5||m^- - sum_g v_g||^2 + lam sum_g w_g||v_g||.
// Step size 1/L with L = max entry overlap count.
inline LatentSolution fista_prox(const Mat& m, const std::vector<LatentGroup>& groups,
                                 double lam, int iters = 50000) {
  const auto p = m.rows();
  Mat overlap = Mat::Zero(p, p);
  for (const auto& g : groups)
    for (auto [j, k] : g.entries) overlap(j, k) += 1.0;
  const double lip = std::max(1.0, overlap.maxCoeff());

  const std::size_t n = groups.size();
  std::vector<std::vector<double>> v(n), y(n), prev(n);
  for (std::size_t g = 0; g < n; ++g) {
    v[g].assign(groups[g].entries.size(), 0.0);
    y[g] = v[g];
  }
  double t = 1.0;
  for (int it = 0; it < iters; ++it) {
    Mat sum = Mat::Zero(p, p);
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t e = 0; e < y[g].size(); ++e) {
        auto [j, k] = groups[g].entries[e];
        sum(j, k) += y[g][e];
      }
    prev = v;
    for (std::size_t g = 0; g < n; ++g) {
      double nz = 0.0;
      std::vector<double> z(y[g].size());
      for (std::size_t e = 0; e < z.size(); ++e) {
        auto [j, k] = groups[g].entries[e];
        z[e] = y[g][e] + (m(j, k) - sum(j, k)) / lip;
        nz += z[e] * z[e];
      }
      nz = std::sqrt(nz);
      const double thr = lam * groups[g].weight / lip;
      const double keep = nz > thr ? 1.0 - thr / nz : 0.0;
      for (std::size_t e = 0; e < z.size(); ++e) v[g][e] = keep * z[e];
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double mom = (t - 1.0) / t_next;
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t e = 0; e < v[g].size(); ++e)
        y[g][e] = v[g][e] + mom * (v[g][e] - prev[g][e]);
    t = t_next;
  }

  LatentSolution out;
  out.sigma_minus = Mat::Zero(p, p);
  out.penalty = 0.0;
  for (std::size_t g = 0; g < n; ++g) {
    double nv = 0.0;
    for (std::size_t e = 0; e < v[g].size(); ++e) {
      auto [j, k] = groups[g].entries[e];
      out.sigma_minus(j, k) += v[g][e];
      nv += v[g][e] * v[g][e];
    }
    out.penalty += groups[g].weight * std::sqrt(nv);
  }
  out.objective = prox_objective(m, out.sigma_minus, lam, out.penalty);
  return out;
}

// Douglas-Rachford for min 0.5||S - Sigma||^2 + lam P(Sigma) over Sigma >= delta I.
// The quadratic-plus-penalty prox reduces to a penalty prox at (y+S)/2 with
// half the lam; the cone prox is the Jacobi clip. The penalty prox callback
// receives (input, lam) and must return the full matrix (diagonal passed
// through, off-union zero).
template <typename PenaltyProx>
Mat dr_fit(const Mat& s, PenaltyProx&& penalty_prox, double lam, double delta,
           int iters = 4000) {
  Mat y = s, x = s;
  for (int it = 0; it < iters; ++it) {
    x = penalty_prox((y + s) / 2.0, lam / 2.0);
    const Mat r = jacobi_clip(2.0 * x - y, delta);
    y += r - x;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Bandwidth covers.

inline bool covers(const std::vector<int>& bw, const Mat& sigma,
                   const std::vector<std::vector<int>>& d, double tol = 1e-10) {
  const int p = static_cast<int>(sigma.rows());
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      if (std::abs(sigma(j, k)) <= tol) continue;
      if (d[j][k] >= kUnreached) return false;
      if (d[j][k] > std::max(bw[j], bw[k])) return false;
    }
  return true;
}

// First covering vector in lexicographic order, i.e. the lexicographically
// smallest cover. Exponential; keep p small.
inline std::vector<int> brute_lex_bandwidths(const Mat& sigma,
                                             const std::vector<std::vector<int>>& d,
                                             int cap) {
  const int p = static_cast<int>(sigma.rows());
  std::vector<int> bw(p, 0);
  for (;;) {
    if (covers(bw, sigma, d)) return bw;
    int i = p - 1;
    while (i >= 0 && bw[i] == cap) bw[i--] = 0;
    if (i < 0) return {};  // no cover within cap
    ++bw[i];
  }
}

inline int brute_global_bandwidth(const Mat& sigma, const std::vector<std::vector<int>>& d,
                                  int cap) {
  const int p = static_cast<int>(sigma.rows());
  for (int b = 0; b <= cap; ++b) {
    if (covers(std::vector<int>(p, b), sigma, d)) return b;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Small fixture builders.

inline ggb::SeedGraph star_graph(int p) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < p; ++j) edges.emplace_back(0, j);
  return ggb::build_graph(p, edges);
}

inline ggb::SeedGraph path_graph(int p) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j + 1 < p; ++j) edges.emplace_back(j, j + 1);
  return ggb::build_graph(p, edges);
}

}  // namespace support
