#include "ggb/prox.hpp"

#include <algorithm>
#include <cmath>

namespace ggb {

namespace {

constexpr double kZeroTol = 1e-10;

void check_square(const Mat& m, int p) {
  require(m.rows() == p && m.cols() == p, ErrorCode::dimension_mismatch,
          "matrix size does not match group system");
}

}  // namespace

// Reduction: plot (lam^2 w_b^2, cumulative shell mass) for b = 0..K and take
// the least concave majorant. Each hull segment shrinks its shells by the
// same factor 1 - 1/sqrt(slope); slope <= 1 zeroes the segment. Redundant
// groups (weight not smaller than a later group's) are folded away first so
// arbitrary positive weights are handled.
NestedShrink nested_group_shrink(const std::vector<double>& masses,
                                 const std::vector<double>& wsq, double lam) {
  const int K = static_cast<int>(masses.size());
  require(wsq.size() == masses.size(), ErrorCode::dimension_mismatch,
          "one weight per group required");
  require(lam >= 0.0, ErrorCode::invalid_param, "lam must be >= 0");
  NestedShrink out;
  out.keep.assign(K, 1.0);
  if (K == 0 || lam == 0.0) return out;

  // A group whose ball is at least as wide as a later group's is implied by
  // it; substitute the suffix minimum and remember which group realizes it.
  std::vector<double> eff(K);
  std::vector<int> eff_id(K);
  double running = wsq[K - 1];
  int running_id = K - 1;
  for (int a = K - 1; a >= 0; --a) {
    require(wsq[a] > 0.0, ErrorCode::invalid_param, "group weights must be positive");
    if (wsq[a] <= running) {
      running = wsq[a];
      running_id = a;
    }
    eff[a] = running;
    eff_id[a] = running_id;
  }

  // Cumulative points, duplicates in x folded onto the later group.
  std::vector<double> px{0.0}, py{0.0};
  std::vector<int> pg{-1};
  std::vector<int> point_of_group(K);
  double cum = 0.0;
  const double lam2 = lam * lam;
  for (int a = 0; a < K; ++a) {
    require(masses[a] >= 0.0, ErrorCode::invalid_param, "masses must be >= 0");
    cum += masses[a];
    const double x = lam2 * eff[a];
    if (x == px.back()) {
      py.back() = cum;
      pg.back() = a;
    } else {
      px.push_back(x);
      py.push_back(cum);
      pg.push_back(a);
    }
    point_of_group[a] = static_cast<int>(px.size()) - 1;
  }

  if (px.size() == 1) {
    // Every group is empty with a vanishing radius; nothing survives.
    out.keep.assign(K, 0.0);
    return out;
  }

  // Least concave majorant via a monotone stack; pop while the incoming
  // point does not bend the boundary downward.
  const int np = static_cast<int>(px.size());
  std::vector<int> hull{0};
  for (int i = 1; i < np; ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int t = hull.back();
      if ((py[i] - py[a]) * (px[t] - px[a]) >= (py[t] - py[a]) * (px[i] - px[a]))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  // Per-segment shrink factors; assign every point to its segment.
  const int nseg = static_cast<int>(hull.size()) - 1;
  std::vector<double> theta_seg(nseg);
  std::vector<int> seg_of_point(np, 0);
  for (int t = 0; t < nseg; ++t) {
    const int a = hull[t], b = hull[t + 1];
    const double slope = (py[b] - py[a]) / (px[b] - px[a]);
    theta_seg[t] = slope > 1.0 ? 1.0 / std::sqrt(slope) : 1.0;
    for (int i = a + 1; i <= b; ++i) seg_of_point[i] = t;
  }

  std::vector<double> theta_group(K);
  for (int a = 0; a < K; ++a) {
    const double th = theta_seg[seg_of_point[point_of_group[a]]];
    theta_group[a] = th;
    out.keep[a] = 1.0 - th;
  }

  // Latent blocks sit at hull breakpoints with positive shrink. Coefficients
  // telescope: V(g_t) = (1/theta_t - 1/theta_next) * residual on g_t, where
  // the residual on shell a is theta_a times the input shell.
  std::vector<double> rcum(K);
  double acc = 0.0;
  for (int a = 0; a < K; ++a) {
    acc += theta_group[a] * theta_group[a] * masses[a];
    rcum[a] = acc;
  }
  for (int t = 0; t < nseg; ++t) {
    if (theta_seg[t] >= 1.0) break;  // killed segments carry no latent mass
    const double theta_next = t + 1 < nseg ? std::min(theta_seg[t + 1], 1.0) : 1.0;
    const double c = 1.0 / theta_seg[t] - 1.0 / theta_next;
    const int group = pg[hull[t + 1]];
    const int reported = eff_id[group];
    const double norm = c * std::sqrt(rcum[group]);
    out.active.push_back(reported);
    out.latent_norm.push_back(norm);
    out.penalty += std::sqrt(wsq[reported]) * norm;
  }
  return out;
}

Mat soft_threshold_offdiag(const Mat& m, double lam) {
  require(lam >= 0.0, ErrorCode::invalid_param, "lam must be >= 0");
  Mat out = m;
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (j == k) continue;
      const double v = m(j, k);
      out(j, k) = v > lam ? v - lam : (v < -lam ? v + lam : 0.0);
    }
  return out;
}

Mat group_soft_threshold(const Mat& m, double t) {
  require(t >= 0.0, ErrorCode::invalid_param, "threshold must be >= 0");
  const double n = m.norm();
  if (n <= t) return Mat::Zero(m.rows(), m.cols());
  return m * (1.0 - t / n);
}

ProxResult prox_global(const Mat& m, const GlobalGroups& gs, double lam) {
  require(lam >= 0.0, ErrorCode::invalid_param, "lam must be >= 0");
  check_square(m, gs.p);
  ProxResult r;
  r.sigma_minus = Mat::Zero(gs.p, gs.p);
  r.sweeps = 1;
  const int M = gs.M;
  if (lam == 0.0) {
    for (int b = 0; b < M; ++b)
      for (auto [j, k] : gs.shell_pairs[b]) {
        r.sigma_minus(j, k) = m(j, k);
        r.sigma_minus(k, j) = m(j, k);
      }
    return r;
  }
  std::vector<double> masses(M), wsq(M);
  for (int b = 0; b < M; ++b) {
    double q = 0.0;
    for (auto [j, k] : gs.shell_pairs[b]) q += 2.0 * m(j, k) * m(j, k);
    masses[b] = q;
    wsq[b] = gs.weights[b] * gs.weights[b];
  }
  // Empty leading shells carry weight zero; they also carry no mass, so give
  // them a vanishing ball rather than reject them.
  for (int b = 0; b < M; ++b)
    if (wsq[b] == 0.0) {
      require(masses[b] == 0.0, ErrorCode::invalid_param, "mass on a zero-weight group");
      wsq[b] = std::numeric_limits<double>::min();
    }
  NestedShrink ns = nested_group_shrink(masses, wsq, lam);
  for (int b = 0; b < M; ++b) {
    if (ns.keep[b] == 0.0) continue;
    for (auto [j, k] : gs.shell_pairs[b]) {
      const double v = ns.keep[b] * m(j, k);
      r.sigma_minus(j, k) = v;
      r.sigma_minus(k, j) = v;
    }
  }
  for (std::size_t i = 0; i < ns.active.size(); ++i) {
    r.active_node.push_back(-1);
    r.active_depth.push_back(ns.active[i] + 1);
    r.latent_norms.push_back(ns.latent_norm[i]);
  }
  r.penalty = ns.penalty;
  return r;
}

ProxResult prox_global_oracle(const Mat& m, const GlobalGroups& gs, double lam,
                              const ProxOptions& opts) {
  require(lam >= 0.0, ErrorCode::invalid_param, "lam must be >= 0");
  check_square(m, gs.p);
  const int p = gs.p, M = gs.M;
  if (lam == 0.0) return prox_global(m, gs, lam);

  Mat target = Mat::Zero(p, p);
  for (int b = 0; b < M; ++b)
    for (auto [j, k] : gs.shell_pairs[b]) {
      target(j, k) = m(j, k);
      target(k, j) = m(j, k);
    }

  std::vector<Mat> v(M, Mat::Zero(p, p));
  Mat sum = Mat::Zero(p, p);
  ProxResult r;
  r.converged = false;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double delta = 0.0;
    for (int b = 0; b < M; ++b) {
      if (gs.weights[b] == 0.0) continue;  // empty group
      double nsq = 0.0;
      for (int a = 0; a <= b; ++a)
        for (auto [j, k] : gs.shell_pairs[a]) {
          const double z = target(j, k) - sum(j, k) + v[b](j, k);
          nsq += 2.0 * z * z;
        }
      const double norm = std::sqrt(nsq);
      const double thr = lam * gs.weights[b];
      const double scale = norm > thr ? 1.0 - thr / norm : 0.0;
      for (int a = 0; a <= b; ++a)
        for (auto [j, k] : gs.shell_pairs[a]) {
          const double z = target(j, k) - sum(j, k) + v[b](j, k);
          const double vn = scale * z;
          const double d = vn - v[b](j, k);
          if (d != 0.0) {
            delta = std::max(delta, std::abs(d));
            sum(j, k) += d;
            sum(k, j) += d;
            v[b](j, k) = vn;
            v[b](k, j) = vn;
          }
        }
    }
    r.sweeps = sweep;
    if (opts.record_objectives) {
      double pen = 0.0;
      for (int b = 0; b < M; ++b) pen += gs.weights[b] * v[b].norm();
      r.objectives.push_back(0.5 * (target - sum).squaredNorm() + lam * pen);
    }
    if (delta <= opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.sigma_minus = sum;
  for (int b = 0; b < M; ++b) {
    const double n = v[b].norm();
    if (n > 0.0) {
      r.active_node.push_back(-1);
      r.active_depth.push_back(b + 1);
      r.latent_norms.push_back(n);
      r.penalty += gs.weights[b] * n;
    }
  }
  return r;
}

namespace {

// Per-call flat view of the ring lists plus shared buffers so the sweep loop
// does not allocate. Inputs are symmetric, so reads go down column j.
struct LocalScratch {
  std::vector<std::vector<int>> ks;      // rings[j] flattened in shell order
  std::vector<std::vector<double>> wsq;  // squared group weights per node
  std::vector<double> z;                 // partial residual per ring entry
  std::vector<double> masses;            // squared shell masses, sized per node
};

LocalScratch local_scratch(const LocalGroups& gs) {
  LocalScratch sc;
  sc.ks.resize(gs.p);
  sc.wsq.resize(gs.p);
  std::size_t max_entries = 0;
  for (int j = 0; j < gs.p; ++j) {
    const int mj = gs.depth[j];
    sc.ks[j].reserve(mj ? gs.sizes[j].back() : 0);
    sc.wsq[j].resize(mj);
    for (int b = 0; b < mj; ++b) {
      for (int k : gs.rings[j][b]) sc.ks[j].push_back(k);
      sc.wsq[j][b] = gs.weights[j][b] * gs.weights[j][b];
    }
    max_entries = std::max(max_entries, sc.ks[j].size());
  }
  sc.z.resize(max_entries);
  return sc;
}

// One node's shrink on its cross-shaped partial residual; shared by the
// update pass and the read-only diagnostic pass. Leaves the residuals it
// used in sc.z.
NestedShrink node_shrink(const Mat& m, const Mat& sigma, const LocalGroups& gs,
                         const std::vector<double>& t, int j, double lam,
                         LocalScratch& sc) {
  const int mj = gs.depth[j];
  sc.masses.resize(mj);
  const int* ks = sc.ks[j].data();
  std::size_t idx = 0;
  for (int b = 0; b < mj; ++b) {
    double q = 0.0;
    const auto end = static_cast<std::size_t>(gs.sizes[j][b]);
    for (; idx < end; ++idx) {
      const int k = ks[idx];
      const double z = m(k, j) - (sigma(k, j) - t[idx]);
      sc.z[idx] = z;
      q += 2.0 * z * z;
    }
    sc.masses[b] = q;
  }
  return nested_group_shrink(sc.masses, sc.wsq[j], lam);
}

}  // namespace

ProxResult prox_local(const Mat& m, const LocalGroups& gs, double lam,
                      const ProxOptions& opts, LocalProxState* state) {
  require(lam >= 0.0, ErrorCode::invalid_param, "lam must be >= 0");
  check_square(m, gs.p);
  const int p = gs.p;

  LocalProxState fallback;
  LocalProxState* st = state ? state : &fallback;
  bool shape_ok = static_cast<int>(st->t.size()) == p;
  for (int j = 0; shape_ok && j < p; ++j) {
    const std::size_t want = gs.depth[j] ? gs.sizes[j].back() : 0;
    shape_ok = st->t[j].size() == want;
  }
  if (!shape_ok) {
    st->t.assign(p, {});
    for (int j = 0; j < p; ++j) st->t[j].assign(gs.depth[j] ? gs.sizes[j].back() : 0, 0.0);
  }

  ProxResult r;
  r.sigma_minus = Mat::Zero(p, p);
  Mat& sigma = r.sigma_minus;
  for (int j = 0; j < p; ++j) {
    std::size_t idx = 0;
    for (int b = 0; b < gs.depth[j]; ++b)
      for (int k : gs.rings[j][b]) {
        const double v = st->t[j][idx++];
        sigma(j, k) += v;
        sigma(k, j) += v;
      }
  }

  if (lam == 0.0) {
    sigma.setZero();
    for (int j = 0; j < p; ++j)
      for (int b = 0; b < gs.depth[j]; ++b)
        for (int k : gs.rings[j][b]) {
          sigma(j, k) = m(j, k);
          sigma(k, j) = m(j, k);
        }
    for (int j = 0; j < p; ++j) st->t[j].assign(st->t[j].size(), 0.0);
    r.sweeps = 1;
    return r;
  }

  // Union pairs (each once) for objective recording.
  std::vector<std::pair<int, int>> union_pairs;
  if (opts.record_objectives) {
    for (int j = 0; j < p; ++j)
      for (int b = 0; b < gs.depth[j]; ++b)
        for (int k : gs.rings[j][b]) union_pairs.emplace_back(std::min(j, k), std::max(j, k));
    std::sort(union_pairs.begin(), union_pairs.end());
    union_pairs.erase(std::unique(union_pairs.begin(), union_pairs.end()), union_pairs.end());
  }

  r.converged = false;
  LocalScratch sc = local_scratch(gs);

  // Residuals and shell masses are cached and patched as entries change, so
  // a sweep costs work proportional to the active set rather than the whole
  // ring structure. zres(k, j) is node j's partial residual at ring entry k.
  Mat zres = Mat::Zero(p, p);
  std::vector<std::vector<double>> masses(p);
  std::vector<int> walk(p, 0);    // shells to visit: active hull plus stale t
  std::vector<char> dirty(p, 1);  // inputs changed since the node's last visit
  const auto rebuild = [&] {
    for (int j = 0; j < p; ++j) {
      const int mj = gs.depth[j];
      masses[j].assign(mj, 0.0);
      walk[j] = 0;
      const std::vector<double>& t = st->t[j];
      const int* ks = sc.ks[j].data();
      std::size_t idx = 0;
      for (int b = 0; b < mj; ++b) {
        double q = 0.0;
        const auto end = static_cast<std::size_t>(gs.sizes[j][b]);
        for (; idx < end; ++idx) {
          const double z = m(ks[idx], j) - (sigma(ks[idx], j) - t[idx]);
          zres(ks[idx], j) = z;
          q += 2.0 * z * z;
          if (t[idx] != 0.0) walk[j] = b + 1;
        }
        masses[j][b] = q;
      }
      dirty[j] = 1;
    }
  };
  rebuild();

  // Each node's decomposition cost, captured at its own update so the sum
  // always matches a feasible decomposition of the current sigma. A clean
  // node would recompute the same contribution, so skipping it is exact.
  std::vector<double> node_pen(p, 0.0);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double delta = 0.0;
    for (int j = 0; j < p; ++j) {
      if (gs.depth[j] == 0 || !dirty[j]) continue;
      std::vector<double>& t = st->t[j];
      const NestedShrink ns = nested_group_shrink(masses[j], sc.wsq[j], lam);
      node_pen[j] = ns.penalty;
      const int hull = ns.active.empty() ? 0 : ns.active.back() + 1;
      const int bound = std::max(hull, walk[j]);
      const int* ks = sc.ks[j].data();
      int deepest = 0;
      std::size_t idx = 0;
      for (int b = 0; b < bound; ++b) {
        const double keep = ns.keep[b];
        const auto end = static_cast<std::size_t>(gs.sizes[j][b]);
        for (; idx < end; ++idx) {
          const int k = ks[idx];
          const double tn = keep * zres(k, j);
          const double d = tn - t[idx];
          if (d != 0.0) {
            delta = std::max(delta, std::abs(d));
            sigma(k, j) += d;
            sigma(j, k) += d;
            t[idx] = tn;
            if (b < gs.depth[k]) {
              // Entry (j, k) sits in shell b of both families, so node k's
              // cached residual and mass take the same-index patch.
              const double old = zres(j, k);
              const double now = old - d;
              zres(j, k) = now;
              masses[k][b] = std::max(0.0, masses[k][b] + 2.0 * (now * now - old * old));
              dirty[k] = 1;
            }
          }
          if (tn != 0.0) deepest = b + 1;
        }
      }
      walk[j] = deepest;
      dirty[j] = 0;
    }
    r.sweeps = sweep;
    if (opts.record_objectives) {
      double quad = 0.0;
      for (auto [j, k] : union_pairs) {
        const double e = m(j, k) - sigma(j, k);
        quad += 2.0 * e * e;
      }
      double pen = 0.0;
      for (int j = 0; j < p; ++j) pen += node_pen[j];
      r.objectives.push_back(0.5 * quad + lam * pen);
    }
    if (delta <= opts.tol) {
      r.converged = true;
      break;
    }
    // Periodic full refresh bounds the float drift of the patched caches.
    if (sweep % 512 == 0) rebuild();
  }

  // Diagnostics at the final state.
  for (int j = 0; j < p; ++j) {
    if (gs.depth[j] == 0) continue;
    const NestedShrink ns = node_shrink(m, sigma, gs, st->t[j], j, lam, sc);
    for (std::size_t i = 0; i < ns.active.size(); ++i) {
      r.active_node.push_back(j);
      r.active_depth.push_back(ns.active[i] + 1);
      r.latent_norms.push_back(ns.latent_norm[i]);
    }
    r.penalty += ns.penalty;
  }
  return r;
}

}  // namespace ggb
