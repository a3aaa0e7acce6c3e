#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ggb/graph.hpp"
#include "ggb/rng.hpp"
#include "support.hpp"

using namespace ggb;

namespace {

void check_distances(const SeedGraph& g) {
  HopDistances h = hop_distances(g);
  auto fw = support::fw_distances(g.p, g.edges);
  for (int j = 0; j < g.p; ++j)
    for (int k = 0; k < g.p; ++k) {
      if (fw[j][k] >= support::kUnreached) {
        CHECK(!h.reachable(j, k));
      } else {
        REQUIRE(h.reachable(j, k));
        CHECK(h.d(j, k) == fw[j][k]);
      }
    }
}

}  // namespace

TEST_CASE("build_graph validates input") {
  CHECK_THROWS_AS(build_graph(0, {}), Error);
  CHECK_THROWS_AS(build_graph(3, {{1, 1}}), Error);
  CHECK_THROWS_AS(build_graph(3, {{0, 3}}), Error);
  CHECK_THROWS_AS(build_graph(3, {{-1, 2}}), Error);
  CHECK_THROWS_AS(build_graph(3, {{0, 1}, {1, 0}}), Error);

  SeedGraph g = build_graph(4, {{2, 0}, {1, 0}});
  CHECK(g.m() == 2);
  CHECK(g.edges[0] == std::pair{0, 1});  // normalized and sorted
  CHECK(g.edges[1] == std::pair{0, 2});
  CHECK(g.has_edge(1, 0));
  CHECK(!g.has_edge(1, 2));
  CHECK(g.adj[0] == std::vector<int>{1, 2});
}

TEST_CASE("hop distances match Floyd-Warshall") {
  check_distances(support::path_graph(7));
  check_distances(support::star_graph(6));
  check_distances(generate_graph(GraphKind::lattice2d, 3, 4, 0));
  check_distances(build_graph(5, {{0, 1}, {3, 4}}));  // two components
  check_distances(build_graph(3, {}));                // edgeless
  for (std::uint64_t seed = 1; seed <= 8; ++seed)
    check_distances(generate_graph(GraphKind::erdos_renyi_gnm, 9, 11, seed));
}

TEST_CASE("eccentricity and diameter") {
  HopDistances path = hop_distances(support::path_graph(5));
  CHECK(eccentricity(path, 0) == 4);
  CHECK(eccentricity(path, 2) == 2);
  CHECK(diameter(path) == 4);

  HopDistances star = hop_distances(support::star_graph(5));
  CHECK(eccentricity(star, 0) == 1);
  CHECK(eccentricity(star, 3) == 2);
  CHECK(diameter(star) == 2);

  CHECK(diameter(hop_distances(build_graph(3, {}))) == 0);
  // Disconnected: max over finite distances only.
  CHECK(diameter(hop_distances(build_graph(5, {{0, 1}, {1, 2}, {3, 4}}))) == 2);
}

TEST_CASE("path and lattice generators") {
  SeedGraph path = generate_graph(GraphKind::path, 6, 0, 0);
  CHECK(path.p == 6);
  CHECK(path.m() == 5);
  HopDistances h = hop_distances(path);
  CHECK(h.d(0, 5) == 5);

  SeedGraph lat = generate_graph(GraphKind::lattice2d, 3, 4, 0);
  CHECK(lat.p == 12);
  CHECK(lat.m() == 3 * 3 + 2 * 4);  // horizontal + vertical
  CHECK(diameter(hop_distances(lat)) == 2 + 3);

  SeedGraph big = generate_graph(GraphKind::lattice2d, 20, 20, 0);
  CHECK(big.p == 400);
  CHECK(big.m() == 760);
}

TEST_CASE("scale-free generator") {
  SeedGraph g = generate_graph(GraphKind::scale_free, 50, 0, 7);
  CHECK(g.p == 50);
  CHECK(g.m() == 49);  // one edge per arriving node
  HopDistances h = hop_distances(g);
  for (int j = 1; j < g.p; ++j) CHECK(h.reachable(0, j));

  SeedGraph again = generate_graph(GraphKind::scale_free, 50, 0, 7);
  CHECK(again.edges == g.edges);
  SeedGraph other = generate_graph(GraphKind::scale_free, 50, 0, 8);
  CHECK(other.edges != g.edges);

  // Preferential attachment should concentrate degree: the max degree over
  // many draws must exceed what a uniform-attachment tree typically gives.
  int max_degree = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeedGraph t = generate_graph(GraphKind::scale_free, 80, 0, seed);
    for (int j = 0; j < t.p; ++j)
      max_degree = std::max(max_degree, static_cast<int>(t.adj[j].size()));
  }
  CHECK(max_degree >= 10);
}

TEST_CASE("gnm generator") {
  SeedGraph g = generate_graph(GraphKind::erdos_renyi_gnm, 10, 17, 3);
  CHECK(g.p == 10);
  CHECK(g.m() == 17);
  std::set<std::pair<int, int>> uniq(g.edges.begin(), g.edges.end());
  CHECK(uniq.size() == 17);
  for (auto [u, v] : g.edges) {
    CHECK(u < v);
    CHECK(v < 10);
  }

  CHECK(generate_graph(GraphKind::erdos_renyi_gnm, 10, 17, 3).edges == g.edges);
  CHECK(generate_graph(GraphKind::erdos_renyi_gnm, 5, 10, 0).m() == 10);  // complete
  CHECK_THROWS_AS(generate_graph(GraphKind::erdos_renyi_gnm, 5, 11, 0), Error);

  SeedGraph big = generate_graph(GraphKind::erdos_renyi_gnm, 400, 760, 1);
  CHECK(big.m() == 760);
}

TEST_CASE("rewire preserves edge count and simplicity") {
  SeedGraph g = generate_graph(GraphKind::erdos_renyi_gnm, 30, 60, 5);

  SeedGraph same = rewire(g, 0.0, 11);
  CHECK(same.edges == g.edges);

  for (double pi : {0.3, 0.5, 1.0}) {
    SeedGraph r = rewire(g, pi, 11);
    CHECK(r.m() == g.m());
    std::set<std::pair<int, int>> uniq(r.edges.begin(), r.edges.end());
    CHECK(uniq.size() == static_cast<std::size_t>(g.m()));
    for (auto [u, v] : r.edges) CHECK(u < v);
    CHECK(rewire(g, pi, 11).edges == r.edges);  // deterministic
  }

  SeedGraph full = generate_graph(GraphKind::erdos_renyi_gnm, 5, 10, 0);
  SeedGraph rf = rewire(full, 1.0, 2);
  CHECK(rf.edges == full.edges);  // only the removed pair is ever absent

  // pi=1 on a path: every original edge is resampled, count still p-1.
  SeedGraph path = support::path_graph(4);
  SeedGraph rp = rewire(path, 1.0, 9);
  CHECK(rp.m() == 3);
}

TEST_CASE("tsp ordering") {
  SeedGraph p5 = support::path_graph(5);
  Ordering o5 = tsp_ordering(p5);
  CHECK(o5.order.size() == 5);
  std::set<int> nodes(o5.order.begin(), o5.order.end());
  CHECK(nodes.size() == 5);
  CHECK(o5.cost == doctest::Approx(tour_cost(hop_distances(p5), o5.order)));
  CHECK(o5.cost == doctest::Approx(support::tsp_exhaustive(hop_distances(p5))));
  CHECK(o5.cost == doctest::Approx(3.0));  // path legs free, closing leg d-1

  Ordering o3 = tsp_ordering(support::path_graph(3));
  CHECK(o3.cost == doctest::Approx(1.0));

  SeedGraph complete = generate_graph(GraphKind::erdos_renyi_gnm, 6, 15, 0);
  CHECK(tsp_ordering(complete).cost == doctest::Approx(0.0));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SeedGraph g = generate_graph(GraphKind::erdos_renyi_gnm, 6, 8, seed);
    Ordering o = tsp_ordering(g);
    const double best = support::tsp_exhaustive(hop_distances(g));
    CHECK(o.cost >= best - 1e-12);       // heuristic cannot beat exhaustive
    CHECK(o.cost <= best + 2.0 + 1e-12); // and stays near it on tiny graphs
  }

  // Star p=4: the two center legs are free, the two leaf-leaf legs cost 1.
  Ordering os = tsp_ordering(support::star_graph(4));
  CHECK(os.cost == doctest::Approx(support::tsp_exhaustive(hop_distances(support::star_graph(4)))));
}

TEST_CASE("rng reproducibility and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(1);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += c.normal();
  mean /= n;
  CHECK(std::abs(mean) < 0.05);

  Rng d(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) ++counts[d.below(5)];
  for (int k : counts) CHECK(k > 800);

  Rng e(9);
  const std::uint64_t s1 = e.split(), s2 = e.split();
  CHECK(s1 != s2);
}
