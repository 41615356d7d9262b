#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specfilt/graph.hpp"
#include "specfilt/graphgen.hpp"
#include "specfilt/rng.hpp"

using namespace specfilt;

TEST_CASE("rng basics") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // Normal moments over a large sample.
  Rng rng2(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng2.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.05);

  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST_CASE("graph construction canonicalizes and validates") {
  Graph g(4, {{2, 0}, {1, 2}, {3, 2}});
  CHECK(g.edge_count() == 3);
  CHECK(g.edges()[0] == std::pair<int, int>{0, 2});
  CHECK(g.degree(2) == 3);
  CHECK(g.degree(0) == 1);
  CHECK(g.min_degree() == 1);
  CHECK(g.mean_degree() == doctest::Approx(1.5));

  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(0, {}), std::invalid_argument);
}

TEST_CASE("erdos-renyi edge cases and determinism") {
  const Graph g = generate_erdos_renyi({2, 1.0}, 9);
  CHECK(g.edge_count() == 1);
  CHECK(g.edges()[0] == std::pair<int, int>{0, 1});

  CHECK(generate_erdos_renyi({40, 0.0}, 5).edge_count() == 0);

  const Graph a = generate_erdos_renyi({60, 0.3}, 123);
  const Graph b = generate_erdos_renyi({60, 0.3}, 123);
  const Graph c = generate_erdos_renyi({60, 0.3}, 124);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());

  CHECK_THROWS_AS(generate_erdos_renyi({1, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_erdos_renyi({10, 1.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_erdos_renyi({10, -0.1}, 0), std::invalid_argument);
}

TEST_CASE("erdos-renyi edge count matches the binomial law") {
  const int n = 200;
  const double theta = 0.1;
  const double pairs = 0.5 * n * (n - 1);
  const double mean = pairs * theta;
  const double sd = std::sqrt(pairs * theta * (1.0 - theta));
  const Graph g = generate_erdos_renyi({n, theta}, 2024);
  CHECK(std::abs(g.edge_count() - mean) < 4.0 * sd);
}

TEST_CASE("erdos-renyi fixed-pair link frequency across seeds") {
  const double theta = 0.1;
  const int seeds = 1000;
  int hits = 0;
  for (int s = 0; s < seeds; ++s) {
    const Graph g = generate_erdos_renyi({20, theta}, 5000 + s);
    const auto& nb = g.neighbors(3);
    hits += std::binary_search(nb.begin(), nb.end(), 7) ? 1 : 0;
  }
  const double freq = double(hits) / seeds;
  const double band = 5.0 * std::sqrt(theta * (1.0 - theta) / seeds);
  CHECK(std::abs(freq - theta) < band);
}

TEST_CASE("lattice sbm with one population reduces to erdos-renyi") {
  LatticeSbmParams p;
  p.dims = {1};
  p.m = 50;
  p.theta0 = 0.2;
  p.thetas = {0.7};  // no adjacent population exists, value is irrelevant
  const Graph sbm = generate_lattice_sbm(p, 77);
  const Graph er = generate_erdos_renyi({50, 0.2}, 77);
  CHECK(sbm.edges() == er.edges());  // identical pair iteration and draws
}

TEST_CASE("lattice sbm links only unit steps along one dimension") {
  // 2x2 lattice, one node per population, all cross probabilities 1:
  // the diagonal pairs differ in two coordinates and must never link.
  LatticeSbmParams p;
  p.dims = {2, 2};
  p.m = 1;
  p.theta0 = 1.0;  // no within-population pairs exist with m == 1
  p.thetas = {1.0, 1.0};
  const Graph g = generate_lattice_sbm(p, 3);
  CHECK(g.edge_count() == 4);  // the 4-cycle 0-1, 0-2, 1-3, 2-3
  std::vector<std::pair<int, int>> expect{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  CHECK(g.edges() == expect);

  LatticeSbmParams q;
  q.dims = {2};
  q.m = 1;
  q.theta0 = 0.0;
  q.thetas = {1.0};
  const Graph pair = generate_lattice_sbm(q, 1);
  CHECK(pair.node_count() == 2);
  CHECK(pair.edge_count() == 1);
}

TEST_CASE("lattice sbm cross-pair frequencies match the per-dimension rates") {
  LatticeSbmParams p;
  p.dims = {3};
  p.m = 10;
  p.theta0 = 0.5;
  p.thetas = {0.2};
  const int seeds = 2000;
  int adjacent_hits = 0;
  int far_hits = 0;
  for (int s = 0; s < seeds; ++s) {
    const Graph g = generate_lattice_sbm(p, 9000 + s);
    const auto& nb0 = g.neighbors(0);  // population 0
    adjacent_hits += std::binary_search(nb0.begin(), nb0.end(), 10) ? 1 : 0;  // population 1
    far_hits += std::binary_search(nb0.begin(), nb0.end(), 20) ? 1 : 0;       // population 2
  }
  const double freq = double(adjacent_hits) / seeds;
  const double band = 5.0 * std::sqrt(0.2 * 0.8 / seeds);
  CHECK(std::abs(freq - 0.2) < band);
  CHECK(far_hits == 0);  // two lattice steps away, probability is exactly zero
}

TEST_CASE("lattice sbm edge count matches its expectation on a big instance") {
  LatticeSbmParams p;
  p.dims = {3, 7};
  p.m = 100;
  p.theta0 = 0.15;
  p.thetas = {0.09, 0.06};
  const Graph g = generate_lattice_sbm(p, 31);
  CHECK(g.node_count() == 2100);

  const double within_pairs = p.population_count() * 0.5 * p.m * (p.m - 1);
  const double dim0_pairs = double(2 * 7) * p.m * p.m;  // (3-1)*7 adjacent pairs
  const double dim1_pairs = double(3 * 6) * p.m * p.m;  // 3*(7-1)
  const double mean =
      within_pairs * p.theta0 + dim0_pairs * p.thetas[0] + dim1_pairs * p.thetas[1];
  const double var = within_pairs * p.theta0 * (1 - p.theta0) +
                     dim0_pairs * p.thetas[0] * (1 - p.thetas[0]) +
                     dim1_pairs * p.thetas[1] * (1 - p.thetas[1]);
  CHECK(std::abs(g.edge_count() - mean) < 4.0 * std::sqrt(var));
}

TEST_CASE("lattice sbm parameter validation") {
  LatticeSbmParams p;
  p.dims = {2, 3};
  p.m = 5;
  p.theta0 = 0.5;
  p.thetas = {0.1};  // wrong arity
  CHECK_THROWS_AS(generate_lattice_sbm(p, 0), std::invalid_argument);
  p.thetas = {0.1, 1.2};
  CHECK_THROWS_AS(generate_lattice_sbm(p, 0), std::invalid_argument);
  p.thetas = {0.1, 0.2};
  p.m = 0;
  CHECK_THROWS_AS(generate_lattice_sbm(p, 0), std::invalid_argument);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(Graph(2, {{0, 1}})));
  CHECK_FALSE(is_connected(Graph(2, {})));
  CHECK(is_connected(Graph(4, {{0, 1}, {1, 2}, {2, 3}})));
  CHECK_FALSE(is_connected(Graph(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("dense erdos-renyi instances are connected with high probability") {
  int connected = 0;
  for (int s = 0; s < 100; ++s)
    connected += is_connected(generate_erdos_renyi({1000, 0.05}, 40000 + s)) ? 1 : 0;
  CHECK(connected == 100);  // mean degree ~50, far above the connectivity threshold
}

TEST_CASE("edge list io round trip") {
  const Graph g = generate_erdos_renyi({30, 0.2}, 8);
  std::stringstream ss;
  write_edge_list(g, ss);
  const Graph back = read_edge_list(ss);
  CHECK(back.node_count() == g.node_count());
  CHECK(back.edges() == g.edges());

  std::stringstream bad("m 5\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), std::runtime_error);
}
