#include <cmath>
#include <random>

#include "doctest.h"
#include "grex/algorithms.hpp"
#include "grex/error.hpp"
#include "oracles.hpp"

using namespace grex;
using grex::testing::make_graph;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected grex::Error");
  return ErrorKind::Io;
}

double score(const PageRankResult& r, const char* id) { return r.scores.at(NodeId(id)); }

double sum(const ScoreMap& s) {
  double t = 0.0;
  for (const auto& [_, v] : s) t += v;
  return t;
}

}  // namespace

TEST_CASE("pagerank on a directed chain matches the exact solution") {
  const Graph g = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, true);
  const PageRankResult r = pagerank(g);
  CHECK(r.converged);
  // Exact rationals of the damped walk with dangling c spread uniformly.
  CHECK(score(r, "a") == doctest::Approx(400.0 / 2169.0).epsilon(1e-9));
  CHECK(score(r, "b") == doctest::Approx(740.0 / 2169.0).epsilon(1e-9));
  CHECK(score(r, "c") == doctest::Approx(1029.0 / 2169.0).epsilon(1e-9));
  CHECK(score(r, "c") > score(r, "b"));
  CHECK(score(r, "b") > score(r, "a"));
  CHECK(sum(r.scores) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pagerank on a star pointing inward") {
  const Graph g = make_graph({"c", "l1", "l2", "l3", "l4", "l5"},
                             {{"l1", "c"}, {"l2", "c"}, {"l3", "c"}, {"l4", "c"}, {"l5", "c"}}, true);
  const auto r = pagerank(g);
  CHECK(score(r, "c") == doctest::Approx(0.51219512).epsilon(1e-7));
  for (const char* leaf : {"l1", "l2", "l3", "l4", "l5"}) {
    CHECK(score(r, leaf) == doctest::Approx(0.09756098).epsilon(1e-7));
  }
}

TEST_CASE("pagerank edge cases") {
  SUBCASE("single node") {
    const auto r = pagerank(make_graph({"a"}, {}, true));
    CHECK(score(r, "a") == doctest::Approx(1.0));
  }
  SUBCASE("no edges is uniform") {
    const auto r = pagerank(make_graph({"a", "b", "c", "d"}, {}, false));
    for (const auto& [_, v] : r.scores) CHECK(v == doctest::Approx(0.25));
  }
  SUBCASE("symmetric cycle is uniform") {
    const auto r = pagerank(make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}, true));
    for (const auto& [_, v] : r.scores) CHECK(v == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("empty graph") { CHECK(kind_of([] { pagerank(Graph{}); }) == ErrorKind::EmptyGraph); }
  SUBCASE("bad parameters") {
    const Graph g = make_graph({"a"}, {}, true);
    CHECK(kind_of([&] { pagerank(g, {1.0, 1e-8, 200}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { pagerank(g, {-0.1, 1e-8, 200}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { pagerank(g, {0.85, 0.0, 200}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { pagerank(g, {0.85, 1e-8, 0}); }) == ErrorKind::InvalidArgument);
  }
  SUBCASE("iteration cap is reported, not thrown") {
    const Graph g = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, true);
    const auto r = pagerank(g, {0.85, 1e-30, 3});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    CHECK(sum(r.scores) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pagerank agrees with dense references on random graphs") {
  std::mt19937_64 rng(11);
  const PageRankParams defaults;
  // Stopping at L1 change t leaves at most d/(1-d) * t of L1 error.
  const double truncation = defaults.damping / (1.0 - defaults.damping) * defaults.tolerance;
  for (int trial = 0; trial < 40; ++trial) {
    const bool directed = trial % 2 == 0;
    const bool weighted = trial % 3 == 0;
    const Graph g = grex::testing::random_graph(rng, {15, 30, directed, true, weighted});
    const auto r = pagerank(g);
    const auto iterated = grex::testing::dense_power_iteration(g, defaults.damping, defaults.tolerance,
                                                               defaults.max_iterations);
    const auto exact = grex::testing::dense_pagerank(g);
    double l1 = 0.0;
    for (const auto& [id, v] : r.scores) {
      CHECK(std::abs(v - iterated.at(id.str())) <= 1e-12);
      l1 += std::abs(v - exact.at(id.str()));
    }
    CHECK(l1 <= truncation);
    CHECK(std::abs(sum(r.scores) - 1.0) <= 1e-9);

    const auto tight = pagerank(g, {defaults.damping, 1e-13, 1000});
    for (const auto& [id, v] : tight.scores) CHECK(std::abs(v - exact.at(id.str())) <= 1e-11);
  }
}

TEST_CASE("density") {
  CHECK(density(make_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}, false)) ==
        doctest::Approx(0.5));
  CHECK(density(make_graph({"a", "b"}, {{"a", "b"}}, true)) == doctest::Approx(0.5));
  CHECK(density(make_graph({"a", "b"}, {{"a", "b"}, {"a", "a"}}, false)) == doctest::Approx(1.0));
  CHECK(kind_of([] { density(make_graph({"a"}, {}, false)); }) == ErrorKind::TooFewNodes);
  CHECK(kind_of([] { density(Graph{}); }) == ErrorKind::TooFewNodes);
}

TEST_CASE("diameter") {
  const Graph two_paths = make_graph({"a", "b", "c", "p", "q", "r", "s", "t"},
                                     {{"a", "b"}, {"b", "c"}, {"p", "q"}, {"q", "r"}, {"r", "s"}, {"s", "t"}},
                                     false);
  const auto d = diameter(two_paths);
  CHECK(d.diameter == 4);
  CHECK(d.disconnected);

  CHECK(diameter(make_graph({"a"}, {}, false)).diameter == 0);
  CHECK_FALSE(diameter(make_graph({"a"}, {}, false)).disconnected);
  // Directed edges are traversed weakly.
  const auto chain = diameter(make_graph({"a", "b", "c"}, {{"a", "b"}, {"c", "b"}}, true));
  CHECK(chain.diameter == 2);
  CHECK_FALSE(chain.disconnected);
  CHECK(kind_of([] { diameter(Graph{}); }) == ErrorKind::EmptyGraph);
}

TEST_CASE("clustering coefficient") {
  const Graph tri = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}, false);
  CHECK(clustering_coefficient(tri) == doctest::Approx(1.0));
  // Triangle with a pendant on a: locals 1/3, 1, 1, 0.
  const Graph pendant =
      make_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "d"}}, false);
  CHECK(clustering_coefficient(pendant) == doctest::Approx(7.0 / 12.0));
  const Graph isolated = make_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}, false);
  CHECK(clustering_coefficient(isolated) == doctest::Approx(0.75));
  // Loops and parallel edges collapse in the simple projection.
  const Graph noisy = make_graph({"a", "b", "c"},
                                 {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "a"}, {"a", "a"}}, true);
  CHECK(clustering_coefficient(noisy) == doctest::Approx(1.0));
  CHECK(kind_of([] { clustering_coefficient(Graph{}); }) == ErrorKind::EmptyGraph);
}

TEST_CASE("components are ordered by size then smallest id") {
  const Graph g = make_graph({"z", "y", "b", "a", "m"}, {{"z", "y"}, {"b", "a"}}, false);
  const auto cs = connected_components(g);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == std::vector<NodeId>{NodeId("a"), NodeId("b")});
  CHECK(cs[1] == std::vector<NodeId>{NodeId("y"), NodeId("z")});
  CHECK(cs[2] == std::vector<NodeId>{NodeId("m")});
}

TEST_CASE("stats agree with naive reference implementations") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const bool directed = trial % 2 == 1;
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 12);
    const Graph g = grex::testing::random_graph(rng, {n, n + static_cast<std::size_t>(trial % 5), directed, true, false});
    const auto naive = grex::testing::naive_stats(g);
    CHECK(density(g) == doctest::Approx(naive.density).epsilon(1e-12));
    const auto d = diameter(g);
    CHECK(d.diameter == naive.diameter);
    CHECK(d.disconnected == naive.disconnected);
    CHECK(clustering_coefficient(g) == doctest::Approx(naive.clustering).epsilon(1e-12));

    std::vector<std::string> ids;
    for (const Node& v : g.nodes()) ids.push_back(v.id.str());
    grex::testing::UnionFind uf(ids);
    for (const Edge& e : g.edges()) uf.unite(e.source.str(), e.target.str());
    const auto expected = uf.groups();
    const auto actual = connected_components(g);
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      std::vector<std::string> got;
      for (const auto& id : actual[i]) got.push_back(id.str());
      CHECK(got == expected[i]);
    }
  }
}
