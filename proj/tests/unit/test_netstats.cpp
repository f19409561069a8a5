#include <doctest.h>

#include <numeric>

#include "ideatrace/netstats.hpp"
#include "ideatrace/rng.hpp"

using namespace ideatrace;

namespace {

DiffusionNetwork path_network() {
  DiffusionNetwork g;
  g.nodes = {{"a", 1800}, {"b", 1850}, {"c", 1900}};
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  return g;
}

}  // namespace

TEST_CASE("degree_sequences: path graph") {
  auto g = path_network();
  auto d = degree_sequences(g);
  CHECK(d.indegree == std::vector<int>{0, 1, 1});
  CHECK(d.outdegree == std::vector<int>{1, 1, 0});
}

TEST_CASE("degree_sequences: empty network and handshake identity") {
  DiffusionNetwork empty;
  empty.nodes = {{"a", 1800}, {"b", 1900}};
  auto d0 = degree_sequences(empty);
  CHECK(d0.indegree == std::vector<int>{0, 0});

  Rng rng(8);
  DiffusionNetwork g;
  for (int i = 0; i < 15; ++i) g.nodes.push_back({"n" + std::to_string(i), 1800 + i});
  for (int j = 1; j < 15; ++j) {
    for (int i = 0; i < j; ++i) {
      if (rng.uniform01() < 0.3) {
        g.edges.push_back({i, j, 1.0});
      }
    }
  }
  auto d = degree_sequences(g);
  auto total_in = std::accumulate(d.indegree.begin(), d.indegree.end(), 0);
  auto total_out = std::accumulate(d.outdegree.begin(), d.outdegree.end(), 0);
  CHECK(total_in == static_cast<int>(g.edges.size()));
  CHECK(total_out == static_cast<int>(g.edges.size()));
}

TEST_CASE("median_of: odd, even, empty") {
  CHECK(median_of({3, 1, 2}) == 2.0);
  CHECK(median_of({4, 1, 2, 3}) == 2.5);
  CHECK(median_of({}) == 0.0);
}

TEST_CASE("motifs: median-split taxonomy on a constructed network") {
  // Five nodes; medians: indegree 1, outdegree 1.
  DiffusionNetwork g;
  g.nodes = {{"v0", 1800}, {"v1", 1820}, {"v2", 1840}, {"v3", 1860}, {"v4", 1880}};
  g.edges = {
      {0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},  // v0 out 3
      {1, 3, 1.0}, {2, 3, 1.0},               // v3 in 3
      {1, 4, 1.0},                            // v1 out 2 in 1
      {3, 4, 1.0},                            // v4 in 2 out 0
  };
  auto m = motifs(g);
  REQUIRE(m.size() == 5);
  // indegrees: 0,1,1,3,2 -> median 1; outdegrees: 3,2,1,1,0 -> median 1.
  CHECK(m[0].taxonomy == Taxonomy::innovative);     // in 0, out 3
  CHECK(m[1].taxonomy == Taxonomy::innovative);     // in 1, out 2
  CHECK(m[2].taxonomy == Taxonomy::minor);          // in 1, out 1
  CHECK(m[3].taxonomy == Taxonomy::idiosyncratic);  // in 3, out 1
  CHECK(m[4].taxonomy == Taxonomy::idiosyncratic);  // in 2, out 0

  CHECK(m[3].parents == std::vector<std::string>{"v0", "v1", "v2"});
  CHECK(m[0].children == std::vector<std::string>{"v1", "v2", "v3"});
}

TEST_CASE("motifs: isolated node in an active network is minor") {
  DiffusionNetwork g;
  g.nodes = {{"a", 1800}, {"b", 1850}, {"c", 1900}, {"d", 1950}};
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  auto m = motifs(g);
  CHECK(m[3].taxonomy == Taxonomy::minor);
  CHECK(m[3].parents.empty());
  CHECK(m[3].children.empty());
}

TEST_CASE("lifespans: childless zero, otherwise last influence") {
  DiffusionNetwork g;
  g.nodes = {{"a", 1800}, {"b", 1850}, {"c", 1900}};
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}};
  auto spans = lifespans(g);
  CHECK(spans == std::vector<int>{100, 0, 0});
}
