#include <doctest.h>

#include <algorithm>

#include "ideatrace/community.hpp"
#include "ideatrace/rng.hpp"
#include "oracles.hpp"

using namespace ideatrace;

namespace {

UndirectedGraph random_graph(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  UndirectedGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < p) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> fwd, rev;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto f = fwd.emplace(a[i], b[i]);
    if (!f.second && f.first->second != b[i]) return false;
    auto r = rev.emplace(b[i], a[i]);
    if (!r.second && r.first->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("undirected_view: collapses direction and duplicates") {
  DiffusionNetwork net;
  net.nodes = {{"a", 1800}, {"b", 1850}, {"c", 1900}};
  net.edges = {{0, 1, 1.0}, {0, 1, 0.5}, {1, 2, 0.7}};
  auto g = undirected_view(net);
  CHECK(g.n == 3);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("edge_betweenness: matches brute-force path counting") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_graph(8, 0.4, seed);
    if (g.edges.empty()) continue;
    auto fast = edge_betweenness(g);
    auto brute = oracles::brute_edge_betweenness(g);
    REQUIRE(fast.size() == brute.size());
    for (std::size_t e = 0; e < fast.size(); ++e) {
      CHECK(fast[e] == doctest::Approx(brute[e]).epsilon(1e-9));
    }
  }
}

TEST_CASE("girvan_newman: already-disconnected graph returns components") {
  UndirectedGraph g;
  g.n = 5;
  g.edges = {{0, 1}, {2, 3}};  // components {0,1}, {2,3}, {4}
  auto labels = girvan_newman(g, 3);
  CHECK(labels == std::vector<int>{0, 0, 1, 1, 2});
}

TEST_CASE("girvan_newman: cuts the bridge between two cliques") {
  auto g = oracles::two_cliques_with_bridge(5, 5);
  auto labels = girvan_newman(g, 2);
  std::vector<int> expect(10, 0);
  for (int i = 5; i < 10; ++i) expect[static_cast<std::size_t>(i)] = 1;
  CHECK(same_partition(labels, expect));
}

TEST_CASE("modularity: agrees with the direct-formula oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_graph(9, 0.35, seed + 100);
    Rng rng(seed);
    std::vector<int> labels(9);
    for (auto& l : labels) l = static_cast<int>(rng.below(3));
    CHECK(modularity(g, labels) ==
          doctest::Approx(oracles::brute_modularity(g, labels)).epsilon(1e-12));
  }
}

TEST_CASE("spectral_modularity: single clique stays whole") {
  auto g = random_graph(6, 1.1, 1);  // complete graph
  auto res = spectral_modularity(g);
  CHECK(*std::max_element(res.labels.begin(), res.labels.end()) == 0);
}

TEST_CASE("spectral_modularity: splits two cliques at the bridge") {
  auto g = oracles::two_cliques_with_bridge(5, 5);
  auto res = spectral_modularity(g);
  std::vector<int> expect(10, 0);
  for (int i = 5; i < 10; ++i) expect[static_cast<std::size_t>(i)] = 1;
  CHECK(same_partition(res.labels, expect));
  CHECK(res.modularity == doctest::Approx(modularity(g, res.labels)).epsilon(1e-9));
}

TEST_CASE("spectral_modularity: reported Q matches a recount") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto g = random_graph(10, 0.3, seed + 50);
    auto res = spectral_modularity(g);
    CHECK(res.modularity ==
          doctest::Approx(modularity(g, res.labels)).epsilon(1e-9));
  }
}

TEST_CASE("spectral_modularity: matches the exhaustive optimum on small graphs") {
  std::vector<UndirectedGraph> graphs;
  graphs.push_back(oracles::two_cliques_with_bridge(4, 4));
  graphs.push_back(oracles::two_cliques_with_bridge(5, 4));
  graphs.push_back(oracles::two_cliques_with_bridge(3, 5));
  for (const auto& g : graphs) {
    auto res = spectral_modularity(g);
    auto [best_labels, best_q] = oracles::exhaustive_best_partition(g);
    CHECK(res.modularity == doctest::Approx(best_q).epsilon(1e-9));
    CHECK(same_partition(res.labels, best_labels));
  }
}
