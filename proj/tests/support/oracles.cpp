#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "ideatrace/rng.hpp"

namespace oracles {

using namespace ideatrace;

// --- diffusion -------------------------------------------------------------

double network_objective(const std::vector<Cascade>& cascades,
                         const DiffusionNetwork& g,
                         const DiffusionConfig& cfg) {
  double total = 0.0;
  for (const auto& c : cascades) {
    if (!c.hits.empty()) total += best_tree_loglik(c, g, cfg);
  }
  return total;
}

namespace {

struct CandidateEdge {
  std::int32_t src, dst;  // indices into the sorted universe
};

std::vector<NetworkNode> sorted_universe(std::vector<NetworkNode> universe,
                                         const std::vector<Cascade>& cascades) {
  if (universe.empty()) {
    std::map<std::string, int> seen;
    for (const auto& c : cascades) {
      for (const auto& [id, year] : c.hits) seen.emplace(id, year);
    }
    for (const auto& [id, year] : seen) universe.push_back({id, year});
  }
  std::sort(universe.begin(), universe.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.id) < std::tie(b.year, b.id);
  });
  return universe;
}

std::vector<CandidateEdge> candidate_edges(const std::vector<NetworkNode>& nodes,
                                           const std::vector<Cascade>& cascades) {
  std::map<std::string, std::int32_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index[nodes[i].id] = static_cast<std::int32_t>(i);
  }
  std::set<std::pair<std::int32_t, std::int32_t>> pairs;
  for (const auto& c : cascades) {
    for (const auto& [id_i, year_i] : c.hits) {
      for (const auto& [id_j, year_j] : c.hits) {
        if (year_i < year_j) pairs.emplace(index.at(id_i), index.at(id_j));
      }
    }
  }
  std::vector<CandidateEdge> out;
  for (auto [s, d] : pairs) out.push_back({s, d});
  // (src year, src id, dst year, dst id) == index order of the sorted nodes.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  return out;
}

}  // namespace

DiffusionNetwork naive_greedy_infer(const std::vector<Cascade>& cascades,
                                    const DiffusionConfig& cfg,
                                    std::vector<NetworkNode> universe) {
  DiffusionNetwork g;
  g.nodes = sorted_universe(std::move(universe), cascades);
  auto candidates = candidate_edges(g.nodes, cascades);
  const std::int64_t budget = cfg.effective_k_max(g.nodes.size());

  std::set<std::pair<std::int32_t, std::int32_t>> chosen;
  double objective = 0.0;

  while (static_cast<std::int64_t>(g.edges.size()) < budget) {
    // Stop once the improvement reaches stop_frac of the bound built from
    // the current exact gains.
    std::vector<double> gains(candidates.size(), -1.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (chosen.count({candidates[i].src, candidates[i].dst})) continue;
      gains[i] = marginal_gain(g.nodes[static_cast<std::size_t>(candidates[i].src)],
                               g.nodes[static_cast<std::size_t>(candidates[i].dst)],
                               g, cascades, cfg);
    }
    std::vector<double> sorted_gains;
    for (double x : gains) {
      if (x >= 0.0) sorted_gains.push_back(x);
    }
    std::sort(sorted_gains.rbegin(), sorted_gains.rend());
    double ub = objective;
    std::int64_t remaining = budget - static_cast<std::int64_t>(g.edges.size());
    for (std::size_t i = 0;
         i < sorted_gains.size() && i < static_cast<std::size_t>(remaining); ++i) {
      ub += sorted_gains[i];
    }
    if (objective >= cfg.stop_frac * ub) break;

    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (gains[i] < 0.0) continue;
      if (best == candidates.size() || gains[i] > gains[best]) best = i;
      // candidates are already in tie-break order, so strict > keeps the
      // first of any tie
    }
    if (best == candidates.size() || gains[best] <= 0.0) break;

    g.edges.push_back({candidates[best].src, candidates[best].dst, gains[best]});
    chosen.insert({candidates[best].src, candidates[best].dst});
    objective += gains[best];
  }
  return g;
}

double exhaustive_best_objective(const std::vector<Cascade>& cascades,
                                 const DiffusionConfig& cfg,
                                 const std::vector<NetworkNode>& universe) {
  DiffusionNetwork base;
  base.nodes = sorted_universe(universe, cascades);
  auto candidates = candidate_edges(base.nodes, cascades);
  const std::size_t n = candidates.size();
  const std::int64_t k_max = cfg.effective_k_max(base.nodes.size());

  double best = network_objective(cascades, base, cfg);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (__builtin_popcountll(mask) > k_max) continue;
    DiffusionNetwork g;
    g.nodes = base.nodes;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        g.edges.push_back({candidates[i].src, candidates[i].dst, 0.0});
      }
    }
    best = std::max(best, network_objective(cascades, g, cfg));
  }
  return best;
}

// --- graphs ------------------------------------------------------------

namespace {

struct BfsResult {
  std::vector<int> dist;
  std::vector<double> sigma;  // shortest-path counts
};

BfsResult bfs_counts(const UndirectedGraph& g, int source) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (auto [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  BfsResult r;
  r.dist.assign(static_cast<std::size_t>(g.n), -1);
  r.sigma.assign(static_cast<std::size_t>(g.n), 0.0);
  r.dist[static_cast<std::size_t>(source)] = 0;
  r.sigma[static_cast<std::size_t>(source)] = 1.0;
  std::deque<int> q{source};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (r.dist[static_cast<std::size_t>(w)] == -1) {
        r.dist[static_cast<std::size_t>(w)] = r.dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(w);
      }
      if (r.dist[static_cast<std::size_t>(w)] ==
          r.dist[static_cast<std::size_t>(v)] + 1) {
        r.sigma[static_cast<std::size_t>(w)] += r.sigma[static_cast<std::size_t>(v)];
      }
    }
  }
  return r;
}

}  // namespace

std::vector<double> brute_edge_betweenness(const UndirectedGraph& g) {
  std::vector<BfsResult> from(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) from[static_cast<std::size_t>(v)] = bfs_counts(g, v);

  std::vector<double> out(g.edges.size(), 0.0);
  for (int s = 0; s < g.n; ++s) {
    for (int t = 0; t < g.n; ++t) {
      if (s == t) continue;
      const auto& fs = from[static_cast<std::size_t>(s)];
      const auto& ft = from[static_cast<std::size_t>(t)];
      int d = fs.dist[static_cast<std::size_t>(t)];
      if (d < 0) continue;
      double total = fs.sigma[static_cast<std::size_t>(t)];
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        // Paths using the edge in either orientation.
        double through = 0.0;
        if (fs.dist[static_cast<std::size_t>(u)] >= 0 &&
            ft.dist[static_cast<std::size_t>(v)] >= 0 &&
            fs.dist[static_cast<std::size_t>(u)] + 1 +
                    ft.dist[static_cast<std::size_t>(v)] == d) {
          through += fs.sigma[static_cast<std::size_t>(u)] *
                     ft.sigma[static_cast<std::size_t>(v)];
        }
        if (fs.dist[static_cast<std::size_t>(v)] >= 0 &&
            ft.dist[static_cast<std::size_t>(u)] >= 0 &&
            fs.dist[static_cast<std::size_t>(v)] + 1 +
                    ft.dist[static_cast<std::size_t>(u)] == d) {
          through += fs.sigma[static_cast<std::size_t>(v)] *
                     ft.sigma[static_cast<std::size_t>(u)];
        }
        out[e] += through / total;
      }
    }
  }
  return out;
}

double brute_modularity(const UndirectedGraph& g, const std::vector<int>& labels) {
  const double two_m = 2.0 * static_cast<double>(g.edges.size());
  if (two_m == 0.0) return 0.0;
  std::vector<double> degree(static_cast<std::size_t>(g.n), 0.0);
  std::vector<std::vector<double>> a(
      static_cast<std::size_t>(g.n),
      std::vector<double>(static_cast<std::size_t>(g.n), 0.0));
  for (auto [u, v] : g.edges) {
    a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] += 1.0;
    a[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] += 1.0;
    degree[static_cast<std::size_t>(u)] += 1.0;
    degree[static_cast<std::size_t>(v)] += 1.0;
  }
  double q = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)])
        continue;
      q += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
           degree[static_cast<std::size_t>(i)] * degree[static_cast<std::size_t>(j)] /
               two_m;
    }
  }
  return q / two_m;
}

std::pair<std::vector<int>, double> exhaustive_best_partition(
    const UndirectedGraph& g) {
  std::vector<int> labels(static_cast<std::size_t>(g.n), 0);
  std::vector<int> best_labels = labels;
  double best_q = brute_modularity(g, labels);

  // Restricted growth strings enumerate set partitions exactly once.
  std::vector<int> rgs(static_cast<std::size_t>(g.n), 0);
  for (;;) {
    // advance
    int i = g.n - 1;
    for (; i > 0; --i) {
      int max_prefix = 0;
      for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, rgs[static_cast<std::size_t>(j)]);
      if (rgs[static_cast<std::size_t>(i)] <= max_prefix) break;
    }
    if (i == 0) break;
    ++rgs[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < g.n; ++j) rgs[static_cast<std::size_t>(j)] = 0;

    double q = brute_modularity(g, rgs);
    if (q > best_q + 1e-15) {
      best_q = q;
      best_labels = rgs;
    }
  }
  return {best_labels, best_q};
}

UndirectedGraph two_cliques_with_bridge(int a, int b) {
  UndirectedGraph g;
  g.n = a + b;
  for (int i = 0; i < a; ++i) {
    for (int j = i + 1; j < a; ++j) g.edges.emplace_back(i, j);
  }
  for (int i = 0; i < b; ++i) {
    for (int j = i + 1; j < b; ++j) g.edges.emplace_back(a + i, a + j);
  }
  g.edges.emplace_back(a - 1, a);  // bridge
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

// --- LDA ---------------------------------------------------------------

double exact_marginal_loglik(const std::vector<std::int32_t>& tokens,
                             const std::vector<double>& beta, int num_topics,
                             int vocab_size, double alpha) {
  const std::size_t n = tokens.size();
  double total_p = 0.0;
  std::vector<int> assignment(n, 0);
  const double alpha_sum = alpha * num_topics;
  for (;;) {
    // p(w, z) = prod_n beta[z_n][w_n] * prod_k alpha^(rising m_k) / alpha_sum^(rising n)
    double word_part = 1.0;
    std::vector<int> counts(static_cast<std::size_t>(num_topics), 0);
    for (std::size_t i = 0; i < n; ++i) {
      word_part *= beta[static_cast<std::size_t>(assignment[i]) *
                            static_cast<std::size_t>(vocab_size) +
                        static_cast<std::size_t>(tokens[i])];
      ++counts[static_cast<std::size_t>(assignment[i])];
    }
    double prior = 1.0;
    for (int k = 0; k < num_topics; ++k) {
      for (int j = 0; j < counts[static_cast<std::size_t>(k)]; ++j) {
        prior *= alpha + j;
      }
    }
    for (std::size_t j = 0; j < n; ++j) prior /= alpha_sum + static_cast<double>(j);
    total_p += word_part * prior;

    // next assignment vector
    std::size_t pos = 0;
    while (pos < n) {
      if (++assignment[pos] < num_topics) break;
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return std::log(total_p);
}

PlantedCorpus planted_lda_corpus(int num_topics, int words_per_topic,
                                 int n_documents, int doc_len,
                                 std::uint64_t seed) {
  PlantedCorpus out;
  out.num_topics = num_topics;
  out.vocab_size = num_topics * words_per_topic;
  out.beta.assign(static_cast<std::size_t>(num_topics) * out.vocab_size, 0.0);
  for (int k = 0; k < num_topics; ++k) {
    for (int w = 0; w < words_per_topic; ++w) {
      out.beta[static_cast<std::size_t>(k) * out.vocab_size +
               static_cast<std::size_t>(k * words_per_topic + w)] =
          1.0 / words_per_topic;
    }
  }

  Rng rng(seed);
  for (int d = 0; d < n_documents; ++d) {
    std::vector<double> theta(static_cast<std::size_t>(num_topics));
    double sum = 0.0;
    for (double& x : theta) {
      x = rng.gamma(0.5, 1.0);
      sum += x;
    }
    for (double& x : theta) x /= sum;

    std::map<std::int32_t, std::int32_t> counts;
    for (int i = 0; i < doc_len; ++i) {
      int k = static_cast<int>(rng.discrete(theta));
      int w = k * words_per_topic + static_cast<int>(rng.below(words_per_topic));
      ++counts[w];
    }
    Document doc;
    doc.constitution_id = "doc" + std::to_string(d);
    doc.position = 0;
    doc.counts.assign(counts.begin(), counts.end());
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::vector<double> aligned_topic_cosines(const std::vector<double>& learned,
                                          const std::vector<double>& planted,
                                          int num_topics, int vocab_size) {
  auto cosine = [&](int a, int b) {
    double dot = 0, na = 0, nb = 0;
    for (int w = 0; w < vocab_size; ++w) {
      double x = learned[static_cast<std::size_t>(a) * vocab_size + w];
      double y = planted[static_cast<std::size_t>(b) * vocab_size + w];
      dot += x * y;
      na += x * x;
      nb += y * y;
    }
    return dot / std::sqrt(na * nb);
  };
  std::vector<bool> used_learned(static_cast<std::size_t>(num_topics), false);
  std::vector<bool> used_planted(static_cast<std::size_t>(num_topics), false);
  std::vector<double> result(static_cast<std::size_t>(num_topics), 0.0);
  for (int round = 0; round < num_topics; ++round) {
    int best_a = -1, best_b = -1;
    double best = -1.0;
    for (int a = 0; a < num_topics; ++a) {
      if (used_learned[static_cast<std::size_t>(a)]) continue;
      for (int b = 0; b < num_topics; ++b) {
        if (used_planted[static_cast<std::size_t>(b)]) continue;
        double c = cosine(a, b);
        if (c > best) {
          best = c;
          best_a = a;
          best_b = b;
        }
      }
    }
    used_learned[static_cast<std::size_t>(best_a)] = true;
    used_planted[static_cast<std::size_t>(best_b)] = true;
    result[static_cast<std::size_t>(best_b)] = best;
  }
  return result;
}

// --- planted diffusion ---------------------------------------------------

PlantedNetwork planted_diffusion(int n_nodes, int n_cascades, double alpha_hat,
                                 std::uint64_t seed) {
  Rng rng(seed);
  PlantedNetwork out;
  int year = 1800;
  for (int i = 0; i < n_nodes; ++i) {
    std::string id = "n" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    out.nodes.push_back({id, year});
    year += 2 + static_cast<int>(rng.below(5));
  }

  // Borrowing is temporally proximate: one parent (sometimes two) from the
  // half-dozen nearest predecessors, biased toward the closest. Static
  // node timestamps leave only co-occurrence evidence, so recovery is
  // only well-posed when closeness correlates with parenthood.
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n_nodes));
  for (int j = 1; j < n_nodes; ++j) {
    int want = rng.uniform01() < 0.3 ? 2 : 1;
    std::set<int> chosen;
    for (int tries = 0; tries < 12 && static_cast<int>(chosen.size()) < want;
         ++tries) {
      int back = 1 + static_cast<int>(rng.below(6));
      if (rng.uniform01() < 0.5) back = 1 + static_cast<int>(rng.below(2));
      if (j - back >= 0) chosen.insert(j - back);
    }
    if (chosen.empty()) chosen.insert(j - 1);
    for (int p : chosen) {
      parents[static_cast<std::size_t>(j)].push_back(p);
      out.edges.emplace_back(out.nodes[static_cast<std::size_t>(p)].id,
                             out.nodes[static_cast<std::size_t>(j)].id);
    }
  }

  int made = 0;
  while (made < n_cascades) {
    std::vector<bool> active(static_cast<std::size_t>(n_nodes), false);
    int root = static_cast<int>(rng.below(static_cast<std::uint64_t>(
        std::max(1, n_nodes * 3 / 4))));
    active[static_cast<std::size_t>(root)] = true;
    for (int j = root + 1; j < n_nodes; ++j) {
      for (int p : parents[static_cast<std::size_t>(j)]) {
        if (!active[static_cast<std::size_t>(p)]) continue;
        int dt = out.nodes[static_cast<std::size_t>(j)].year -
                 out.nodes[static_cast<std::size_t>(p)].year;
        if (rng.uniform01() < std::exp(-dt / alpha_hat)) {
          active[static_cast<std::size_t>(j)] = true;
          break;
        }
      }
    }
    Cascade cascade;
    cascade.topic_id = made;
    for (int i = 0; i < n_nodes; ++i) {
      if (active[static_cast<std::size_t>(i)]) {
        cascade.hits.emplace_back(out.nodes[static_cast<std::size_t>(i)].id,
                                  out.nodes[static_cast<std::size_t>(i)].year);
      }
    }
    if (cascade.hits.size() < 2) continue;  // resample trivial cascades
    out.cascades.push_back(std::move(cascade));
    ++made;
  }
  return out;
}

TinyInstance random_tiny_instance(std::uint64_t seed) {
  Rng rng(seed);
  TinyInstance inst;
  int n = 2 + static_cast<int>(rng.below(3));  // 2..4 nodes
  std::vector<int> years;
  for (int i = 0; i < n; ++i) {
    // Mostly distinct years; occasionally a shared year to exercise the
    // strict-predecessor rule.
    int year = 1800 + static_cast<int>(rng.below(8)) * 15;
    years.push_back(year);
  }
  std::sort(years.begin(), years.end());
  for (int i = 0; i < n; ++i) {
    inst.nodes.push_back({"v" + std::to_string(i), years[static_cast<std::size_t>(i)]});
  }
  int n_cascades = 1 + static_cast<int>(rng.below(3));
  for (int c = 0; c < n_cascades; ++c) {
    Cascade cascade;
    cascade.topic_id = c;
    for (int i = 0; i < n; ++i) {
      if (rng.uniform01() < 0.7) {
        cascade.hits.emplace_back(inst.nodes[static_cast<std::size_t>(i)].id,
                                  inst.nodes[static_cast<std::size_t>(i)].year);
      }
    }
    if (cascade.hits.empty()) {
      cascade.hits.emplace_back(inst.nodes[0].id, inst.nodes[0].year);
    }
    inst.cascades.push_back(std::move(cascade));
  }
  inst.cfg.alpha_hat = 10.0 + rng.uniform01() * 90.0;
  inst.cfg.epsilon = 1e-8;
  inst.cfg.k_max = 1 + static_cast<std::int64_t>(rng.below(3));
  inst.cfg.stop_frac = 1.0;
  return inst;
}

// --- misc ------------------------------------------------------------------

double total_variation(const std::vector<std::pair<int, double>>& a,
                       const std::map<int, double>& b) {
  std::map<int, double> merged;
  for (auto [n, p] : a) merged[n] += p;
  for (auto [n, p] : b) merged[n] -= p;
  double tv = 0.0;
  for (auto [n, d] : merged) tv += std::abs(d);
  return tv / 2.0;
}

}  // namespace oracles
