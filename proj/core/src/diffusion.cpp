#include "ideatrace/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "ideatrace/errors.hpp"

namespace ideatrace {

void DiffusionConfig::validate() const {
  if (!(alpha_hat > 0.0)) throw ConfigError("diffusion.alpha_hat must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("diffusion.epsilon must be in (0, 1)");
  }
  if (!(stop_frac > 0.0 && stop_frac <= 1.0)) {
    throw ConfigError("diffusion.stop_frac must be in (0, 1]");
  }
  if (k_max < 0) throw ConfigError("diffusion.k_max must be >= 0");
}

std::int32_t DiffusionNetwork::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<std::int32_t>(i);
  }
  return -1;
}

double transmission_prob(int t_i, int t_j, double alpha_hat) {
  if (!(alpha_hat > 0.0)) throw ConfigError("alpha_hat must be > 0");
  if (t_j <= t_i) {
    throw TimeOrderViolation("transmission requires t_j > t_i (got " +
                             std::to_string(t_i) + " -> " + std::to_string(t_j) + ")");
  }
  return std::exp(-static_cast<double>(t_j - t_i) / alpha_hat);
}

namespace {

inline std::uint64_t edge_key(std::int32_t src, std::int32_t dst) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 32) |
         static_cast<std::uint32_t>(dst);
}

inline double log_prob(int t_i, int t_j, double alpha_hat) {
  return -static_cast<double>(t_j - t_i) / alpha_hat;
}

std::unordered_map<std::string, std::int32_t> node_index(
    const std::vector<NetworkNode>& nodes) {
  std::unordered_map<std::string, std::int32_t> index;
  index.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index.emplace(nodes[i].id, static_cast<std::int32_t>(i));
  }
  return index;
}

std::unordered_set<std::uint64_t> edge_set(const DiffusionNetwork& g) {
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) edges.insert(edge_key(e.src, e.dst));
  return edges;
}

// Best log-weight of any parent for hit j of the cascade, or 0 with
// found=false when the hit has no strictly earlier hit.
double best_parent_logw(const Cascade& c, std::size_t j,
                        const std::unordered_map<std::string, std::int32_t>& index,
                        const std::unordered_set<std::uint64_t>& in_g,
                        const DiffusionConfig& cfg, bool& found) {
  const double log_eps = std::log(cfg.epsilon);
  const auto& [id_j, year_j] = c.hits[j];
  auto it_j = index.find(id_j);
  double best = 0.0;
  found = false;
  for (std::size_t i = 0; i < c.hits.size(); ++i) {
    const auto& [id_i, year_i] = c.hits[i];
    if (year_i >= year_j) continue;
    double logw = log_prob(year_i, year_j, cfg.alpha_hat);
    auto it_i = index.find(id_i);
    bool in_graph = it_i != index.end() && it_j != index.end() &&
                    in_g.count(edge_key(it_i->second, it_j->second)) != 0;
    if (!in_graph) logw += log_eps;
    if (!found || logw > best) {
      best = logw;
      found = true;
    }
  }
  return best;
}

}  // namespace

double best_tree_loglik(const Cascade& cascade, const DiffusionNetwork& g,
                        const DiffusionConfig& cfg) {
  cfg.validate();
  if (cascade.hits.empty()) {
    throw DomainError("best_tree_loglik needs a non-empty cascade");
  }
  auto index = node_index(g.nodes);
  auto in_g = edge_set(g);
  double total = 0.0;
  for (std::size_t j = 0; j < cascade.hits.size(); ++j) {
    bool found = false;
    double logw = best_parent_logw(cascade, j, index, in_g, cfg, found);
    if (found) total += logw;
  }
  return total;
}

double marginal_gain(const NetworkNode& src, const NetworkNode& dst,
                     const DiffusionNetwork& g,
                     const std::vector<Cascade>& cascades,
                     const DiffusionConfig& cfg) {
  cfg.validate();
  if (dst.year <= src.year) {
    throw TimeOrderViolation("edge must run from earlier to strictly later year");
  }
  auto index = node_index(g.nodes);
  auto in_g = edge_set(g);
  const double lp = log_prob(src.year, dst.year, cfg.alpha_hat);

  double gain = 0.0;
  for (const auto& c : cascades) {
    bool has_src = false, has_dst = false;
    std::size_t j = 0;
    for (std::size_t i = 0; i < c.hits.size(); ++i) {
      if (c.hits[i].first == src.id && c.hits[i].second == src.year) has_src = true;
      if (c.hits[i].first == dst.id && c.hits[i].second == dst.year) {
        has_dst = true;
        j = i;
      }
    }
    if (!has_src || !has_dst) continue;
    bool found = false;
    double current = best_parent_logw(c, j, index, in_g, cfg, found);
    double improved = found ? std::max(current, lp) : lp;
    gain += improved - (found ? current : lp);
  }
  return gain;
}

DiffusionNetwork greedy_infer(const std::vector<Cascade>& cascades,
                              const DiffusionConfig& cfg,
                              std::vector<NetworkNode> universe) {
  cfg.validate();

  DiffusionNetwork g;
  if (universe.empty()) {
    std::map<std::string, int> seen;
    for (const auto& c : cascades) {
      for (const auto& [id, year] : c.hits) seen.emplace(id, year);
    }
    for (const auto& [id, year] : seen) g.nodes.push_back({id, year});
  } else {
    g.nodes = std::move(universe);
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.id) < std::tie(b.year, b.id);
  });
  if (g.nodes.empty()) return g;

  auto index = node_index(g.nodes);
  const double log_eps = std::log(cfg.epsilon);
  const std::int64_t budget = cfg.effective_k_max(g.nodes.size());

  // Cascade hits as node indices; node index order is (year, id) order.
  struct Hit {
    std::int32_t node;
    int year;
  };
  std::vector<std::vector<Hit>> hits(cascades.size());
  for (std::size_t c = 0; c < cascades.size(); ++c) {
    hits[c].reserve(cascades[c].hits.size());
    for (const auto& [id, year] : cascades[c].hits) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw ConfigError("cascade hit '" + id + "' missing from node universe");
      }
      if (g.nodes[static_cast<std::size_t>(it->second)].year != year) {
        throw ConfigError("cascade hit '" + id + "' disagrees with node year");
      }
      hits[c].push_back({it->second, year});
    }
  }

  // Current best parent log-weight per (cascade, non-root hit).
  std::vector<std::vector<double>> best_logw(cascades.size());
  // Candidate edges and the (cascade, hit slot) demands they can serve.
  struct Demand {
    std::int32_t cascade;
    std::int32_t slot;
  };
  struct Candidate {
    std::int32_t src, dst;
    double lp;  // log transmission probability
    std::vector<Demand> demands;
  };
  std::unordered_map<std::uint64_t, Candidate> candidates;

  for (std::size_t c = 0; c < cascades.size(); ++c) {
    best_logw[c].assign(hits[c].size(), 0.0);
    for (std::size_t j = 0; j < hits[c].size(); ++j) {
      double best = 0.0;
      bool found = false;
      for (std::size_t i = 0; i < hits[c].size(); ++i) {
        if (hits[c][i].year >= hits[c][j].year) continue;
        double lp = log_prob(hits[c][i].year, hits[c][j].year, cfg.alpha_hat);
        if (!found || lp > best) {
          best = lp;
          found = true;
        }
        auto key = edge_key(hits[c][i].node, hits[c][j].node);
        auto [it, inserted] = candidates.try_emplace(key);
        if (inserted) {
          it->second.src = hits[c][i].node;
          it->second.dst = hits[c][j].node;
          it->second.lp = lp;
        }
        it->second.demands.push_back({static_cast<std::int32_t>(c),
                                      static_cast<std::int32_t>(j)});
      }
      best_logw[c][j] = found ? best + log_eps : 0.0;  // unused for roots
    }
  }

  auto fresh_gain = [&](const Candidate& cand) {
    double gain = 0.0;
    for (const auto& d : cand.demands) {
      double diff = cand.lp - best_logw[d.cascade][d.slot];
      if (diff > 0.0) gain += diff;
    }
    return gain;
  };

  // Lazy greedy: a binary heap of cached gains, re-evaluating an entry
  // only when it reaches the top.
  struct HeapEntry {
    double gain;
    std::int32_t src, dst;
    std::int64_t round;
  };
  auto heap_less = [](const HeapEntry& a, const HeapEntry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.src != b.src) return a.src > b.src;
    return a.dst > b.dst;
  };
  std::vector<HeapEntry> heap;
  heap.reserve(candidates.size());
  for (const auto& [key, cand] : candidates) {
    heap.push_back({fresh_gain(cand), cand.src, cand.dst, 0});
  }
  std::make_heap(heap.begin(), heap.end(), heap_less);

  double objective = 0.0;  // improvement over the empty graph
  double last_gain = 0.0;
  std::int64_t round = 0;

  while (static_cast<std::int64_t>(g.edges.size()) < budget && !heap.empty()) {
    // Running upper bound from the cached (stale-high) gains.
    {
      std::int64_t remaining = budget - static_cast<std::int64_t>(g.edges.size());
      std::vector<double> gains;
      gains.reserve(heap.size());
      for (const auto& e : heap) gains.push_back(e.gain);
      std::size_t top = std::min<std::size_t>(gains.size(),
                                              static_cast<std::size_t>(remaining));
      std::partial_sort(gains.begin(), gains.begin() + top, gains.end(),
                        std::greater<double>());
      double ub = objective;
      for (std::size_t i = 0; i < top; ++i) ub += std::max(0.0, gains[i]);
      if (objective >= cfg.stop_frac * ub) break;
    }

    ++round;
    HeapEntry accepted{};
    bool have = false;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), heap_less);
      HeapEntry top = heap.back();
      heap.pop_back();
      if (top.round == round) {
        accepted = top;
        have = true;
        break;
      }
      top.gain = fresh_gain(candidates.at(edge_key(top.src, top.dst)));
      top.round = round;
      heap.push_back(top);
      std::push_heap(heap.begin(), heap.end(), heap_less);
    }
    if (!have || accepted.gain <= 0.0) break;

    if (!g.edges.empty() && accepted.gain > last_gain) {
      throw Error("submodularity violated: accepted gain increased");
    }
    last_gain = accepted.gain;
    objective += accepted.gain;
    g.edges.push_back({accepted.src, accepted.dst, accepted.gain});

    const auto& cand = candidates.at(edge_key(accepted.src, accepted.dst));
    for (const auto& d : cand.demands) {
      if (cand.lp > best_logw[d.cascade][d.slot]) {
        best_logw[d.cascade][d.slot] = cand.lp;
      }
    }
  }

  return g;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nan("");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TauSweepResult tau_sweep(const std::vector<ConstitutionMixture>& mixtures,
                         const std::vector<double>& tau_grid,
                         const CascadeConfig& cascade_cfg,
                         const DiffusionConfig& cfg, int threads) {
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 0.0 && tau_grid[i] <= 0.8)) {
      throw ConfigError("sweep tau values must lie in [0, 0.8]");
    }
    if (i > 0 && tau_grid[i] < tau_grid[i - 1]) {
      throw ConfigError("sweep tau grid must be sorted ascending");
    }
  }

  std::vector<NetworkNode> universe;
  universe.reserve(mixtures.size());
  for (const auto& m : mixtures) universe.push_back({m.constitution_id, m.year});

  const std::size_t n_tau = tau_grid.size();
  const std::size_t n_nodes = universe.size();
  std::vector<std::vector<double>> indeg(n_tau), outdeg(n_tau);
  std::vector<std::int64_t> edge_counts(n_tau, 0);

  auto run_tau = [&](std::size_t t) {
    CascadeConfig cc = cascade_cfg;
    cc.tau = tau_grid[t];
    auto cascades = extract_cascades(mixtures, cc);
    auto net = greedy_infer(cascades, cfg, universe);
    indeg[t].assign(n_nodes, 0.0);
    outdeg[t].assign(n_nodes, 0.0);
    for (const auto& e : net.edges) {
      outdeg[t][static_cast<std::size_t>(e.src)] += 1.0;
      indeg[t][static_cast<std::size_t>(e.dst)] += 1.0;
    }
    edge_counts[t] = static_cast<std::int64_t>(net.edges.size());
  };

  int workers = std::max(1, threads);
  if (workers == 1 || n_tau <= 1) {
    for (std::size_t t = 0; t < n_tau; ++t) run_tau(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = static_cast<std::size_t>(w); t < n_tau;
             t += static_cast<std::size_t>(workers)) {
          run_tau(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  TauSweepResult result;
  result.points.resize(n_tau);
  for (std::size_t t = 0; t < n_tau; ++t) {
    auto& p = result.points[t];
    p.tau = tau_grid[t];
    p.n_edges = edge_counts[t];
    auto stats = [&](const std::vector<double>& v, double& mean, double& sd) {
      mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      sd = 0.0;
      for (double x : v) sd += (x - mean) * (x - mean);
      sd = std::sqrt(sd / static_cast<double>(v.size()));
    };
    stats(indeg[t], p.mean_indegree, p.std_indegree);
    stats(outdeg[t], p.mean_outdegree, p.std_outdegree);
  }

  result.corr_in.assign(n_tau, std::vector<double>(n_tau, 0.0));
  result.corr_out.assign(n_tau, std::vector<double>(n_tau, 0.0));
  for (std::size_t a = 0; a < n_tau; ++a) {
    for (std::size_t b = 0; b < n_tau; ++b) {
      if (a == b) {
        result.corr_in[a][b] = 1.0;
        result.corr_out[a][b] = 1.0;
      } else {
        result.corr_in[a][b] = pearson(indeg[a], indeg[b]);
        result.corr_out[a][b] = pearson(outdeg[a], outdeg[b]);
      }
    }
  }
  return result;
}

}  // namespace ideatrace
