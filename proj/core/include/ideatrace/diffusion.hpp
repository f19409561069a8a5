#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ideatrace/cascade.hpp"

namespace ideatrace {

struct DiffusionConfig {
  double alpha_hat = 1.0;   // diffusion time scale, in years
  double epsilon = 1e-8;    // transmission mass of non-selected edges
  std::int64_t k_max = 0;   // edge budget; 0 means 10 * number of nodes
  double stop_frac = 0.85;  // stop when the objective reaches this fraction
                            // of the running submodular upper bound

  void validate() const;
  std::int64_t effective_k_max(std::size_t n_nodes) const {
    return k_max > 0 ? k_max : static_cast<std::int64_t>(n_nodes) * 10;
  }
};

struct NetworkNode {
  std::string id;
  int year = 0;
};

struct NetworkEdge {
  std::int32_t src = 0;  // indices into DiffusionNetwork::nodes
  std::int32_t dst = 0;
  double gain = 0.0;     // total log-likelihood gain at insertion
};

// Time-respecting directed graph: every edge satisfies
// year(src) < year(dst). Nodes are sorted by (year, id), so index order is
// chronological order. Edges appear in insertion order.
struct DiffusionNetwork {
  std::vector<NetworkNode> nodes;
  std::vector<NetworkEdge> edges;

  std::int32_t index_of(const std::string& id) const;  // -1 if absent
};

// exp(-(t_j - t_i) / alpha_hat); throws TimeOrderViolation unless t_j > t_i.
double transmission_prob(int t_i, int t_j, double alpha_hat);

// Log-likelihood of the best propagation tree explaining the cascade under
// network G: every hit with at least one strictly earlier hit picks the
// parent maximizing its edge weight, where in-G edges carry the full
// transmission probability and all others carry epsilon times it. Hits
// with no earlier hit are roots and contribute zero.
double best_tree_loglik(const Cascade& cascade, const DiffusionNetwork& g,
                        const DiffusionConfig& cfg);

// Total increase of best_tree_loglik over all cascades if the edge
// (src, dst) were added to g. Never negative.
double marginal_gain(const NetworkNode& src, const NetworkNode& dst,
                     const DiffusionNetwork& g,
                     const std::vector<Cascade>& cascades,
                     const DiffusionConfig& cfg);

// Lazy-greedy (priority queue) edge selection over all time-respecting
// pairs co-occurring in at least one cascade. Stops at the edge budget,
// when no candidate improves the objective, or when the objective reaches
// stop_frac of the running upper bound
//   UB_i = F(G_i) + sum of the (k_max - i) largest cached gains.
// Ties are broken by (src year, src id, dst year, dst id). The sequence of
// accepted gains is checked to be non-increasing.
//
// `universe` optionally fixes the node set (isolated constitutions
// included); by default nodes are the union of cascade hits.
DiffusionNetwork greedy_infer(const std::vector<Cascade>& cascades,
                              const DiffusionConfig& cfg,
                              std::vector<NetworkNode> universe = {});

struct TauSweepPoint {
  double tau = 0.0;
  std::int64_t n_edges = 0;
  double mean_indegree = 0.0, std_indegree = 0.0;
  double mean_outdegree = 0.0, std_outdegree = 0.0;
};

struct TauSweepResult {
  std::vector<TauSweepPoint> points;
  // Pearson correlation of year-ordered degree vectors between tau pairs.
  // Diagonals are exactly 1; undefined entries (zero variance) are NaN.
  std::vector<std::vector<double>> corr_in;
  std::vector<std::vector<double>> corr_out;
};

// Runs extract_cascades + greedy_infer for every tau in the sorted grid
// (all within [0, 0.8]) over the constitutions of `mixtures`.
TauSweepResult tau_sweep(const std::vector<ConstitutionMixture>& mixtures,
                         const std::vector<double>& tau_grid,
                         const CascadeConfig& cascade_cfg,
                         const DiffusionConfig& cfg, int threads = 1);

}  // namespace ideatrace
