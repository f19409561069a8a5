#pragma once

// Independent reference implementations used as test oracles. Everything
// here recomputes results from first principles (exhaustive enumeration,
// brute-force scans, direct formula evaluation) through public library
// types only, so a bug in a fast path cannot hide in its own oracle.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ideatrace/cascade.hpp"
#include "ideatrace/community.hpp"
#include "ideatrace/corpus.hpp"
#include "ideatrace/diffusion.hpp"

namespace oracles {

// --- diffusion -------------------------------------------------------------

// Objective F(G): sum of best-propagation-tree log-likelihoods.
double network_objective(const std::vector<ideatrace::Cascade>& cascades,
                         const ideatrace::DiffusionNetwork& g,
                         const ideatrace::DiffusionConfig& cfg);

// Greedy selection with full re-evaluation of every candidate each round
// (no lazy queue), using only from-scratch public evaluations. Tie-break:
// (src year, src id, dst year, dst id).
ideatrace::DiffusionNetwork naive_greedy_infer(
    const std::vector<ideatrace::Cascade>& cascades,
    const ideatrace::DiffusionConfig& cfg,
    std::vector<ideatrace::NetworkNode> universe);

// Best objective over every time-respecting candidate edge subset of size
// <= k_max. Exponential; for tiny instances only.
double exhaustive_best_objective(const std::vector<ideatrace::Cascade>& cascades,
                                 const ideatrace::DiffusionConfig& cfg,
                                 const std::vector<ideatrace::NetworkNode>& universe);

// --- graphs ----------------------------------------------------------------

// Edge betweenness by explicit shortest-path counting over ordered pairs.
std::vector<double> brute_edge_betweenness(const ideatrace::UndirectedGraph& g);

// Direct-formula modularity: (1/2m) sum_ij (A_ij - k_i k_j / 2m) [c_i = c_j].
double brute_modularity(const ideatrace::UndirectedGraph& g,
                        const std::vector<int>& labels);

// Exhaustive best-modularity partition (Bell-number enumeration, n <= 12).
std::pair<std::vector<int>, double> exhaustive_best_partition(
    const ideatrace::UndirectedGraph& g);

// Two cliques of the given sizes joined by a single bridge edge.
ideatrace::UndirectedGraph two_cliques_with_bridge(int a, int b);

// --- LDA -------------------------------------------------------------------

// Exact log p(w | beta, alpha) for one short document by enumerating all
// K^N topic assignments and integrating theta analytically.
double exact_marginal_loglik(const std::vector<std::int32_t>& tokens,
                             const std::vector<double>& beta, int num_topics,
                             int vocab_size, double alpha);

struct PlantedCorpus {
  std::vector<ideatrace::Document> documents;
  std::vector<double> beta;  // K x V planted topic-word distributions
  int num_topics = 0;
  int vocab_size = 0;
};

// Topics own disjoint vocabulary blocks; documents mix topics from a
// symmetric Dirichlet.
PlantedCorpus planted_lda_corpus(int num_topics, int words_per_topic,
                                 int n_documents, int doc_len,
                                 std::uint64_t seed);

// Greedy cosine matching of learned rows to planted rows; returns the
// matched cosine per planted topic.
std::vector<double> aligned_topic_cosines(const std::vector<double>& learned,
                                          const std::vector<double>& planted,
                                          int num_topics, int vocab_size);

// --- planted diffusion -----------------------------------------------------

struct PlantedNetwork {
  std::vector<ideatrace::NetworkNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // (src id, dst id)
  std::vector<ideatrace::Cascade> cascades;
};

// Random time-respecting parent graph plus cascades simulated by per-edge
// transmission with probability exp(-dt / alpha_hat).
PlantedNetwork planted_diffusion(int n_nodes, int n_cascades, double alpha_hat,
                                 std::uint64_t seed);

// Random tiny instance for exhaustive comparison.
struct TinyInstance {
  std::vector<ideatrace::NetworkNode> nodes;
  std::vector<ideatrace::Cascade> cascades;
  ideatrace::DiffusionConfig cfg;
};
TinyInstance random_tiny_instance(std::uint64_t seed);

// --- misc ------------------------------------------------------------------

double total_variation(const std::vector<std::pair<int, double>>& a,
                       const std::map<int, double>& b);

}  // namespace oracles
