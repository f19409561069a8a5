#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ideatrace/corpus.hpp"

namespace ideatrace {

struct LdaHyperParams {
  int num_topics = 100;
  std::optional<double> alpha;  // document-topic concentration; default 50/K
  double eta = 0.01;            // topic-word concentration
  int iters = 10000;
  int burn_in = -1;      // sweeps discarded; default iters/5
  int sample_every = 10; // posterior samples taken every this many sweeps
  std::uint64_t seed = 0;

  double effective_alpha() const {
    return alpha ? *alpha : 50.0 / static_cast<double>(num_topics);
  }
  int effective_burn_in() const { return burn_in >= 0 ? burn_in : iters / 5; }
  void validate() const;  // throws InvalidHyper
};

struct TopicModel {
  int num_topics = 0;
  int vocab_size = 0;
  double alpha = 0.0;
  double eta = 0.0;

  std::vector<double> beta;   // K x V, row-major; rows sum to 1
  std::vector<double> theta;  // D x K, row-major; rows sum to 1

  // Final-sweep sampler state. Assignments align with expand_tokens().
  std::vector<std::vector<std::int32_t>> assignments;
  std::vector<std::int32_t> topic_word;  // K x V
  std::vector<std::int32_t> doc_topic;   // D x K
  std::vector<std::int64_t> topic_total; // K

  // In-sample log-likelihood under the current point estimates, recorded
  // at ~20 evenly spaced sweeps; used to monitor burn-in.
  std::vector<std::pair<int, double>> train_loglik_checkpoints;

  double beta_at(int k, int w) const { return beta[std::size_t(k) * vocab_size + w]; }
  double theta_at(int d, int k) const { return theta[std::size_t(d) * num_topics + k]; }
};

// Document token ids in ascending-id order, each repeated by its count.
// The bag-of-words model is exchangeable, so any fixed order works; this
// one makes sampler runs reproducible.
std::vector<std::int32_t> expand_tokens(const Document& doc);

// Collapsed Gibbs sampler with the standard conditional
//   p(z = k | rest) prop-to (n_dk + alpha) (n_kw + eta) / (n_k + V eta).
// theta and beta are means of the per-sample posterior-mean estimates
// taken every sample_every sweeps after burn-in.
TopicModel gibbs_train(const std::vector<Document>& documents, int vocab_size,
                       const LdaHyperParams& hyper);

// Re-derives the count tables from the stored assignments and compares.
bool recount_consistent(const TopicModel& model,
                        const std::vector<Document>& documents);

struct HeldoutResult {
  double loglik = 0.0;
  std::int64_t skipped_tokens = 0;  // out-of-vocabulary occurrences
};

// Left-to-right sequential estimator of log p(W | beta, alpha) with
// `particles` particles per document. Tokens outside the model vocabulary
// are skipped and counted.
HeldoutResult heldout_loglik(const TopicModel& model,
                             const std::vector<Document>& documents,
                             int particles = 20, std::uint64_t seed = 0);

struct CrossValidationResult {
  int selected_k = 0;
  // One entry per candidate K: mean over folds of the fold's total
  // held-out log-likelihood.
  std::vector<std::pair<int, double>> scores;

  struct Cell {
    int k = 0;
    int fold = 0;
    double loglik = 0.0;
  };
  std::vector<Cell> cells;  // per (K, fold), candidate-major order
};

// Deterministic seeded fold split; train on folds-1 parts, score the rest,
// pick the K with the highest summed held-out log-likelihood (ties go to
// the smaller K). Fold x candidate jobs run on `threads` workers.
CrossValidationResult cross_validate(const std::vector<Document>& documents,
                                     int vocab_size,
                                     const std::vector<int>& k_candidates,
                                     int folds, const LdaHyperParams& hyper,
                                     int particles = 20, int threads = 1);

}  // namespace ideatrace
