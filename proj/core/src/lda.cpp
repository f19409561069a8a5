#include "ideatrace/lda.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ideatrace/errors.hpp"
#include "ideatrace/rng.hpp"

namespace ideatrace {

void LdaHyperParams::validate() const {
  if (num_topics < 1) throw InvalidHyper("num_topics must be >= 1");
  if (alpha && *alpha <= 0.0) throw InvalidHyper("alpha must be > 0");
  if (eta <= 0.0) throw InvalidHyper("eta must be > 0");
  if (iters < 1) throw InvalidHyper("iters must be >= 1");
  if (effective_burn_in() >= iters) throw InvalidHyper("burn_in must be < iters");
  if (sample_every < 1) throw InvalidHyper("sample_every must be >= 1");
}

std::vector<std::int32_t> expand_tokens(const Document& doc) {
  std::vector<std::int32_t> tokens;
  tokens.reserve(static_cast<std::size_t>(doc.token_total()));
  for (auto [id, count] : doc.counts) {
    for (std::int32_t i = 0; i < count; ++i) tokens.push_back(id);
  }
  return tokens;
}

namespace {

#ifndef NDEBUG
constexpr int kConsistencySpotCheckEvery = 100;
#endif

struct SamplerState {
  int K = 0, V = 0;
  double alpha = 0.0, eta = 0.0;
  std::vector<std::vector<std::int32_t>> docs;  // expanded token ids
  std::vector<std::vector<std::int32_t>> z;
  std::vector<std::int32_t> n_kw;   // K x V
  std::vector<std::int32_t> n_dk;   // D x K
  std::vector<std::int64_t> n_k;    // K

  std::int32_t& kw(int k, std::int32_t w) { return n_kw[std::size_t(k) * V + w]; }
  std::int32_t& dk(std::size_t d, int k) { return n_dk[d * K + k]; }
};

// log p(w | current point estimates); the burn-in monitor.
double train_loglik(const SamplerState& s) {
  double total = 0.0;
  double veta = s.V * s.eta;
  double kalpha = s.K * s.alpha;
  std::vector<double> topic_given_doc(s.K);
  for (std::size_t d = 0; d < s.docs.size(); ++d) {
    double len = static_cast<double>(s.docs[d].size());
    for (int k = 0; k < s.K; ++k) {
      topic_given_doc[k] =
          (s.n_dk[d * s.K + k] + s.alpha) / (len + kalpha);
    }
    for (std::int32_t w : s.docs[d]) {
      double p = 0.0;
      for (int k = 0; k < s.K; ++k) {
        p += topic_given_doc[k] * (s.n_kw[std::size_t(k) * s.V + w] + s.eta) /
             (static_cast<double>(s.n_k[k]) + veta);
      }
      total += std::log(p);
    }
  }
  return total;
}

}  // namespace

TopicModel gibbs_train(const std::vector<Document>& documents, int vocab_size,
                       const LdaHyperParams& hyper) {
  hyper.validate();
  if (documents.empty()) throw InvalidHyper("gibbs_train needs documents");
  if (vocab_size < 1) throw InvalidHyper("vocab_size must be >= 1");

  const int K = hyper.num_topics;
  const int V = vocab_size;
  const double alpha = hyper.effective_alpha();
  const double eta = hyper.eta;
  const double veta = V * eta;
  const std::size_t D = documents.size();

  SamplerState s;
  s.K = K;
  s.V = V;
  s.alpha = alpha;
  s.eta = eta;
  s.docs.reserve(D);
  for (const auto& doc : documents) {
    for (auto [id, count] : doc.counts) {
      if (id < 0 || id >= V) {
        throw UnknownToken("token id " + std::to_string(id) +
                           " outside vocabulary of size " + std::to_string(V));
      }
      (void)count;
    }
    s.docs.push_back(expand_tokens(doc));
  }
  s.n_kw.assign(std::size_t(K) * V, 0);
  s.n_dk.assign(D * K, 0);
  s.n_k.assign(K, 0);

  Rng rng(hyper.seed);
  s.z.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    s.z[d].resize(s.docs[d].size());
    for (std::size_t i = 0; i < s.docs[d].size(); ++i) {
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
      s.z[d][i] = k;
      ++s.kw(k, s.docs[d][i]);
      ++s.dk(d, k);
      ++s.n_k[k];
    }
  }

  const int burn_in = hyper.effective_burn_in();
  std::vector<double> weights(K);
  std::vector<double> theta_acc(D * K, 0.0);
  std::vector<double> beta_acc(std::size_t(K) * V, 0.0);
  int samples = 0;

  TopicModel model;
  const int checkpoint_every = std::max(1, hyper.iters / 20);

  for (int sweep = 1; sweep <= hyper.iters; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      auto& doc = s.docs[d];
      auto& zd = s.z[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::int32_t w = doc[i];
        const int old_k = zd[i];
        --s.kw(old_k, w);
        --s.dk(d, old_k);
        --s.n_k[old_k];
        for (int k = 0; k < K; ++k) {
          weights[k] = (s.n_dk[d * K + k] + alpha) *
                       (s.n_kw[std::size_t(k) * V + w] + eta) /
                       (static_cast<double>(s.n_k[k]) + veta);
        }
        const int new_k = static_cast<int>(rng.discrete(weights));
        zd[i] = new_k;
        ++s.kw(new_k, w);
        ++s.dk(d, new_k);
        ++s.n_k[new_k];
      }
    }

    if (sweep % checkpoint_every == 0 || sweep == hyper.iters) {
      model.train_loglik_checkpoints.emplace_back(sweep, train_loglik(s));
    }

#ifndef NDEBUG
    if (sweep % kConsistencySpotCheckEvery == 0) {
      std::vector<std::int64_t> check_k(static_cast<std::size_t>(K), 0);
      for (std::size_t d = 0; d < D; ++d) {
        for (int z : s.z[d]) ++check_k[static_cast<std::size_t>(z)];
      }
      assert(check_k == s.n_k && "topic totals diverged from assignments");
    }
#endif

    if (sweep > burn_in && (sweep - burn_in - 1) % hyper.sample_every == 0) {
      ++samples;
      for (std::size_t d = 0; d < D; ++d) {
        double len = static_cast<double>(s.docs[d].size());
        for (int k = 0; k < K; ++k) {
          theta_acc[d * K + k] += (s.n_dk[d * K + k] + alpha) / (len + K * alpha);
        }
      }
      for (int k = 0; k < K; ++k) {
        double denom = static_cast<double>(s.n_k[k]) + veta;
        for (int w = 0; w < V; ++w) {
          beta_acc[std::size_t(k) * V + w] +=
              (s.n_kw[std::size_t(k) * V + w] + eta) / denom;
        }
      }
    }
  }

  model.num_topics = K;
  model.vocab_size = V;
  model.alpha = alpha;
  model.eta = eta;
  model.beta.resize(beta_acc.size());
  for (std::size_t i = 0; i < beta_acc.size(); ++i) {
    model.beta[i] = beta_acc[i] / samples;
  }
  model.theta.resize(theta_acc.size());
  for (std::size_t i = 0; i < theta_acc.size(); ++i) {
    model.theta[i] = theta_acc[i] / samples;
  }
  model.assignments = std::move(s.z);
  model.topic_word = std::move(s.n_kw);
  model.doc_topic = std::move(s.n_dk);
  model.topic_total = std::move(s.n_k);
  return model;
}

bool recount_consistent(const TopicModel& model,
                        const std::vector<Document>& documents) {
  const int K = model.num_topics;
  const int V = model.vocab_size;
  if (model.assignments.size() != documents.size()) return false;

  std::vector<std::int32_t> n_kw(std::size_t(K) * V, 0);
  std::vector<std::int32_t> n_dk(documents.size() * K, 0);
  std::vector<std::int64_t> n_k(K, 0);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    auto tokens = expand_tokens(documents[d]);
    if (tokens.size() != model.assignments[d].size()) return false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      int k = model.assignments[d][i];
      if (k < 0 || k >= K) return false;
      ++n_kw[std::size_t(k) * V + tokens[i]];
      ++n_dk[d * K + k];
      ++n_k[k];
    }
  }
  return n_kw == model.topic_word && n_dk == model.doc_topic &&
         n_k == model.topic_total;
}

HeldoutResult heldout_loglik(const TopicModel& model,
                             const std::vector<Document>& documents,
                             int particles, std::uint64_t seed) {
  if (particles < 1) throw InvalidHyper("particles must be >= 1");
  const int K = model.num_topics;
  const double alpha = model.alpha;
  const double kalpha = K * alpha;

  HeldoutResult result;
  Rng rng(seed);
  std::vector<double> weights(K);

  for (const auto& doc : documents) {
    std::vector<std::int32_t> tokens;
    for (std::int32_t t : expand_tokens(doc)) {
      if (t < 0 || t >= model.vocab_size) {
        ++result.skipped_tokens;
      } else {
        tokens.push_back(t);
      }
    }
    if (tokens.empty()) continue;

    const std::size_t N = tokens.size();
    // Per-particle topic history and topic counts.
    std::vector<std::vector<std::int32_t>> z(
        static_cast<std::size_t>(particles));
    std::vector<std::vector<std::int32_t>> n_k(
        static_cast<std::size_t>(particles), std::vector<std::int32_t>(K, 0));

    for (std::size_t n = 0; n < N; ++n) {
      const std::int32_t w = tokens[n];
      double sum_p = 0.0;
      for (int r = 0; r < particles; ++r) {
        auto& zr = z[static_cast<std::size_t>(r)];
        auto& nk = n_k[static_cast<std::size_t>(r)];
        // Refresh the history given everything seen so far.
        for (std::size_t m = 0; m < n; ++m) {
          --nk[zr[m]];
          const std::int32_t wm = tokens[m];
          for (int k = 0; k < K; ++k) {
            weights[k] = (nk[k] + alpha) * model.beta_at(k, wm);
          }
          int knew = static_cast<int>(rng.discrete(weights));
          zr[m] = knew;
          ++nk[knew];
        }
        double p = 0.0;
        for (int k = 0; k < K; ++k) {
          p += model.beta_at(k, w) * (nk[k] + alpha) /
               (static_cast<double>(n) + kalpha);
        }
        sum_p += p;
        for (int k = 0; k < K; ++k) {
          weights[k] = (nk[k] + alpha) * model.beta_at(k, w);
        }
        int kn = static_cast<int>(rng.discrete(weights));
        zr.push_back(kn);
        ++nk[kn];
      }
      result.loglik += std::log(sum_p / particles);
    }
  }
  return result;
}

CrossValidationResult cross_validate(const std::vector<Document>& documents,
                                     int vocab_size,
                                     const std::vector<int>& k_candidates,
                                     int folds, const LdaHyperParams& hyper,
                                     int particles, int threads) {
  if (folds < 2) throw InvalidHyper("folds must be >= 2");
  if (documents.size() < static_cast<std::size_t>(folds)) {
    throw InvalidHyper("need at least as many documents as folds");
  }
  if (k_candidates.empty()) throw InvalidHyper("no candidate K values");

  // Seeded even split: shuffle indices, then deal them round-robin.
  std::vector<std::size_t> order(documents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng fold_rng(substream_seed(hyper.seed, "cv/folds"));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[fold_rng.below(i)]);
  }
  std::vector<int> fold_of(documents.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }

  struct Job {
    int k = 0;
    int fold = 0;
    double loglik = 0.0;
  };
  std::vector<Job> jobs;
  for (int k : k_candidates) {
    for (int f = 0; f < folds; ++f) jobs.push_back({k, f, 0.0});
  }

  auto run_job = [&](Job& job) {
    std::vector<Document> train, test;
    for (std::size_t i = 0; i < documents.size(); ++i) {
      (fold_of[i] == job.fold ? test : train).push_back(documents[i]);
    }
    LdaHyperParams h = hyper;
    h.num_topics = job.k;
    std::string tag = "cv/fold" + std::to_string(job.fold) + "/k" +
                      std::to_string(job.k);
    h.seed = substream_seed(hyper.seed, tag + "/train");
    TopicModel model = gibbs_train(train, vocab_size, h);
    job.loglik = heldout_loglik(model, test, particles,
                                substream_seed(hyper.seed, tag + "/score"))
                     .loglik;
  };

  int workers = std::max(1, threads);
  if (workers == 1) {
    for (auto& job : jobs) run_job(job);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t j = static_cast<std::size_t>(w); j < jobs.size();
             j += static_cast<std::size_t>(workers)) {
          run_job(jobs[j]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  CrossValidationResult result;
  for (const auto& job : jobs) {
    result.cells.push_back({job.k, job.fold, job.loglik});
  }
  for (int k : k_candidates) {
    double total = 0.0;
    for (const auto& job : jobs) {
      if (job.k == k) total += job.loglik;
    }
    result.scores.emplace_back(k, total / folds);
  }
  auto best = result.scores.begin();
  for (auto it = result.scores.begin(); it != result.scores.end(); ++it) {
    if (it->second > best->second ||
        (it->second == best->second && it->first < best->first)) {
      best = it;
    }
  }
  result.selected_k = best->first;
  return result;
}

}  // namespace ideatrace
