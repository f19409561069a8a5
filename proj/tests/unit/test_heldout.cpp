#include <doctest.h>

#include <cmath>

#include "ideatrace/lda.hpp"
#include "oracles.hpp"

using namespace ideatrace;

namespace {

TopicModel model_from_beta(std::vector<double> beta, int k, int v, double alpha) {
  TopicModel m;
  m.num_topics = k;
  m.vocab_size = v;
  m.alpha = alpha;
  m.eta = 0.01;
  m.beta = std::move(beta);
  return m;
}

Document doc_of(std::vector<std::pair<std::int32_t, std::int32_t>> counts) {
  Document d;
  d.constitution_id = "t";
  d.counts = std::move(counts);
  return d;
}

}  // namespace

TEST_CASE("heldout_loglik: empty test set scores zero") {
  auto model = model_from_beta({0.5, 0.5, 0.5, 0.5}, 2, 2, 0.5);
  auto res = heldout_loglik(model, {}, 10, 1);
  CHECK(res.loglik == 0.0);
  CHECK(res.skipped_tokens == 0);
}

TEST_CASE("heldout_loglik: single-word vocabulary is certain") {
  auto model = model_from_beta({1.0, 1.0}, 2, 1, 0.7);
  auto res = heldout_loglik(model, {doc_of({{0, 5}})}, 10, 1);
  CHECK(std::abs(res.loglik) < 1e-9);
}

TEST_CASE("heldout_loglik: out-of-vocabulary tokens are skipped and counted") {
  auto model = model_from_beta({1.0, 1.0}, 2, 1, 0.7);
  auto res = heldout_loglik(model, {doc_of({{0, 2}, {6, 3}})}, 10, 1);
  CHECK(res.skipped_tokens == 3);
  CHECK(std::abs(res.loglik) < 1e-9);
}

TEST_CASE("heldout_loglik: matches exhaustive enumeration on tiny instances") {
  // K=2, V=3, two-token document.
  {
    std::vector<double> beta = {0.7, 0.2, 0.1, 0.1, 0.3, 0.6};
    auto model = model_from_beta(beta, 2, 3, 0.8);
    std::vector<std::int32_t> tokens = {0, 2};
    double exact = oracles::exact_marginal_loglik(tokens, beta, 2, 3, 0.8);
    auto est = heldout_loglik(model, {doc_of({{0, 1}, {2, 1}})}, 2000, 42);
    CHECK(std::abs(est.loglik - exact) <= 0.05);
  }
  // K=2, V=4, three-token document with a repeat.
  {
    std::vector<double> beta = {0.4, 0.3, 0.2, 0.1, 0.05, 0.15, 0.35, 0.45};
    auto model = model_from_beta(beta, 2, 4, 0.4);
    std::vector<std::int32_t> tokens = {1, 1, 3};
    double exact = oracles::exact_marginal_loglik(tokens, beta, 2, 4, 0.4);
    auto est = heldout_loglik(model, {doc_of({{1, 2}, {3, 1}})}, 2000, 43);
    CHECK(std::abs(est.loglik - exact) <= 0.05);
  }
}

TEST_CASE("heldout_loglik: deterministic under a fixed seed") {
  std::vector<double> beta = {0.6, 0.3, 0.1, 0.2, 0.3, 0.5};
  auto model = model_from_beta(beta, 2, 3, 0.5);
  std::vector<Document> docs{doc_of({{0, 2}, {1, 1}, {2, 2}})};
  auto a = heldout_loglik(model, docs, 50, 7);
  auto b = heldout_loglik(model, docs, 50, 7);
  CHECK(a.loglik == b.loglik);
}

TEST_CASE("cross_validate: singleton candidate list") {
  auto corpus = oracles::planted_lda_corpus(3, 10, 15, 40, 77);
  LdaHyperParams h;
  h.iters = 30;
  h.seed = 5;
  auto res = cross_validate(corpus.documents, corpus.vocab_size, {7}, 3, h, 5, 1);
  CHECK(res.selected_k == 7);
  REQUIRE(res.scores.size() == 1);
  CHECK(res.cells.size() == 3);
}

TEST_CASE("cross_validate: deterministic and thread-count independent") {
  auto corpus = oracles::planted_lda_corpus(2, 8, 12, 30, 78);
  LdaHyperParams h;
  h.iters = 25;
  h.seed = 11;
  auto a = cross_validate(corpus.documents, corpus.vocab_size, {2, 3}, 3, h, 4, 1);
  auto b = cross_validate(corpus.documents, corpus.vocab_size, {2, 3}, 3, h, 4, 3);
  CHECK(a.selected_k == b.selected_k);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    CHECK(a.scores[i].second == b.scores[i].second);
  }
}
