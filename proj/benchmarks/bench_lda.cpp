#include <benchmark/benchmark.h>

#include <map>

#include "ideatrace/lda.hpp"
#include "ideatrace/rng.hpp"

namespace {

std::vector<ideatrace::Document> synthetic_documents(int n_docs, int doc_len,
                                                     int vocab, std::uint64_t seed) {
  ideatrace::Rng rng(seed);
  std::vector<ideatrace::Document> docs;
  for (int d = 0; d < n_docs; ++d) {
    std::map<std::int32_t, std::int32_t> counts;
    int block = static_cast<int>(rng.below(5));
    for (int i = 0; i < doc_len; ++i) {
      int w = block * (vocab / 5) + static_cast<int>(rng.below(vocab / 5));
      ++counts[w];
    }
    ideatrace::Document doc;
    doc.constitution_id = "d" + std::to_string(d);
    doc.counts.assign(counts.begin(), counts.end());
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Sweep throughput: tokens resampled per second across a whole training run.
void BM_GibbsTrain(benchmark::State& state) {
  const int n_docs = static_cast<int>(state.range(0));
  const int doc_len = 200;
  const int vocab = 500;
  auto docs = synthetic_documents(n_docs, doc_len, vocab, 11);

  ideatrace::LdaHyperParams hyper;
  hyper.num_topics = 10;
  hyper.iters = 20;
  hyper.burn_in = 10;
  hyper.sample_every = 5;
  hyper.seed = 3;

  for (auto _ : state) {
    benchmark::DoNotOptimize(ideatrace::gibbs_train(docs, vocab, hyper));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_docs) *
                          doc_len * hyper.iters);
}
BENCHMARK(BM_GibbsTrain)->Arg(20)->Arg(80);

void BM_HeldoutLeftToRight(benchmark::State& state) {
  const int vocab = 200;
  auto train = synthetic_documents(30, 150, vocab, 21);
  auto test = synthetic_documents(4, 100, vocab, 22);

  ideatrace::LdaHyperParams hyper;
  hyper.num_topics = 8;
  hyper.iters = 30;
  hyper.seed = 5;
  auto model = ideatrace::gibbs_train(train, vocab, hyper);

  for (auto _ : state) {
    benchmark::DoNotOptimize(ideatrace::heldout_loglik(model, test, 10, 9));
  }
  state.SetItemsProcessed(state.iterations() * 4 * 100);
}
BENCHMARK(BM_HeldoutLeftToRight);

}  // namespace
