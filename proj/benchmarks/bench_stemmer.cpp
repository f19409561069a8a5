#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ideatrace/corpus.hpp"
#include "ideatrace/rng.hpp"
#include "ideatrace/stemmer.hpp"

namespace {

std::vector<std::string> sample_words() {
  return {
      "constitution", "constitutional", "amendments",   "sovereignty",
      "parliamentary", "ratification",  "proportional", "independence",
      "jurisdiction",  "felicity",      "nationalization", "running",
      "generously",    "communities",   "established",  "judiciary",
      "legislatures",  "provisions",    "territories",  "emergency",
  };
}

void BM_StemEnglish(benchmark::State& state) {
  auto words = sample_words();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideatrace::stem_english(words[i]));
    i = (i + 1) % words.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StemEnglish);

void BM_TokenizeAndStem(benchmark::State& state) {
  ideatrace::Rng rng(7);
  auto words = sample_words();
  std::string text;
  for (int i = 0; i < 5000; ++i) {
    text += words[rng.below(words.size())];
    text += (i % 11 == 10) ? ". " : " ";
  }
  const auto& stopwords = ideatrace::english_stopwords();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideatrace::tokenize_and_stem(text, stopwords));
  }
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_TokenizeAndStem);

}  // namespace
