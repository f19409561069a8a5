#include <benchmark/benchmark.h>

#include <cmath>
#include <set>

#include "ideatrace/diffusion.hpp"
#include "ideatrace/rng.hpp"

namespace {

struct Instance {
  std::vector<ideatrace::NetworkNode> nodes;
  std::vector<ideatrace::Cascade> cascades;
};

Instance planted_instance(int n_nodes, int n_cascades, std::uint64_t seed) {
  ideatrace::Rng rng(seed);
  Instance inst;
  int year = 1800;
  for (int i = 0; i < n_nodes; ++i) {
    inst.nodes.push_back({"n" + std::to_string(i), year});
    year += 2 + static_cast<int>(rng.below(5));
  }
  std::vector<int> parent(static_cast<std::size_t>(n_nodes), -1);
  for (int j = 1; j < n_nodes; ++j) {
    parent[static_cast<std::size_t>(j)] = j - 1 - static_cast<int>(rng.below(std::min(j, 4)));
  }
  for (int c = 0; c < n_cascades; ++c) {
    std::vector<bool> active(static_cast<std::size_t>(n_nodes), false);
    active[rng.below(static_cast<std::uint64_t>(n_nodes / 2))] = true;
    ideatrace::Cascade cascade;
    cascade.topic_id = c;
    for (int j = 0; j < n_nodes; ++j) {
      int p = parent[static_cast<std::size_t>(j)];
      if (p >= 0 && active[static_cast<std::size_t>(p)] && rng.uniform01() < 0.6) {
        active[static_cast<std::size_t>(j)] = true;
      }
      if (active[static_cast<std::size_t>(j)]) {
        cascade.hits.emplace_back(inst.nodes[static_cast<std::size_t>(j)].id,
                                  inst.nodes[static_cast<std::size_t>(j)].year);
      }
    }
    if (cascade.hits.size() >= 2) inst.cascades.push_back(std::move(cascade));
  }
  return inst;
}

void BM_GreedyInfer(benchmark::State& state) {
  auto inst = planted_instance(static_cast<int>(state.range(0)), 100, 17);
  ideatrace::DiffusionConfig cfg;
  cfg.alpha_hat = 25.0;
  cfg.stop_frac = 0.85;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideatrace::greedy_infer(inst.cascades, cfg, inst.nodes));
  }
}
BENCHMARK(BM_GreedyInfer)->Arg(50)->Arg(150);

void BM_BestTreeLoglik(benchmark::State& state) {
  auto inst = planted_instance(100, 30, 23);
  ideatrace::DiffusionConfig cfg;
  cfg.alpha_hat = 25.0;
  ideatrace::DiffusionNetwork g = ideatrace::greedy_infer(inst.cascades, cfg, inst.nodes);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ideatrace::best_tree_loglik(inst.cascades[i], g, cfg));
    i = (i + 1) % inst.cascades.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BestTreeLoglik);

}  // namespace
