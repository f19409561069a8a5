#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ideatrace/diffusion.hpp"

namespace ideatrace {

// Simple undirected graph on nodes 0..n-1; edges stored with u < v,
// deduplicated, sorted.
struct UndirectedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// Collapses edge direction and drops duplicates.
UndirectedGraph undirected_view(const DiffusionNetwork& g);

// Newman's Q for an arbitrary labelling.
double modularity(const UndirectedGraph& g, std::span<const int> labels);

// Brandes accumulation; one value per edge, aligned with g.edges.
std::vector<double> edge_betweenness(const UndirectedGraph& g);

// Removes the highest-betweenness edge (ties: first edge in the sorted
// edge list) until the component count reaches `target`. Labels are
// 0-based in order of each component's smallest node index.
std::vector<int> girvan_newman(const UndirectedGraph& g, int target);

struct SpectralResult {
  std::vector<int> labels;
  double modularity = 0.0;
};

// Recursive leading-eigenvector bisection of the modularity matrix with a
// single-node fine-tuning sweep; components are handled separately and a
// split is kept only when it raises Q.
SpectralResult spectral_modularity(const UndirectedGraph& g);

}  // namespace ideatrace
