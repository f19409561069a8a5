#pragma once

#include <string>
#include <vector>

#include "ideatrace/diffusion.hpp"

namespace ideatrace {

// In/out degree per node, aligned with the network's (year, id) node order.
struct DegreeSequences {
  std::vector<int> indegree;
  std::vector<int> outdegree;
};

DegreeSequences degree_sequences(const DiffusionNetwork& g);

// Median with the usual mid-mean for even counts.
double median_of(std::vector<int> values);

enum class Taxonomy { minor, major, idiosyncratic, innovative };
const char* taxonomy_name(Taxonomy t);

// A constitution's transmission signature: who it borrowed from, who
// borrowed from it, and the median-split class of that (in, out) pair.
// "high" means strictly above the median.
struct Motif {
  std::string constitution_id;
  std::vector<std::string> parents;
  std::vector<std::string> children;
  Taxonomy taxonomy = Taxonomy::minor;
};

std::vector<Motif> motifs(const DiffusionNetwork& g);

// Years from a node's appearance to its last direct descendant (0 when
// childless), in node (year, id) order.
std::vector<int> lifespans(const DiffusionNetwork& g);

}  // namespace ideatrace
