#include "ideatrace/netstats.hpp"

#include <algorithm>

namespace ideatrace {

DegreeSequences degree_sequences(const DiffusionNetwork& g) {
  DegreeSequences d;
  d.indegree.assign(g.nodes.size(), 0);
  d.outdegree.assign(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    ++d.outdegree[static_cast<std::size_t>(e.src)];
    ++d.indegree[static_cast<std::size_t>(e.dst)];
  }
  return d;
}

double median_of(std::vector<int> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

const char* taxonomy_name(Taxonomy t) {
  switch (t) {
    case Taxonomy::minor: return "minor";
    case Taxonomy::major: return "major";
    case Taxonomy::idiosyncratic: return "idiosyncratic";
    case Taxonomy::innovative: return "innovative";
  }
  return "minor";
}

std::vector<Motif> motifs(const DiffusionNetwork& g) {
  auto degrees = degree_sequences(g);
  const double med_in = median_of(degrees.indegree);
  const double med_out = median_of(degrees.outdegree);

  std::vector<Motif> out(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out[i].constitution_id = g.nodes[i].id;
  }
  for (const auto& e : g.edges) {
    out[static_cast<std::size_t>(e.dst)].parents.push_back(
        g.nodes[static_cast<std::size_t>(e.src)].id);
    out[static_cast<std::size_t>(e.src)].children.push_back(
        g.nodes[static_cast<std::size_t>(e.dst)].id);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::sort(out[i].parents.begin(), out[i].parents.end());
    std::sort(out[i].children.begin(), out[i].children.end());
    bool high_in = degrees.indegree[i] > med_in;
    bool high_out = degrees.outdegree[i] > med_out;
    if (high_in && high_out) out[i].taxonomy = Taxonomy::major;
    else if (high_in) out[i].taxonomy = Taxonomy::idiosyncratic;
    else if (high_out) out[i].taxonomy = Taxonomy::innovative;
    else out[i].taxonomy = Taxonomy::minor;
  }
  return out;
}

std::vector<int> lifespans(const DiffusionNetwork& g) {
  std::vector<int> span(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    auto s = static_cast<std::size_t>(e.src);
    int reach = g.nodes[static_cast<std::size_t>(e.dst)].year -
                g.nodes[s].year;
    span[s] = std::max(span[s], reach);
  }
  return span;
}

}  // namespace ideatrace
