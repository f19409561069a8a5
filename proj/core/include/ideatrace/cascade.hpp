#pragma once

#include <map>
#include <string>
#include <vector>

namespace ideatrace {

struct ConstitutionMixture {
  std::string constitution_id;
  int year = 0;
  std::vector<double> weights;  // length K, sums to 1
};

// Constitutions at which one topic is expressed, with their years.
// Constitutions not listed are treated as never reached (t = infinity).
struct Cascade {
  int topic_id = 0;
  std::vector<std::pair<std::string, int>> hits;  // (id, year), sorted (year, id)
};

struct CascadeConfig {
  // rank: a constitution is a hit for a topic when it is among the top
  // ceil(tau * N) by that topic's weight. absolute: when its weight
  // exceeds tau.
  enum class Mode { rank, absolute };
  double tau = 0.3;
  Mode mode = Mode::rank;

  void validate() const;
};

// Per-constitution topic mixture: the unweighted mean of the theta rows of
// its documents. Output sorted by (year, id).
std::vector<ConstitutionMixture> constitution_mixture(
    const std::vector<double>& theta, int num_topics,
    const std::vector<std::string>& doc_constitution,
    const std::map<std::string, int>& years);

// One cascade per topic. In rank mode ties at the cutoff are broken toward
// the earlier year, then the lexicographically smaller id, so the hit set
// is a prefix of a fixed total order and grows monotonically with tau.
std::vector<Cascade> extract_cascades(
    const std::vector<ConstitutionMixture>& mixtures, const CascadeConfig& cfg);

}  // namespace ideatrace
