#include "ideatrace/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "ideatrace/errors.hpp"

namespace ideatrace {

void CascadeConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ConfigError("cascade.tau must be in [0, 1]");
  }
}

std::vector<ConstitutionMixture> constitution_mixture(
    const std::vector<double>& theta, int num_topics,
    const std::vector<std::string>& doc_constitution,
    const std::map<std::string, int>& years) {
  if (num_topics < 1) throw ConfigError("num_topics must be >= 1");
  if (theta.size() != doc_constitution.size() * static_cast<std::size_t>(num_topics)) {
    throw ConfigError("theta size does not match document count");
  }

  std::map<std::string, std::pair<std::vector<double>, int>> acc;  // id -> (sum, docs)
  for (std::size_t d = 0; d < doc_constitution.size(); ++d) {
    auto& [sum, count] = acc[doc_constitution[d]];
    if (sum.empty()) sum.assign(num_topics, 0.0);
    for (int k = 0; k < num_topics; ++k) {
      sum[k] += theta[d * static_cast<std::size_t>(num_topics) + k];
    }
    ++count;
  }

  std::vector<ConstitutionMixture> mixtures;
  mixtures.reserve(acc.size());
  for (auto& [id, entry] : acc) {
    auto it = years.find(id);
    if (it == years.end()) {
      throw MissingYear("no year for constitution '" + id + "'");
    }
    ConstitutionMixture m;
    m.constitution_id = id;
    m.year = it->second;
    m.weights = std::move(entry.first);
    for (double& w : m.weights) w /= entry.second;
    mixtures.push_back(std::move(m));
  }
  std::sort(mixtures.begin(), mixtures.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.constitution_id) < std::tie(b.year, b.constitution_id);
  });
  return mixtures;
}

std::vector<Cascade> extract_cascades(
    const std::vector<ConstitutionMixture>& mixtures, const CascadeConfig& cfg) {
  cfg.validate();
  if (mixtures.empty()) throw ConfigError("no mixtures to extract cascades from");

  const std::size_t n = mixtures.size();
  const int num_topics = static_cast<int>(mixtures[0].weights.size());
  for (const auto& m : mixtures) {
    if (m.weights.size() != static_cast<std::size_t>(num_topics)) {
      throw ConfigError("inconsistent mixture dimensions");
    }
  }

  std::vector<Cascade> cascades(num_topics);
  std::vector<std::size_t> order(n);
  for (int k = 0; k < num_topics; ++k) {
    cascades[k].topic_id = k;
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double wa = mixtures[a].weights[k], wb = mixtures[b].weights[k];
      if (wa != wb) return wa > wb;
      return std::tie(mixtures[a].year, mixtures[a].constitution_id) <
             std::tie(mixtures[b].year, mixtures[b].constitution_id);
    });

    std::size_t take;
    if (cfg.mode == CascadeConfig::Mode::rank) {
      // The slack keeps exact products like 0.3 * 20 from rounding up.
      take = static_cast<std::size_t>(
          std::ceil(cfg.tau * static_cast<double>(n) - 1e-9));
      take = std::min(take, n);
    } else {
      take = 0;
      while (take < n && mixtures[order[take]].weights[k] > cfg.tau) ++take;
    }

    auto& hits = cascades[k].hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
      hits.emplace_back(mixtures[order[i]].constitution_id, mixtures[order[i]].year);
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
  }
  return cascades;
}

}  // namespace ideatrace
