#include "ideatrace/genealogy.hpp"

#include <algorithm>
#include <cmath>

#include "ideatrace/errors.hpp"

namespace ideatrace {

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DomainError("kl_divergence: dimension mismatch");
  }
  double sum_p = 0.0, sum_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw DomainError("kl_divergence: negative probability");
    }
    sum_p += p[i];
    sum_q += q[i];
  }
  if (std::abs(sum_p - 1.0) > 1e-6 || std::abs(sum_q - 1.0) > 1e-6) {
    throw DomainError("kl_divergence: inputs must sum to 1");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw DomainError("kl_divergence: P has mass where Q is zero");
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

FamilyTree build_family_tree(const std::vector<ConstitutionMixture>& mixtures,
                             KlDirection direction) {
  if (mixtures.empty()) throw DomainError("build_family_tree: no mixtures");

  std::vector<const ConstitutionMixture*> ordered;
  ordered.reserve(mixtures.size());
  for (const auto& m : mixtures) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return std::tie(a->year, a->constitution_id) <
           std::tie(b->year, b->constitution_id);
  });

  FamilyTree tree;
  tree.root = ordered[0]->constitution_id;
  for (std::size_t c = 1; c < ordered.size(); ++c) {
    const auto& child = *ordered[c];
    const ConstitutionMixture* best = nullptr;
    double best_kl = 0.0;
    // Candidates are iterated in (year, id) order, so keeping the first
    // strict minimum realizes the tie-break rule.
    for (std::size_t a = 0; a < c; ++a) {
      const auto& cand = *ordered[a];
      if (cand.year >= child.year) continue;
      double kl = direction == KlDirection::child_given_parent
                      ? kl_divergence(child.weights, cand.weights)
                      : kl_divergence(cand.weights, child.weights);
      if (best == nullptr || kl < best_kl) {
        best = &cand;
        best_kl = kl;
      }
    }
    if (best != nullptr) {
      tree.parent[child.constitution_id] = best->constitution_id;
      tree.divergence[child.constitution_id] = best_kl;
    }
  }
  return tree;
}

}  // namespace ideatrace
