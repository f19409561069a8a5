#pragma once

#include <map>
#include <span>
#include <string>

#include "ideatrace/cascade.hpp"

namespace ideatrace {

// KL(P || Q) = sum_i P(i) ln(P(i) / Q(i)), with 0 log 0 taken as 0.
// Both inputs must sum to 1 within 1e-6; throws DomainError when some
// P(i) > 0 has Q(i) = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Which way the divergence is read when scoring candidate ancestors.
enum class KlDirection {
  child_given_parent,  // KL(child || ancestor): the ancestor as a model
  parent_given_child,  // KL(ancestor || child)
};

struct FamilyTree {
  std::string root;  // earliest constitution by (year, id)
  std::map<std::string, std::string> parent;  // child id -> parent id
  std::map<std::string, double> divergence;   // child id -> its parent KL
};

// Nearest-earlier-constitution tree: each constitution's parent is the
// strictly earlier constitution minimizing the divergence, ties broken by
// earlier year then id. Constitutions sharing the earliest year have no
// strictly earlier candidate and are left parentless alongside the root.
FamilyTree build_family_tree(const std::vector<ConstitutionMixture>& mixtures,
                             KlDirection direction = KlDirection::child_given_parent);

}  // namespace ideatrace
