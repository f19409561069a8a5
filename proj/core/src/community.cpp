#include "ideatrace/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "ideatrace/errors.hpp"
#include "ideatrace/rng.hpp"

namespace ideatrace {

UndirectedGraph undirected_view(const DiffusionNetwork& g) {
  UndirectedGraph u;
  u.n = static_cast<int>(g.nodes.size());
  std::set<std::pair<int, int>> edges;
  for (const auto& e : g.edges) {
    int a = e.src, b = e.dst;
    if (a == b) continue;
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  u.edges.assign(edges.begin(), edges.end());
  return u;
}

namespace {

std::vector<std::vector<int>> adjacency(const UndirectedGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (auto [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  return adj;
}

std::vector<int> components_of(const UndirectedGraph& g) {
  auto adj = adjacency(g);
  std::vector<int> comp(static_cast<std::size_t>(g.n), -1);
  int next = 0;
  for (int s = 0; s < g.n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    comp[static_cast<std::size_t>(s)] = next;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace

double modularity(const UndirectedGraph& g, std::span<const int> labels) {
  if (labels.size() != static_cast<std::size_t>(g.n)) {
    throw DomainError("modularity: label count mismatch");
  }
  const double m = static_cast<double>(g.edges.size());
  if (m == 0.0) return 0.0;
  int max_label = 0;
  for (int l : labels) max_label = std::max(max_label, l);
  std::vector<double> inside(static_cast<std::size_t>(max_label) + 1, 0.0);
  std::vector<double> degree(static_cast<std::size_t>(max_label) + 1, 0.0);
  for (auto [a, b] : g.edges) {
    int la = labels[static_cast<std::size_t>(a)];
    int lb = labels[static_cast<std::size_t>(b)];
    if (la == lb) inside[static_cast<std::size_t>(la)] += 1.0;
    degree[static_cast<std::size_t>(la)] += 1.0;
    degree[static_cast<std::size_t>(lb)] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    q += inside[c] / m - (degree[c] / (2.0 * m)) * (degree[c] / (2.0 * m));
  }
  return q;
}

std::vector<double> edge_betweenness(const UndirectedGraph& g) {
  // Brandes accumulation over every source, i.e. ordered-pair counting.
  auto adj = adjacency(g);
  std::map<std::pair<int, int>, std::size_t> edge_index;
  for (std::size_t i = 0; i < g.edges.size(); ++i) edge_index[g.edges[i]] = i;
  auto index_of = [&](int a, int b) {
    return edge_index.at({std::min(a, b), std::max(a, b)});
  };

  std::vector<double> betweenness(g.edges.size(), 0.0);
  for (int s = 0; s < g.n; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
    std::vector<double> sigma(static_cast<std::size_t>(g.n), 0.0);
    std::vector<double> delta(static_cast<std::size_t>(g.n), 0.0);
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(g.n));
    std::vector<int> order;
    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] ==
            dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
          preds[static_cast<std::size_t>(w)].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int w = *it;
      for (int v : preds[static_cast<std::size_t>(w)]) {
        double share = sigma[static_cast<std::size_t>(v)] /
                       sigma[static_cast<std::size_t>(w)] *
                       (1.0 + delta[static_cast<std::size_t>(w)]);
        betweenness[index_of(v, w)] += share;
        delta[static_cast<std::size_t>(v)] += share;
      }
    }
  }
  return betweenness;
}

std::vector<int> girvan_newman(const UndirectedGraph& g, int target) {
  if (target < 1) throw ConfigError("girvan_newman target must be >= 1");
  UndirectedGraph work = g;
  // Original position of each surviving edge, for the tie rule.
  std::vector<std::size_t> ids(work.edges.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;

  for (;;) {
    auto comp = components_of(work);
    int n_comp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    if (n_comp >= target || work.edges.empty()) return comp;

    auto betweenness = edge_betweenness(work);
    std::size_t best = 0;
    for (std::size_t i = 1; i < betweenness.size(); ++i) {
      if (betweenness[i] > betweenness[best] ||
          (betweenness[i] == betweenness[best] && ids[i] < ids[best])) {
        best = i;
      }
    }
    work.edges.erase(work.edges.begin() + static_cast<std::ptrdiff_t>(best));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(best));
  }
}

namespace {

// Dense generalized modularity matrix for the node subset `group`.
struct GroupSplit {
  std::vector<double> b;  // ng x ng
  int ng = 0;

  double& at(int i, int j) { return b[static_cast<std::size_t>(i) * ng + j]; }
  double get(int i, int j) const {
    return b[static_cast<std::size_t>(i) * ng + j];
  }
};

GroupSplit group_matrix(const UndirectedGraph& g, const std::vector<int>& degree,
                        const std::vector<int>& group) {
  const double two_m = 2.0 * static_cast<double>(g.edges.size());
  GroupSplit gs;
  gs.ng = static_cast<int>(group.size());
  gs.b.assign(static_cast<std::size_t>(gs.ng) * gs.ng, 0.0);

  std::vector<int> pos(degree.size(), -1);
  for (int i = 0; i < gs.ng; ++i) pos[static_cast<std::size_t>(group[i])] = i;

  for (int i = 0; i < gs.ng; ++i) {
    for (int j = 0; j < gs.ng; ++j) {
      gs.at(i, j) = -degree[static_cast<std::size_t>(group[i])] *
                    degree[static_cast<std::size_t>(group[j])] / two_m;
    }
  }
  for (auto [a, b] : g.edges) {
    int ia = pos[static_cast<std::size_t>(a)];
    int ib = pos[static_cast<std::size_t>(b)];
    if (ia >= 0 && ib >= 0) {
      gs.at(ia, ib) += 1.0;
      gs.at(ib, ia) += 1.0;
    }
  }
  // Row-sum correction for the generalized (subgraph) matrix.
  for (int i = 0; i < gs.ng; ++i) {
    double row = 0.0;
    for (int j = 0; j < gs.ng; ++j) row += gs.get(i, j);
    gs.at(i, i) -= row;
  }
  return gs;
}

// Leading eigenpair by shifted power iteration; deterministic start vector.
double leading_eigenvector(const GroupSplit& gs, std::vector<double>& v) {
  const int n = gs.ng;
  double shift = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(gs.get(i, j));
    shift = std::max(shift, row);
  }
  v.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t h = detail::splitmix64(static_cast<std::uint64_t>(i) + 1);
    v[static_cast<std::size_t>(i)] =
        0.5 + static_cast<double>(h % 1024) / 1024.0;
  }

  std::vector<double> next(static_cast<std::size_t>(n), 0.0);
  for (int iter = 0; iter < 1000; ++iter) {
    for (int i = 0; i < n; ++i) {
      double acc = shift * v[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) acc += gs.get(i, j) * v[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] = acc;
    }
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    double diff = 0.0;
    for (int i = 0; i < n; ++i) {
      next[static_cast<std::size_t>(i)] /= norm;
      diff = std::max(diff, std::abs(next[static_cast<std::size_t>(i)] -
                                     v[static_cast<std::size_t>(i)]));
    }
    v.swap(next);
    if (diff < 1e-13) break;
  }
  // Rayleigh quotient under the original (unshifted) matrix.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += gs.get(i, j) * v[static_cast<std::size_t>(j)];
    num += v[static_cast<std::size_t>(i)] * acc;
    den += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  }
  return den > 0.0 ? num / den : 0.0;
}

double quadratic_form(const GroupSplit& gs, const std::vector<int>& s) {
  double q = 0.0;
  for (int i = 0; i < gs.ng; ++i) {
    for (int j = 0; j < gs.ng; ++j) {
      q += s[static_cast<std::size_t>(i)] * gs.get(i, j) *
           s[static_cast<std::size_t>(j)];
    }
  }
  return q;
}

// One Kernighan-Lin style sweep: flip every node once in greedy order,
// keep the best prefix. Returns the improved quadratic form value.
double fine_tune(const GroupSplit& gs, std::vector<int>& s) {
  const int n = gs.ng;
  double q = quadratic_form(gs, s);
  for (;;) {
    std::vector<int> trial = s;
    std::vector<double> bs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += gs.get(i, j) * trial[static_cast<std::size_t>(j)];
      bs[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<bool> moved(static_cast<std::size_t>(n), false);
    std::vector<int> sequence;
    double running = q, best_running = q;
    int best_len = 0;
    for (int step = 0; step < n; ++step) {
      int pick = -1;
      double pick_delta = 0.0;
      for (int i = 0; i < n; ++i) {
        if (moved[static_cast<std::size_t>(i)]) continue;
        double delta = -4.0 * trial[static_cast<std::size_t>(i)] *
                           bs[static_cast<std::size_t>(i)] +
                       4.0 * gs.get(i, i);
        if (pick == -1 || delta > pick_delta) {
          pick = i;
          pick_delta = delta;
        }
      }
      int old = trial[static_cast<std::size_t>(pick)];
      trial[static_cast<std::size_t>(pick)] = -old;
      moved[static_cast<std::size_t>(pick)] = true;
      sequence.push_back(pick);
      for (int j = 0; j < n; ++j) {
        bs[static_cast<std::size_t>(j)] -= 2.0 * old * gs.get(j, pick);
      }
      running += pick_delta;
      if (running > best_running + 1e-12) {
        best_running = running;
        best_len = step + 1;
      }
    }
    if (best_len == 0) return q;
    for (int i = 0; i < best_len; ++i) {
      auto idx = static_cast<std::size_t>(sequence[static_cast<std::size_t>(i)]);
      s[idx] = -s[idx];
    }
    q = best_running;
  }
}

void split_group(const UndirectedGraph& g, const std::vector<int>& degree,
                 const std::vector<int>& group, double two_m,
                 std::vector<std::vector<int>>& out, double& delta_q_total) {
  if (group.size() < 2) {
    out.push_back(group);
    return;
  }
  GroupSplit gs = group_matrix(g, degree, group);
  std::vector<double> v;
  double lambda = leading_eigenvector(gs, v);
  if (lambda <= 1e-9) {
    out.push_back(group);
    return;
  }
  std::vector<int> s(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) s[i] = v[i] >= 0.0 ? 1 : -1;
  double q = fine_tune(gs, s);
  double delta_q = q / (2.0 * two_m);
  bool all_same = std::all_of(s.begin(), s.end(), [&](int x) { return x == s[0]; });
  if (delta_q <= 1e-12 || all_same) {
    out.push_back(group);
    return;
  }
  delta_q_total += delta_q;
  std::vector<int> left, right;
  for (std::size_t i = 0; i < group.size(); ++i) {
    (s[i] > 0 ? left : right).push_back(group[i]);
  }
  split_group(g, degree, left, two_m, out, delta_q_total);
  split_group(g, degree, right, two_m, out, delta_q_total);
}

}  // namespace

SpectralResult spectral_modularity(const UndirectedGraph& g) {
  SpectralResult result;
  result.labels.assign(static_cast<std::size_t>(g.n), 0);
  if (g.n == 0) return result;

  auto comp = components_of(g);
  std::vector<int> degree(static_cast<std::size_t>(g.n), 0);
  for (auto [a, b] : g.edges) {
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }

  int n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n_comp));
  for (int i = 0; i < g.n; ++i) {
    groups[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].push_back(i);
  }

  double q_inc = modularity(g, comp);
  const double two_m = 2.0 * static_cast<double>(g.edges.size());

  std::vector<std::vector<int>> final_groups;
  for (const auto& group : groups) {
    if (g.edges.empty()) {
      final_groups.push_back(group);
    } else {
      split_group(g, degree, group, two_m, final_groups, q_inc);
    }
  }

  // Label groups by their smallest node index.
  std::sort(final_groups.begin(), final_groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t l = 0; l < final_groups.size(); ++l) {
    for (int node : final_groups[l]) {
      result.labels[static_cast<std::size_t>(node)] = static_cast<int>(l);
    }
  }
  result.modularity = g.edges.empty() ? 0.0 : q_inc;
  return result;
}

}  // namespace ideatrace
