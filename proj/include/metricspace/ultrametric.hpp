#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "metricspace/errors.hpp"
#include "metricspace/metric_space.hpp"

namespace metricspace {

struct MstEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

/// Spanning tree of the complete distance graph: exactly n-1 edges, and
/// max_weight is the bottleneck value of the space.
struct MstEdgeList {
  std::vector<MstEdge> edges;
  double max_weight = 0.0;
};

/// Dense Prim over the complete graph, O(n^2). Ties are broken toward the
/// smallest index pair; the tie rule only pins the edge list down, the
/// minimax distances derived from it are tie-independent.
inline MstEdgeList minimum_spanning_tree(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  MstEdgeList tree;
  if (n <= 1) return tree;

  std::vector<bool> in_tree(n, false);
  std::vector<double> key(n);
  std::vector<std::size_t> parent(n, 0);
  in_tree[0] = true;
  for (std::size_t v = 1; v < n; ++v) key[v] = space.distance(0, v);

  for (std::size_t round = 1; round < n; ++round) {
    std::size_t u = npos;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (u == npos || key[v] < key[u]) u = v;
    }
    in_tree[u] = true;
    tree.edges.push_back({std::min(parent[u], u), std::max(parent[u], u), key[u]});
    tree.max_weight = std::max(tree.max_weight, key[u]);
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (space.distance(u, v) < key[v]) {
        key[v] = space.distance(u, v);
        parent[v] = u;
      }
    }
  }
  return tree;
}

/// The quotient of (X, u_X) by its zero classes: `space` holds the minimax
/// distances between class representatives and source_classes records
/// which input indices merged (all singletons for a true metric).
struct UltrametricSpace {
  FiniteMetricSpace space;
  std::vector<std::vector<std::size_t>> source_classes;
};

namespace detail {

// u(i, j) = largest edge on the MST path between i and j, filled by one
// traversal per root.
inline std::vector<double> minimax_from_tree(const FiniteMetricSpace& space,
                                             const MstEdgeList& tree) {
  const std::size_t n = space.size();
  std::vector<double> u(n * n, 0.0);
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
  for (const MstEdge& e : tree.edges) {
    adjacency[e.i].push_back({e.j, e.weight});
    adjacency[e.j].push_back({e.i, e.weight});
  }
  std::vector<std::size_t> stack;
  std::vector<bool> seen(n);
  for (std::size_t root = 0; root < n; ++root) {
    std::fill(seen.begin(), seen.end(), false);
    seen[root] = true;
    stack.assign(1, root);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [w, weight] : adjacency[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        u[root * n + w] = std::max(u[root * n + v], weight);
        stack.push_back(w);
      }
    }
  }
  return u;
}

}  // namespace detail

/// The subdominant ultrametric of X: u(x,x') is the minimax chain cost,
/// computed as the largest MST-path edge. Pairs with u <= merge_tolerance
/// are quotiented into one class (vacuous at the default 0 for true
/// metrics); the class representative is its smallest member and the
/// quotient distance is the u value between representatives.
inline UltrametricSpace subdominant(const FiniteMetricSpace& space,
                                    double merge_tolerance = 0.0) {
  const std::size_t n = space.size();
  const MstEdgeList tree = minimum_spanning_tree(space);
  std::vector<double> u = detail::minimax_from_tree(space, tree);

  // Union-find over pairs with u <= merge_tolerance.
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&root](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u[i * n + j] <= merge_tolerance) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }

  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of(n, npos);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (class_of[r] == npos) {
      class_of[r] = classes.size();
      classes.push_back({});
    }
    classes[class_of[r]].push_back(i);
  }

  if (classes.size() == n) {
    return {FiniteMetricSpace(space.labels(), std::move(u), space.name()), std::move(classes)};
  }

  const std::size_t q = classes.size();
  std::vector<std::string> labels;
  labels.reserve(q);
  for (const auto& cls : classes) labels.push_back(space.label(cls.front()));
  std::vector<double> dist(q * q, 0.0);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b) {
      const double value = u[classes[a].front() * n + classes[b].front()];
      dist[a * q + b] = dist[b * q + a] = value;
    }
  return {FiniteMetricSpace(std::move(labels), std::move(dist), space.name()),
          std::move(classes)};
}

/// diam U(X): the largest MST edge weight; 0 for a single point.
inline double bottleneck(const FiniteMetricSpace& space) {
  return minimum_spanning_tree(space).max_weight;
}

/// Brute-force minimax closure, independent of the MST route: iterate
/// u(i,j) <- min_k max(u(i,k), u(k,j)) to a fixpoint starting from d.
/// Returns the exact n x n minimax matrix (row-major). Test oracle; capped.
inline std::vector<double> minimax_closure_oracle(const FiniteMetricSpace& space,
                                                  std::size_t cap = 64) {
  const std::size_t n = space.size();
  if (n > cap) throw ResourceError("minimax closure oracle cap exceeded");
  std::vector<double> u = space.matrix();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        for (std::size_t k = 0; k < n; ++k) {
          const double via = std::max(u[i * n + k], u[k * n + j]);
          if (via < u[i * n + j]) {
            u[i * n + j] = via;
            changed = true;
          }
        }
      }
  }
  return u;
}

}  // namespace metricspace
