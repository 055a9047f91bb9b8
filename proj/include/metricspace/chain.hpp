#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "metricspace/errors.hpp"
#include "metricspace/metric_space.hpp"

namespace metricspace {

/// Components of the graph with edges {d <= scale}: any two points in one
/// component are joined by a chain with steps <= scale, points in distinct
/// components by none. Components are ordered by smallest member index.
struct ChainPartition {
  double scale = 0.0;
  std::vector<std::vector<std::size_t>> components;
};

/// A concrete chain x_0, ..., x_n between two points with all steps <= the
/// scale it was requested at. Not necessarily shortest.
struct ChainWitness {
  std::vector<std::size_t> indices;
  double max_step = 0.0;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> root;
  explicit UnionFind(std::size_t n) : root(n) { std::iota(root.begin(), root.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  }
  bool merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    root[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

struct WeightedPair {
  double weight;
  std::size_t i, j;
};

inline std::vector<WeightedPair> sorted_edges(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<WeightedPair> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({space.distance(i, j), i, j});
  std::sort(edges.begin(), edges.end(), [](const WeightedPair& a, const WeightedPair& b) {
    return std::tie(a.weight, a.i, a.j) < std::tie(b.weight, b.i, b.j);
  });
  return edges;
}

inline std::vector<std::vector<std::size_t>> components_from(UnionFind& uf, std::size_t n) {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(n, npos);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (slot[r] == npos) {
      slot[r] = components.size();
      components.push_back({});
    }
    components[slot[r]].push_back(i);
  }
  return components;
}

}  // namespace detail

inline ChainPartition components_at_scale(const FiniteMetricSpace& space, double eps) {
  if (eps < 0) throw InputError("scale must be nonnegative");
  const std::size_t n = space.size();
  detail::UnionFind uf(n);
  for (const auto& edge : detail::sorted_edges(space)) {
    if (edge.weight > eps) break;
    uf.merge(edge.i, edge.j);
  }
  return {eps, detail::components_from(uf, n)};
}

inline bool is_chain_connected(const FiniteMetricSpace& space, double eps) {
  return components_at_scale(space, eps).components.size() == 1;
}

/// The smallest eps at which the space is one component; equals the
/// bottleneck (largest MST edge) exactly. 0 for a single point.
inline double min_connecting_scale(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n == 1) return 0.0;
  detail::UnionFind uf(n);
  std::size_t components = n;
  for (const auto& edge : detail::sorted_edges(space)) {
    if (uf.merge(edge.i, edge.j) && --components == 1) return edge.weight;
  }
  return 0.0;  // unreachable: the complete graph always connects
}

/// Breadth-first chain between two points in the {d <= eps} graph, visiting
/// neighbors in index order. Returns nullopt when the points sit in
/// different components at this scale.
inline std::optional<ChainWitness> chain_witness(const FiniteMetricSpace& space,
                                                 std::size_t from, std::size_t to, double eps) {
  const std::size_t n = space.size();
  if (from >= n || to >= n) throw InputError("chain endpoints out of range");
  if (eps < 0) throw InputError("scale must be nonnegative");
  if (from == to) return ChainWitness{{from}, 0.0};

  std::vector<std::size_t> parent(n, npos);
  std::queue<std::size_t> frontier;
  parent[from] = from;
  frontier.push(from);
  while (!frontier.empty() && parent[to] == npos) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t w = 0; w < n; ++w) {
      if (parent[w] != npos || w == v) continue;
      if (space.distance(v, w) <= eps) {
        parent[w] = v;
        frontier.push(w);
      }
    }
  }
  if (parent[to] == npos) return std::nullopt;

  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  double max_step = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    max_step = std::max(max_step, space.distance(path[k], path[k + 1]));
  return ChainWitness{std::move(path), max_step};
}

}  // namespace metricspace
