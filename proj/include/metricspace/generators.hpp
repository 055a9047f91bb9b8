#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metricspace/errors.hpp"
#include "metricspace/metric_space.hpp"

namespace metricspace {

// All generators are deterministic: the random ones use std::mt19937_64
// (output sequence pinned by the C++ standard) seeded explicitly, and map
// raw 64-bit words to doubles with an explicit 53-bit mantissa shift, so
// results are bit-identical across platforms and runs.

namespace detail {

inline std::vector<std::string> indexed_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return labels;
}

inline FiniteMetricSpace line_space(const std::vector<double>& values, std::string name) {
  const std::size_t n = values.size();
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::abs(values[i] - values[j]);
  return FiniteMetricSpace(indexed_labels(n), std::move(dist), std::move(name));
}

inline double uniform_unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

inline FiniteMetricSpace one_point() {
  return FiniteMetricSpace({"p0"}, {0.0}, "one-point");
}

/// Points {0, step, 2*step, ..., length} on the line; the final step is
/// shortened when step does not divide length, so length is always included.
inline FiniteMetricSpace grid_segment(double length, double step) {
  if (!(length > 0) || !(step > 0)) throw InputError("grid parameters must be positive");
  if (step > length) throw InputError("grid step must not exceed the segment length");
  std::vector<double> values;
  const auto whole = static_cast<std::size_t>(std::floor(length / step + 1e-9));
  for (std::size_t k = 0; k <= whole; ++k) values.push_back(static_cast<double>(k) * step);
  if (length - values.back() > 1e-9) values.push_back(length);
  return detail::line_space(values, "grid-segment");
}

/// Points {p, p^2, ..., p^count} on the line, ratio p > 1.
inline FiniteMetricSpace geometric_progression(double ratio, std::size_t count) {
  if (!(ratio > 1)) throw InputError("geometric progression requires ratio > 1");
  if (count < 1) throw InputError("geometric progression requires count >= 1");
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) values.push_back(std::pow(ratio, static_cast<double>(k)));
  return detail::line_space(values, "geometric-progression");
}

/// Vertex set of the regular n-gon inscribed in a circle of the given
/// radius; chord distances 2*R*sin(pi*k/n).
inline FiniteMetricSpace polygon_vertices(std::size_t n, double radius) {
  if (n < 1) throw InputError("polygon requires at least one vertex");
  if (!(radius > 0)) throw InputError("polygon radius must be positive");
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t k = std::min(j - i, n - (j - i));
      const double chord =
          2.0 * radius * std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
      dist[i * n + j] = chord;
      dist[j * n + i] = chord;
    }
  return FiniteMetricSpace(detail::indexed_labels(n), std::move(dist), "polygon");
}

/// n points sampled uniformly in [0,1]^dim with Euclidean distances.
inline FiniteMetricSpace random_euclidean(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw InputError("random_euclidean requires n >= 1 and dim >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (auto& point : points)
    for (auto& coordinate : point) coordinate = detail::uniform_unit(rng);
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = points[i][d] - points[j][d];
        sum += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(sum);
    }
  return FiniteMetricSpace(detail::indexed_labels(n), std::move(dist), "random-euclidean");
}

/// Cophenetic distances of a random binary merge tree. Merge heights are
/// distinct dyadic rationals k/2^20 drawn without replacement and applied
/// in increasing order, so the result is exactly ultrametric: every triple
/// check compares copied heights, no arithmetic is involved.
inline FiniteMetricSpace random_ultrametric(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("random_ultrametric requires n >= 1");
  std::mt19937_64 rng(seed);
  std::set<std::uint64_t> numerators;
  while (numerators.size() < n - 1) numerators.insert((rng() & 0xFFFFFu) + 1);

  std::vector<double> dist(n * n, 0.0);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  for (std::uint64_t numerator : numerators) {  // ascending
    const double height = static_cast<double>(numerator) * 0x1.0p-20;
    const std::size_t a = rng() % clusters.size();
    std::size_t b = rng() % (clusters.size() - 1);
    if (b >= a) ++b;
    const std::size_t lo = std::min(a, b);
    const std::size_t hi = std::max(a, b);
    for (std::size_t x : clusters[lo])
      for (std::size_t y : clusters[hi]) dist[x * n + y] = dist[y * n + x] = height;
    clusters[lo].insert(clusters[lo].end(), clusters[hi].begin(), clusters[hi].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return FiniteMetricSpace(detail::indexed_labels(n), std::move(dist), "random-ultrametric");
}

}  // namespace metricspace
