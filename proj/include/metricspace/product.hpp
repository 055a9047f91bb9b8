#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "metricspace/errors.hpp"
#include "metricspace/metric_space.hpp"

namespace metricspace {

inline constexpr std::size_t kDefaultProductCap = 10000;

namespace detail {

template <typename Combine>
FiniteMetricSpace product_space(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                std::size_t max_points, Combine&& combine) {
  const std::size_t n = left.size();
  const std::size_t m = right.size();
  if (max_points / n < m)
    throw ResourceError("product would exceed the configured point cap");
  std::vector<std::string> labels;
  labels.reserve(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) labels.push_back(left.label(i) + "|" + right.label(j));
  std::vector<double> dist(n * m * n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < m; ++l)
          dist[(i * m + j) * n * m + (k * m + l)] =
              combine(left.distance(i, k), right.distance(j, l));
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

}  // namespace detail

/// Cartesian product with the Manhattan metric d_X + d_Y. Pair (x_i, y_j)
/// is labeled "x_i|y_j" and sits at row-major index i*|Y| + j.
inline FiniteMetricSpace product_l1(const FiniteMetricSpace& left,
                                    const FiniteMetricSpace& right,
                                    std::size_t max_points = kDefaultProductCap) {
  return detail::product_space(left, right, max_points,
                               [](double a, double b) { return a + b; });
}

/// Cartesian product with the sup metric max{d_X, d_Y}; same labeling and
/// pair order as product_l1.
inline FiniteMetricSpace product_linf(const FiniteMetricSpace& left,
                                      const FiniteMetricSpace& right,
                                      std::size_t max_points = kDefaultProductCap) {
  return detail::product_space(left, right, max_points,
                               [](double a, double b) { return std::max(a, b); });
}

/// A metric rho on the pair set of two spaces, stored over row-major pair
/// indices. Carries its factors so slice restrictions can be checked.
struct ProductMetricTable {
  FiniteMetricSpace left;
  FiniteMetricSpace right;
  std::vector<double> rho;  // (n*m) x (n*m), row-major

  std::size_t pairs() const { return left.size() * right.size(); }
  double value(std::size_t p, std::size_t q) const { return rho[p * pairs() + q]; }
  std::size_t pair_index(std::size_t i, std::size_t j) const { return i * right.size() + j; }
};

inline ProductMetricTable l1_table(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                   std::size_t max_points = kDefaultProductCap) {
  return {left, right, product_l1(left, right, max_points).matrix()};
}

inline ProductMetricTable linf_table(const FiniteMetricSpace& left,
                                     const FiniteMetricSpace& right,
                                     std::size_t max_points = kDefaultProductCap) {
  return {left, right, product_linf(left, right, max_points).matrix()};
}

/// Turns a table into a metric space over the pair set, with the same
/// labeling convention as the product constructors.
inline FiniteMetricSpace space_from_table(const ProductMetricTable& table) {
  std::vector<std::string> labels;
  labels.reserve(table.pairs());
  for (std::size_t i = 0; i < table.left.size(); ++i)
    for (std::size_t j = 0; j < table.right.size(); ++j)
      labels.push_back(table.left.label(i) + "|" + table.right.label(j));
  return FiniteMetricSpace(std::move(labels), table.rho);
}

/// Fairness: restricting rho to X x {y} must reproduce d_X, and to {x} x Y
/// must reproduce d_Y, within tol.
inline bool check_fair(const ProductMetricTable& table, double tol) {
  if (table.rho.size() != table.pairs() * table.pairs())
    throw InputError("table dimensions are inconsistent");
  const std::size_t n = table.left.size();
  const std::size_t m = table.right.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < m; ++j) {
        const double got = table.value(table.pair_index(i, j), table.pair_index(k, j));
        if (std::abs(got - table.left.distance(i, k)) > tol) return false;
      }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t i = 0; i < n; ++i) {
        const double got = table.value(table.pair_index(i, j), table.pair_index(i, l));
        if (std::abs(got - table.right.distance(j, l)) > tol) return false;
      }
  return true;
}

/// Pointwise domination rho(p, p') >= max{d_X(x,x'), d_Y(y,y')} - tol.
inline bool check_dominates_linf(const ProductMetricTable& table, double tol) {
  if (table.rho.size() != table.pairs() * table.pairs())
    throw InputError("table dimensions are inconsistent");
  const std::size_t n = table.left.size();
  const std::size_t m = table.right.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          const double bound = std::max(table.left.distance(i, k), table.right.distance(j, l));
          if (table.value(table.pair_index(i, j), table.pair_index(k, l)) < bound - tol)
            return false;
        }
  return true;
}

}  // namespace metricspace
