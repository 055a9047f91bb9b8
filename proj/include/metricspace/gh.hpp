#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metricspace/errors.hpp"
#include "metricspace/metric_space.hpp"
#include "metricspace/ultrametric.hpp"

namespace metricspace {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// A relation between two spaces whose projections onto both index sets
/// are surjective. Pairs are kept sorted.
struct Correspondence {
  std::vector<IndexPair> pairs;
  bool operator==(const Correspondence&) const = default;
};

inline bool is_correspondence(const Correspondence& rel, std::size_t n, std::size_t m) {
  std::vector<bool> left(n, false), right(m, false);
  for (const auto& [i, j] : rel.pairs) {
    if (i >= n || j >= m) return false;
    left[i] = true;
    right[j] = true;
  }
  return std::all_of(left.begin(), left.end(), [](bool b) { return b; }) &&
         std::all_of(right.begin(), right.end(), [](bool b) { return b; });
}

inline Correspondence inverse(const Correspondence& rel) {
  Correspondence out;
  out.pairs.reserve(rel.pairs.size());
  for (const auto& [i, j] : rel.pairs) out.pairs.push_back({j, i});
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

inline Correspondence full_correspondence(std::size_t n, std::size_t m) {
  Correspondence out;
  out.pairs.reserve(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out.pairs.push_back({i, j});
  return out;
}

/// dis(rel): the largest discrepancy | |x x'| - |y y'| | over all pairs of
/// related pairs, including a pair against itself.
inline double distortion(const std::vector<IndexPair>& rel, const FiniteMetricSpace& left,
                         const FiniteMetricSpace& right) {
  if (rel.empty()) throw InputError("distortion of an empty relation is undefined");
  for (const auto& [i, j] : rel)
    if (i >= left.size() || j >= right.size()) throw InputError("relation index out of range");
  double worst = 0.0;
  for (std::size_t a = 0; a < rel.size(); ++a)
    for (std::size_t b = a; b < rel.size(); ++b) {
      const double gap = std::abs(left.distance(rel[a].first, rel[b].first) -
                                  right.distance(rel[a].second, rel[b].second));
      worst = std::max(worst, gap);
    }
  return worst;
}

inline double distortion(const Correspondence& rel, const FiniteMetricSpace& left,
                         const FiniteMetricSpace& right) {
  return distortion(rel.pairs, left, right);
}

/// Hausdorff distance between two nonempty subsets of one ambient space:
/// the larger of the two directed sup-inf distances.
inline double hausdorff(const FiniteMetricSpace& ambient, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) throw InputError("Hausdorff distance requires nonempty subsets");
  for (std::size_t i : a)
    if (i >= ambient.size()) throw InputError("subset index out of range");
  for (std::size_t j : b)
    if (j >= ambient.size()) throw InputError("subset index out of range");
  auto directed = [&ambient](const std::vector<std::size_t>& from,
                             const std::vector<std::size_t>& to) {
    double worst = 0.0;
    for (std::size_t x : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t y : to) nearest = std::min(nearest, ambient.distance(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Every correspondence between X and Y, each exactly once, in increasing
/// bitmask order over the |X| x |Y| pair grid. Exponential: capped at
/// |X|*|Y| <= 12. Test oracle for the threshold solver.
inline std::vector<Correspondence> enumerate_correspondences(const FiniteMetricSpace& left,
                                                             const FiniteMetricSpace& right) {
  const std::size_t n = left.size();
  const std::size_t m = right.size();
  if (n * m > 12) throw ResourceError("correspondence enumeration capped at |X|*|Y| <= 12");
  std::vector<Correspondence> out;
  const std::uint32_t grid = static_cast<std::uint32_t>(n * m);
  for (std::uint32_t mask = 1; mask < (1u << grid); ++mask) {
    std::uint32_t rows = 0, cols = 0;
    for (std::uint32_t bit = 0; bit < grid; ++bit)
      if (mask & (1u << bit)) {
        rows |= 1u << (bit / m);
        cols |= 1u << (bit % m);
      }
    if (rows != (1u << n) - 1 || cols != (1u << m) - 1) continue;
    Correspondence rel;
    for (std::uint32_t bit = 0; bit < grid; ++bit)
      if (mask & (1u << bit)) rel.pairs.push_back({bit / m, bit % m});
    out.push_back(std::move(rel));
  }
  return out;
}

struct GhLimits {
  std::uint64_t max_nodes = 10'000'000;
  double max_seconds = 30.0;
};

/// Exact value or a certified interval for the Gromov-Hausdorff distance,
/// with the witnessing correspondence and the bounds that were consulted.
struct GhResult {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  std::optional<Correspondence> witness;
  std::vector<std::pair<std::string, double>> provenance;
  std::uint64_t nodes_explored = 0;
  bool timed_out = false;
};

namespace detail {

// Feasibility of "exists a correspondence with distortion <= c", decided by
// backtracking. Phase 1 assigns each X point (in decreasing-eccentricity
// order) one primary partner with forward checking that every Y point stays
// coverable; phase 2 covers the remaining Y points one by one. Restricting
// the search to such primary-plus-cover correspondences is complete: any
// correspondence contains one with no larger distortion.
class GhFeasibility {
 public:
  GhFeasibility(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                const GhLimits& limits)
      : left_(left),
        right_(right),
        node_cap_(limits.max_nodes),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(limits.max_seconds))) {
    order_.resize(left_.size());
    std::vector<double> eccentricity(left_.size(), 0.0);
    for (std::size_t i = 0; i < left_.size(); ++i)
      for (std::size_t j = 0; j < left_.size(); ++j)
        eccentricity[i] = std::max(eccentricity[i], left_.distance(i, j));
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&eccentricity](std::size_t a, std::size_t b) {
      return eccentricity[a] > eccentricity[b];
    });
  }

  std::optional<Correspondence> feasible(double threshold) {
    threshold_ = threshold;
    selected_.clear();
    cover_count_.assign(right_.size(), 0);
    if (extend_primary(0)) {
      Correspondence witness;
      witness.pairs = selected_;
      std::sort(witness.pairs.begin(), witness.pairs.end());
      return witness;
    }
    return std::nullopt;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool budget_exhausted() const { return exhausted_; }

 private:
  bool tick() {
    ++nodes_;
    if (nodes_ > node_cap_) exhausted_ = true;
    if ((nodes_ & 1023u) == 0 && std::chrono::steady_clock::now() > deadline_)
      exhausted_ = true;
    return !exhausted_;
  }

  bool compatible(std::size_t x, std::size_t y) const {
    for (const auto& [xs, ys] : selected_)
      if (std::abs(left_.distance(x, xs) - right_.distance(y, ys)) > threshold_) return false;
    return true;
  }

  bool all_coverable() const {
    for (std::size_t y = 0; y < right_.size(); ++y) {
      if (cover_count_[y] > 0) continue;
      bool found = false;
      for (std::size_t x = 0; x < left_.size() && !found; ++x) found = compatible(x, y);
      if (!found) return false;
    }
    return true;
  }

  bool extend_primary(std::size_t depth) {
    if (exhausted_) return false;
    if (depth == order_.size()) {
      uncovered_.clear();
      for (std::size_t y = 0; y < right_.size(); ++y)
        if (cover_count_[y] == 0) uncovered_.push_back(y);
      return cover_rest(0);
    }
    const std::size_t x = order_[depth];
    for (std::size_t y = 0; y < right_.size(); ++y) {
      if (!tick()) return false;
      if (!compatible(x, y)) continue;
      selected_.push_back({x, y});
      ++cover_count_[y];
      if (all_coverable() && extend_primary(depth + 1)) return true;
      --cover_count_[y];
      selected_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  bool cover_rest(std::size_t pos) {
    if (exhausted_) return false;
    if (pos == uncovered_.size()) return true;
    const std::size_t y = uncovered_[pos];
    for (std::size_t x = 0; x < left_.size(); ++x) {
      if (!tick()) return false;
      if (!compatible(x, y)) continue;
      selected_.push_back({x, y});
      ++cover_count_[y];
      bool rest_ok = true;
      for (std::size_t p = pos + 1; p < uncovered_.size() && rest_ok; ++p) {
        rest_ok = false;
        for (std::size_t xx = 0; xx < left_.size() && !rest_ok; ++xx)
          rest_ok = compatible(xx, uncovered_[p]);
      }
      if (rest_ok && cover_rest(pos + 1)) return true;
      --cover_count_[y];
      selected_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  const FiniteMetricSpace& left_;
  const FiniteMetricSpace& right_;
  double threshold_ = 0.0;
  std::uint64_t nodes_ = 0;
  std::uint64_t node_cap_;
  std::chrono::steady_clock::time_point deadline_;
  bool exhausted_ = false;
  std::vector<std::size_t> order_;
  std::vector<IndexPair> selected_;
  std::vector<int> cover_count_;
  std::vector<std::size_t> uncovered_;
};

// All values a distortion can take: |d_X - d_Y| over one distance (or 0)
// from each side. Sorted, deduplicated with exact float equality.
inline std::vector<double> distortion_candidates(const FiniteMetricSpace& left,
                                                 const FiniteMetricSpace& right) {
  auto distinct = [](const FiniteMetricSpace& space) {
    std::vector<double> values{0.0};
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = i + 1; j < space.size(); ++j) values.push_back(space.distance(i, j));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  };
  std::vector<double> candidates;
  for (double a : distinct(left))
    for (double b : distinct(right)) candidates.push_back(std::abs(a - b));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

}  // namespace detail

/// Exact Gromov-Hausdorff distance by threshold search: the optimal
/// distortion lies in the finite candidate set C of cross differences, so
/// a binary search over C with a complete feasibility check per threshold
/// is exact. Hitting the node or time cap degrades the result to a
/// certified interval (exact = false, timed_out = true), never an error.
inline GhResult gh_exact(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                         const GhLimits& limits = {}) {
  const std::vector<double> candidates = detail::distortion_candidates(left, right);
  const double diam_gap = std::abs(diameter(left) - diameter(right));

  GhResult result;
  result.provenance.push_back({"diam", diam_gap / 2});
  result.provenance.push_back({"trivial_upper", candidates.back() / 2});

  // Candidates below |diam X - diam Y| are infeasible; the full
  // correspondence realizes the largest candidate.
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(candidates.begin(), candidates.end(), diam_gap) - candidates.begin());
  std::size_t hi = candidates.size() - 1;
  Correspondence witness = full_correspondence(left.size(), right.size());

  detail::GhFeasibility search(left, right, limits);
  bool exhausted = false;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto found = search.feasible(candidates[mid]);
    if (search.budget_exhausted()) {
      exhausted = true;
      break;
    }
    if (found) {
      hi = mid;
      witness = std::move(*found);
    } else {
      lo = mid + 1;
    }
  }

  result.nodes_explored = search.nodes();
  result.timed_out = exhausted;
  result.exact = !exhausted;
  result.lower = candidates[lo] / 2;
  result.upper = candidates[hi] / 2;
  result.witness = std::move(witness);
  return result;
}

/// Certified lower bounds for d_GH(X, Y), largest-is-best:
///  - "diam": |diam X - diam Y| / 2.
///  - "ultra": d_GH(U(X), U(Y)) via a nested exact search on the
///    subdominant images; falls back to the diameter bound on the images
///    when the nested search exceeds its limits.
inline std::vector<std::pair<std::string, double>> gh_lower_bounds(
    const FiniteMetricSpace& left, const FiniteMetricSpace& right, const GhLimits& limits = {}) {
  std::vector<std::pair<std::string, double>> bounds;
  bounds.push_back({"diam", std::abs(diameter(left) - diameter(right)) / 2});
  const FiniteMetricSpace ultra_left = subdominant(left).space;
  const FiniteMetricSpace ultra_right = subdominant(right).space;
  const GhResult nested = gh_exact(ultra_left, ultra_right, limits);
  if (nested.exact)
    bounds.push_back({"ultra", nested.upper});
  else
    bounds.push_back({"ultra", std::abs(diameter(ultra_left) - diameter(ultra_right)) / 2});
  return bounds;
}

/// Upper bound certified by the full correspondence X x Y.
inline double gh_upper_bound_trivial(const FiniteMetricSpace& left,
                                     const FiniteMetricSpace& right) {
  return distortion(full_correspondence(left.size(), right.size()), left, right) / 2;
}

/// Lifts a correspondence R between X and Y to S between X x A and Y x A
/// (row-major pair indices) by pairing equal A coordinates; the lift
/// preserves distortion on the l1 products.
inline Correspondence product_correspondence(const Correspondence& rel,
                                             const FiniteMetricSpace& factor) {
  if (rel.pairs.empty()) throw InputError("cannot lift an empty correspondence");
  const std::size_t a_count = factor.size();
  Correspondence out;
  out.pairs.reserve(rel.pairs.size() * a_count);
  for (const auto& [x, y] : rel.pairs)
    for (std::size_t a = 0; a < a_count; ++a)
      out.pairs.push_back({x * a_count + a, y * a_count + a});
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace metricspace
