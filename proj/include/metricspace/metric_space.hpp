#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metricspace/errors.hpp"

namespace metricspace {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// A finite metric space: labeled points with a symmetric distance matrix.
///
/// Construction checks shape only (n >= 1, unique labels, n x n matrix);
/// the metric axioms are checked separately by validate_metric so that
/// defective matrices can be loaded, diagnosed and reported.
/// Instances are immutable after construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist_row_major,
                    std::string name = "")
      : labels_(std::move(labels)), dist_(std::move(dist_row_major)), name_(std::move(name)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw InputError("metric space must contain at least one point");
    if (dist_.size() != n * n)
      throw InputError("distance matrix size does not match label count");
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != n) throw InputError("point labels must be unique");
  }

  static FiniteMetricSpace from_rows(std::vector<std::string> labels,
                                     const std::vector<std::vector<double>>& rows,
                                     std::string name = "") {
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw InputError("distance matrix must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat), std::move(name));
  }

  std::size_t size() const { return labels_.size(); }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::string& name() const { return name_; }
  const std::vector<double>& matrix() const { return dist_; }

  std::vector<std::vector<double>> rows() const {
    const std::size_t n = size();
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] = distance(i, j);
    return out;
  }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? npos : static_cast<std::size_t>(it - labels_.begin());
  }

  bool operator==(const FiniteMetricSpace&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;  // row-major n x n
  std::string name_;
};

enum class ViolationKind { Diagonal, Negative, ZeroOffDiagonal, Asymmetry, Triangle };

inline const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::Diagonal: return "diagonal";
    case ViolationKind::Negative: return "negative";
    case ViolationKind::ZeroOffDiagonal: return "zero-off-diagonal";
    case ViolationKind::Asymmetry: return "asymmetry";
    case ViolationKind::Triangle: return "triangle";
  }
  return "unknown";
}

/// One metric-axiom violation. `k` is the intermediate point for triangle
/// violations and npos otherwise. For zero-off-diagonal entries the
/// magnitude carries the offending entry's absolute value; for all other
/// kinds it is the amount by which the axiom fails.
struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = npos;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Checks all metric axioms on a square matrix; every violation whose
/// magnitude exceeds `tol` is reported, ordered lexicographically by
/// (i, j, k) with pair violations before triples on the same (i, j).
inline ValidationReport validate_metric(const std::vector<std::vector<double>>& matrix,
                                        double tol) {
  const std::size_t n = matrix.size();
  if (n == 0) throw InputError("matrix must be non-empty");
  for (const auto& row : matrix)
    if (row.size() != n) throw InputError("matrix must be square");
  if (tol < 0) throw InputError("tolerance must be nonnegative");

  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::size_t i, std::size_t j, std::size_t k,
                       double magnitude) {
    report.violations.push_back({kind, i, j, k, magnitude});
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(matrix[i][i]) > tol)
      add(ViolationKind::Diagonal, i, i, npos, std::abs(matrix[i][i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = matrix[i][j];
      if (d < -tol) add(ViolationKind::Negative, i, j, npos, -d);
      if (std::abs(d) <= tol && std::abs(matrix[j][i]) <= tol)
        add(ViolationKind::ZeroOffDiagonal, i, j, npos, std::abs(d));
      if (std::abs(d - matrix[j][i]) > tol)
        add(ViolationKind::Asymmetry, i, j, npos, std::abs(d - matrix[j][i]));
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = d - (matrix[i][k] + matrix[k][j]);
        if (excess > tol) add(ViolationKind::Triangle, i, j, k, excess);
      }
    }
  }

  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& a, const Violation& b) {
              const std::size_t ak = a.k == npos ? 0 : a.k + 1;
              const std::size_t bk = b.k == npos ? 0 : b.k + 1;
              return std::tie(a.i, a.j, ak, a.kind) < std::tie(b.i, b.j, bk, b.kind);
            });
  report.ok = report.violations.empty();
  return report;
}

inline ValidationReport validate_metric(const FiniteMetricSpace& space, double tol) {
  return validate_metric(space.rows(), tol);
}

/// Largest excess of d(x,z) over max{d(x,y), d(y,z)} across all triples,
/// clamped below at zero. Zero exactly on ultrametric spaces.
inline double ultrametric_defect(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = d - std::max(space.distance(i, k), space.distance(k, j));
        if (excess > worst) worst = excess;
      }
    }
  }
  return worst;
}

/// True iff d(x,z) <= max{d(x,y), d(y,z)} + tol for all triples.
inline bool is_ultrametric(const FiniteMetricSpace& space, double tol) {
  if (tol < 0) throw InputError("tolerance must be nonnegative");
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (d > std::max(space.distance(i, k), space.distance(k, j)) + tol) return false;
      }
    }
  }
  return true;
}

inline double diameter(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, space.distance(i, j));
  return best;
}

}  // namespace metricspace
