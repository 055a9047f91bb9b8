#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metricspace/chain.hpp"
#include "metricspace/errors.hpp"
#include "metricspace/gh.hpp"
#include "metricspace/metric_space.hpp"

namespace metricspace {

inline constexpr std::size_t kDefaultSampleCap = 10000;

/// Kuratowski embedding of a finite space: row i is the function
/// y -> d(x_i, y) - d(x_0, y), so the basepoint row is all zeros and
/// sup-norm row distances reproduce the original metric.
struct Embedding {
  std::size_t basepoint = 0;
  std::vector<std::vector<double>> coords;
};

inline Embedding embed(const FiniteMetricSpace& space, std::size_t basepoint = 0) {
  if (basepoint >= space.size()) throw InputError("embedding basepoint out of range");
  Embedding out;
  out.basepoint = basepoint;
  out.coords.assign(space.size(), std::vector<double>(space.size(), 0.0));
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t k = 0; k < space.size(); ++k)
      out.coords[i][k] = space.distance(i, k) - space.distance(basepoint, k);
  return out;
}

inline double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("sup_distance requires equal dimensions");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

/// Where a sampled point came from: an interior point of the straight
/// segment between the images of endpoints i and j, at parameter s.
struct SegmentPoint {
  std::size_t i = 0;
  std::size_t j = 0;
  double s = 0.0;
  bool operator==(const SegmentPoint&) const = default;
};

/// An original point (by index) or a segment sample.
using Origin = std::variant<std::size_t, SegmentPoint>;

/// Finite sample of D_t(X): the embedded originals plus sampled interior
/// points of every segment joining images at original distance <= t,
/// under sup-norm distances.
struct SampledDt {
  FiniteMetricSpace space;
  std::vector<Origin> origins;
  double t = 0.0;
  double step = 0.0;
};

inline SampledDt sample_dt(const FiniteMetricSpace& space, double t, double step,
                           std::size_t max_points = kDefaultSampleCap) {
  if (!(t >= 0.0)) throw InputError("sample_dt requires t >= 0");
  if (!(step > 0.0)) throw InputError("sample_dt requires step > 0");
  const std::size_t n = space.size();
  const Embedding phi = embed(space, 0);

  // Originals first, then segments by endpoint pair, then by parameter;
  // coincident coordinates keep their first occurrence.
  std::vector<std::vector<double>> points;
  std::vector<std::string> labels;
  std::vector<Origin> origins;
  std::map<std::vector<double>, std::size_t> seen;
  auto add = [&](std::vector<double> coord, std::string label, Origin origin) {
    if (seen.count(coord)) return;
    if (points.size() == max_points) throw ResourceError("sample_dt size cap exceeded");
    seen.emplace(coord, points.size());
    points.push_back(std::move(coord));
    labels.push_back(std::move(label));
    origins.push_back(std::move(origin));
  };

  for (std::size_t i = 0; i < n; ++i) add(phi.coords[i], space.label(i), Origin{i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      if (!(d > 0.0) || d > t) continue;
      const auto m = static_cast<std::size_t>(std::ceil(d / step));
      for (std::size_t k = 1; k < m; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(m);
        std::vector<double> coord(n, 0.0);
        for (std::size_t c = 0; c < n; ++c)
          coord[c] = (1.0 - s) * phi.coords[i][c] + s * phi.coords[j][c];
        add(std::move(coord),
            space.label(i) + "~" + space.label(j) + "@" + std::to_string(k) + "/" +
                std::to_string(m),
            Origin{SegmentPoint{i, j, s}});
      }
    }

  const std::size_t total = points.size();
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t p = 0; p < total; ++p)
    for (std::size_t q = p + 1; q < total; ++q) {
      const double d = sup_distance(points[p], points[q]);
      dist[p * total + q] = d;
      dist[q * total + p] = d;
    }
  return SampledDt{FiniteMetricSpace(std::move(labels), std::move(dist), space.name()),
                   std::move(origins), t, step};
}

/// The certificate correspondence R = {(x, q) : d(Phi(x), q) <= t/2} between
/// X and its sampled D_t; its distortion is <= t, so d_GH(X, D_t) <= t/2.
/// Membership gets a 1e-12 slack so float rounding in the sample coordinates
/// cannot break surjectivity.
inline Correspondence dt_correspondence(const FiniteMetricSpace& space, const SampledDt& dt) {
  if (dt.origins.size() != dt.space.size())
    throw InputError("sampled space and origins disagree in size");
  std::vector<std::size_t> image(space.size(), npos);
  for (std::size_t q = 0; q < dt.origins.size(); ++q)
    if (const auto* original = std::get_if<std::size_t>(&dt.origins[q])) {
      if (*original >= space.size()) throw InputError("origin index out of range");
      image[*original] = q;
    }
  for (std::size_t x = 0; x < space.size(); ++x)
    if (image[x] == npos) throw InputError("sampled space is missing an embedded original");

  const double reach = dt.t / 2 + 1e-12;
  Correspondence rel;
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t q = 0; q < dt.space.size(); ++q)
      if (dt.space.distance(image[x], q) <= reach) rel.pairs.push_back({x, q});
  return rel;
}

/// For c at least the bottleneck scale, the sampled D_c(X) is a single
/// chain component at the sample spacing (slack 1e-12 absorbs the rounding
/// in the spacing).
inline bool dt_connectivity_check(const FiniteMetricSpace& space, double c, double step) {
  return is_chain_connected(sample_dt(space, c, step).space, step + 1e-12);
}

}  // namespace metricspace
