#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "test_support.hpp"

using namespace metricspace;
using testsupport::equilateral;
using testsupport::line3;
using testsupport::two_point;

namespace {

double enumeration_minimum(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  double best = std::numeric_limits<double>::infinity();
  for (const Correspondence& rel : enumerate_correspondences(x, y))
    best = std::min(best, distortion(rel, x, y));
  return best / 2;
}

}  // namespace

TEST(DistortionTest, KnownValues) {
  const FiniteMetricSpace x = line3();
  Correspondence identity{{{0, 0}, {1, 1}, {2, 2}}};
  EXPECT_DOUBLE_EQ(distortion(identity, x, x), 0.0);

  EXPECT_DOUBLE_EQ(distortion(full_correspondence(3, 1), x, one_point()), diameter(x));

  Correspondence bijection{{{0, 0}, {1, 1}}};
  EXPECT_DOUBLE_EQ(distortion(bijection, two_point(2), two_point(6)), 4.0);

  EXPECT_THROW(distortion(Correspondence{}, x, x), InputError);
  EXPECT_THROW(distortion(Correspondence{{{0, 7}}}, x, x), InputError);
}

TEST(InverseTest, InvolutionAndDistortionPreserved) {
  Correspondence rel{{{0, 1}, {1, 0}, {2, 1}}};
  EXPECT_EQ(inverse(inverse(rel)), rel);

  const FiniteMetricSpace x = line3();
  const FiniteMetricSpace y = two_point(1.5);
  EXPECT_DOUBLE_EQ(distortion(inverse(rel), y, x), distortion(rel, x, y));

  Correspondence identity{{{0, 0}, {1, 1}}};
  EXPECT_EQ(inverse(identity), identity);
}

TEST(HausdorffTest, KnownValues) {
  const FiniteMetricSpace x = line3();
  EXPECT_DOUBLE_EQ(hausdorff(x, {0, 1}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff(x, {0}, {0, 2}), 2.0);
  EXPECT_THROW(hausdorff(x, {}, {0}), InputError);
  EXPECT_THROW(hausdorff(x, {0}, {9}), InputError);
}

TEST(HausdorffTest, MatchesBruteForceDefinition) {
  const FiniteMetricSpace space = random_euclidean(8, 2, 21);
  const std::vector<std::vector<std::size_t>> subsets = {
      {0, 1, 2}, {3, 4}, {0, 5, 6, 7}, {2}, {1, 3, 5, 7}};
  for (const auto& a : subsets)
    for (const auto& b : subsets) {
      double forward = 0.0;
      for (std::size_t p : a) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t q : b) nearest = std::min(nearest, space.distance(p, q));
        forward = std::max(forward, nearest);
      }
      double backward = 0.0;
      for (std::size_t q : b) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t p : a) nearest = std::min(nearest, space.distance(p, q));
        backward = std::max(backward, nearest);
      }
      EXPECT_DOUBLE_EQ(hausdorff(space, a, b), std::max(forward, backward));
    }
}

TEST(EnumerateTest, CountsAndShape) {
  EXPECT_EQ(enumerate_correspondences(one_point(), one_point()).size(), 1u);
  EXPECT_EQ(enumerate_correspondences(two_point(1), two_point(2)).size(), 7u);
  EXPECT_EQ(enumerate_correspondences(one_point(), equilateral(3, 1)).size(), 1u);

  const auto all = enumerate_correspondences(two_point(1), equilateral(3, 1));
  std::set<std::vector<IndexPair>> unique;
  for (const Correspondence& rel : all) {
    EXPECT_TRUE(is_correspondence(rel, 2, 3));
    unique.insert(rel.pairs);
  }
  EXPECT_EQ(unique.size(), all.size());

  EXPECT_THROW(enumerate_correspondences(equilateral(4, 1), equilateral(4, 1)), ResourceError);
}

TEST(GhExactTest, IdentityPair) {
  const FiniteMetricSpace x = random_euclidean(4, 3, 33);
  const GhResult result = gh_exact(x, x);
  EXPECT_TRUE(result.exact);
  EXPECT_DOUBLE_EQ(result.lower, 0.0);
  EXPECT_DOUBLE_EQ(result.upper, 0.0);
  ASSERT_TRUE(result.witness.has_value());
  // Distinct pairwise distances force the unique optimal correspondence.
  EXPECT_EQ(result.witness->pairs,
            (std::vector<IndexPair>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
}

TEST(GhExactTest, AgainstOnePoint) {
  const FiniteMetricSpace x = line3();
  const GhResult result = gh_exact(x, one_point());
  EXPECT_TRUE(result.exact);
  EXPECT_DOUBLE_EQ(result.upper, diameter(x) / 2);
  ASSERT_TRUE(result.witness.has_value());
  EXPECT_DOUBLE_EQ(distortion(*result.witness, x, one_point()), diameter(x));
}

TEST(GhExactTest, TwoPointPair) {
  const GhResult result = gh_exact(two_point(2), two_point(6));
  EXPECT_TRUE(result.exact);
  EXPECT_DOUBLE_EQ(result.upper, 2.0);
  EXPECT_DOUBLE_EQ(enumeration_minimum(two_point(2), two_point(6)), 2.0);
}

TEST(GhExactTest, EquilateralPair) {
  const GhResult result = gh_exact(equilateral(3, 1), equilateral(3, 2));
  EXPECT_TRUE(result.exact);
  EXPECT_DOUBLE_EQ(result.upper, 0.5);
  EXPECT_DOUBLE_EQ(enumeration_minimum(equilateral(3, 1), equilateral(3, 2)), 0.5);
}

TEST(GhExactTest, MatchesEnumerationOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const FiniteMetricSpace x = testsupport::random_space(1 + seed % 3, seed);
    const FiniteMetricSpace y = testsupport::random_space(1 + (seed + 1) % 3, seed + 40);
    const GhResult result = gh_exact(x, y);
    ASSERT_TRUE(result.exact);
    EXPECT_NEAR(result.upper, enumeration_minimum(x, y), 1e-12) << "seed " << seed;
    ASSERT_TRUE(result.witness.has_value());
    EXPECT_TRUE(is_correspondence(*result.witness, x.size(), y.size()));
    EXPECT_DOUBLE_EQ(distortion(*result.witness, x, y), 2 * result.upper) << "seed " << seed;
  }
}

TEST(GhExactTest, SymmetricAndTriangle) {
  const FiniteMetricSpace a = testsupport::random_space(4, 2);
  const FiniteMetricSpace b = testsupport::random_space(3, 11);
  const FiniteMetricSpace c = testsupport::random_space(4, 8);
  const double ab = gh_exact(a, b).upper;
  const double ba = gh_exact(b, a).upper;
  EXPECT_EQ(ab, ba);
  const double ac = gh_exact(a, c).upper;
  const double cb = gh_exact(c, b).upper;
  EXPECT_LE(ac, gh_exact(a, b).upper + cb + 1e-12);
}

TEST(GhExactTest, BudgetExhaustionDegradesToInterval) {
  const FiniteMetricSpace x = random_euclidean(5, 3, 1);
  const FiniteMetricSpace y = random_euclidean(5, 3, 2);
  const GhResult full = gh_exact(x, y);
  ASSERT_TRUE(full.exact);

  const GhResult capped = gh_exact(x, y, GhLimits{1, 30.0});
  EXPECT_FALSE(capped.exact);
  EXPECT_TRUE(capped.timed_out);
  EXPECT_LE(capped.lower, full.upper);
  EXPECT_GE(capped.upper, full.upper);
  ASSERT_TRUE(capped.witness.has_value());
  EXPECT_DOUBLE_EQ(distortion(*capped.witness, x, y), 2 * capped.upper);
}

TEST(GhExactTest, ProvenanceCarriesConsultedBounds) {
  const GhResult result = gh_exact(two_point(2), two_point(6));
  bool saw_diam = false, saw_trivial = false;
  for (const auto& [name, value] : result.provenance) {
    if (name == "diam") {
      saw_diam = true;
      EXPECT_DOUBLE_EQ(value, 2.0);
    }
    if (name == "trivial_upper") {
      saw_trivial = true;
      EXPECT_DOUBLE_EQ(value, 3.0);
    }
  }
  EXPECT_TRUE(saw_diam);
  EXPECT_TRUE(saw_trivial);
}

TEST(GhBoundsTest, UltraBoundOnLineVersusEquilateral) {
  const auto bounds = gh_lower_bounds(line3(), equilateral(3, 2));
  double ultra = -1.0, diam_bound = -1.0;
  for (const auto& [name, value] : bounds) {
    if (name == "ultra") ultra = value;
    if (name == "diam") diam_bound = value;
  }
  EXPECT_DOUBLE_EQ(ultra, 0.5);
  EXPECT_DOUBLE_EQ(diam_bound, 0.0);
}

TEST(GhBoundsTest, BoundsAreTrueBounds) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const FiniteMetricSpace x = testsupport::random_space(2 + seed % 4, seed);
    const FiniteMetricSpace y = testsupport::random_space(2 + (seed + 2) % 4, seed + 19);
    const double exact = gh_exact(x, y).upper;
    for (const auto& [name, value] : gh_lower_bounds(x, y))
      EXPECT_LE(value, exact + 1e-12) << name << " seed " << seed;
    EXPECT_GE(gh_upper_bound_trivial(x, y), exact - 1e-12) << "seed " << seed;
  }
}

TEST(GhBoundsTest, IdenticalSpacesGiveZeroLowerBounds) {
  const FiniteMetricSpace x = testsupport::random_space(4, 5);
  for (const auto& [name, value] : gh_lower_bounds(x, x)) EXPECT_DOUBLE_EQ(value, 0.0) << name;
}

TEST(GhBoundsTest, TrivialUpperKnownValues) {
  EXPECT_DOUBLE_EQ(gh_upper_bound_trivial(one_point(), line3()), 1.0);
  EXPECT_DOUBLE_EQ(gh_upper_bound_trivial(two_point(2), two_point(6)), 3.0);
}

TEST(ProductCorrespondenceTest, LiftPreservesDistortion) {
  Correspondence identity{{{0, 0}, {1, 1}}};
  const FiniteMetricSpace x = two_point(2);
  const FiniteMetricSpace y = two_point(6);
  const FiniteMetricSpace a = two_point(1);

  const Correspondence lifted = product_correspondence(identity, a);
  EXPECT_EQ(lifted.pairs.size(), 4u);
  EXPECT_DOUBLE_EQ(distortion(lifted, product_l1(x, a), product_l1(y, a)), 4.0);

  const Correspondence self = product_correspondence(identity, a);
  EXPECT_DOUBLE_EQ(distortion(self, product_l1(x, a), product_l1(x, a)), 0.0);

  EXPECT_THROW(product_correspondence(Correspondence{}, a), InputError);
}

TEST(ProductCorrespondenceTest, RandomRelationsKeepDistortion) {
  const FiniteMetricSpace x = testsupport::random_space(3, 14);
  const FiniteMetricSpace y = testsupport::random_space(3, 15);
  const FiniteMetricSpace a = testsupport::random_space(2, 16);
  for (const Correspondence& rel : enumerate_correspondences(x, y)) {
    const Correspondence lifted = product_correspondence(rel, a);
    EXPECT_NEAR(distortion(lifted, product_l1(x, a), product_l1(y, a)), distortion(rel, x, y),
                1e-12);
  }
}
