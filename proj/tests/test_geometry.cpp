#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/sampling.hpp"
#include "torus_spectrum/statistics.hpp"

using namespace torus_spectrum;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

TorusPoint random_point(std::size_t dim, RandomStream& rng) {
  TorusPoint x(dim);
  for (std::size_t i = 1; i <= dim; ++i) x.set(i, rng.uniform());
  return x;
}
}  // namespace

TEST(TorusCoordinate, CanonicalRepresentative) {
  EXPECT_DOUBLE_EQ(TorusCoordinate(1.25).value(), 0.25);
  EXPECT_DOUBLE_EQ(TorusCoordinate(-0.25).value(), 0.75);
  EXPECT_EQ(TorusCoordinate(-1e-300).value(), 0.0);
  EXPECT_EQ(TorusCoordinate(3.0).value(), 0.0);
  const TorusCoordinate s = TorusCoordinate(0.75) + TorusCoordinate(0.5);
  EXPECT_DOUBLE_EQ(s.value(), 0.25);
  const TorusCoordinate d = TorusCoordinate(0.1) - TorusCoordinate(0.3);
  EXPECT_NEAR(d.value(), 0.8, 1e-15);
  EXPECT_THROW(TorusCoordinate(std::nan("")), ValidationError);
}

TEST(CircleDist, Examples) {
  EXPECT_EQ(circle_dist(TorusCoordinate(0.0), TorusCoordinate(0.0)), 0.0);
  EXPECT_NEAR(circle_dist(TorusCoordinate(0.1), TorusCoordinate(0.9)), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(circle_dist(TorusCoordinate(0.25), TorusCoordinate(0.75)), 0.5);
}

TEST(DualExponent, ClosedFormAndRejection) {
  EXPECT_DOUBLE_EQ(DualExponent(2.0).q(), 2.0);
  EXPECT_DOUBLE_EQ(DualExponent(4.0).q(), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(DualExponent(1.5).q(), 3.0);
  EXPECT_EQ(DualExponent(kInf).q(), 1.0);
  EXPECT_TRUE(DualExponent::infinity().is_infinite());
  EXPECT_THROW(DualExponent(1.0), ValidationError);
  EXPECT_THROW(DualExponent(0.5), ValidationError);
  EXPECT_THROW(DualExponent(std::nan("")), ValidationError);
}

TEST(DistP, Examples) {
  const TorusPoint x{0.0, 0.0};
  EXPECT_EQ(dist_p(x, x, DualExponent(2.0)), 0.0);
  EXPECT_NEAR(dist_p(x, TorusPoint{0.3, 0.4}, DualExponent(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(dist_p(TorusPoint{0, 0, 0}, TorusPoint{0.1, 0.2, 0.05}, DualExponent::infinity()), 0.2, 1e-15);
  EXPECT_THROW(dist_p(x, TorusPoint{0.1}, DualExponent(2.0)), ValidationError);
}

TEST(TorusPoint, DefaultsAndBounds) {
  TorusPoint x(3);
  EXPECT_EQ(x.value(2), 0.0);
  EXPECT_EQ(x.value(10), 0.0);  // beyond the truncation: convention value 0
  x.set(2, 1.7);
  EXPECT_NEAR(x.value(2), 0.7, 1e-15);
  EXPECT_THROW(x.set(4, 0.1), ValidationError);
  EXPECT_THROW(x.value(0), ValidationError);
}

TEST(DistP, MetricPropertiesOnRandomTriples) {
  RandomStream rng(11);
  for (double p : {1.5, 2.0, 3.0, kInf}) {
    const DualExponent d(p);
    for (int t = 0; t < 10000 / 4; ++t) {
      const std::size_t dim = 1 + rng.uniform_index(6);
      const TorusPoint x = random_point(dim, rng), y = random_point(dim, rng), z = random_point(dim, rng);
      const double xy = dist_p(x, y, d), yx = dist_p(y, x, d), xz = dist_p(x, z, d), zy = dist_p(z, y, d);
      ASSERT_EQ(xy, yx);
      ASSERT_EQ(dist_p(x, x, d), 0.0);
      ASSERT_LE(xy, xz + zy + 1e-12);
      if (!(x == y)) {
        ASSERT_GT(xy, 0.0);
      }
    }
  }
}

TEST(CircleDist, TriangleInequality) {
  RandomStream rng(12);
  for (int t = 0; t < 10000; ++t) {
    const TorusCoordinate a(rng.uniform()), b(rng.uniform()), c(rng.uniform());
    ASSERT_LE(circle_dist(a, b), circle_dist(a, c) + circle_dist(c, b) + 1e-12);
    ASSERT_EQ(circle_dist(a, b), circle_dist(b, a));
    ASSERT_LE(circle_dist(a, b), 0.5);
  }
}

TEST(DistP, MonotoneNonincreasingInP) {
  RandomStream rng(13);
  const double ps[] = {1.1, 1.5, 2.0, 3.0, 7.0, kInf};
  for (int t = 0; t < 2000; ++t) {
    const std::size_t dim = 1 + rng.uniform_index(8);
    const TorusPoint x = random_point(dim, rng), y = random_point(dim, rng);
    double prev = kInf;
    for (double p : ps) {
      const double v = dist_p(x, y, DualExponent(p));
      ASSERT_LE(v, prev + 1e-12);
      prev = v;
    }
  }
}

TEST(SubtorusSpec, Validation) {
  EXPECT_NO_THROW(SubtorusSpec(3, {1, 3}, {{2, 0.7}}, TailPolicy::fixed_at_base));
  EXPECT_THROW(SubtorusSpec(3, {1, 3}, {{3, 0.7}}, TailPolicy::fixed_at_base), ValidationError);  // overlap
  EXPECT_THROW(SubtorusSpec(3, {1}, {{2, 0.7}}, TailPolicy::fixed_at_base), ValidationError);     // gap at 3
  EXPECT_THROW(SubtorusSpec(3, {4}, {}, TailPolicy::fixed_at_base), ValidationError);
  EXPECT_THROW(SubtorusSpec(3, {2, 1}, {{3, 0.1}}, TailPolicy::fixed_at_base), ValidationError);
  EXPECT_THROW(SubtorusSpec(3, {1, 2, 3}, {{4, 0.1}}, TailPolicy::fixed_at_base), ValidationError);

  const SubtorusSpec s(3, {1, 3}, {{2, 1.7}}, TailPolicy::free_with_tail_bound);
  EXPECT_TRUE(s.is_free(1));
  EXPECT_FALSE(s.is_free(2));
  EXPECT_TRUE(s.is_free(99));  // free tail
  EXPECT_NEAR(s.fixed_value(2), 0.7, 1e-15);
  EXPECT_THROW(s.fixed_value(3), ValidationError);
  EXPECT_EQ(tail_policy_from_string(to_string(TailPolicy::fixed_at_base)), TailPolicy::fixed_at_base);
}

TEST(SamplePoint, EmptyFreeSetGivesBasePoint) {
  const SubtorusSpec s(2, {}, {{1, 0.3}, {2, 0.9}}, TailPolicy::fixed_at_base);
  RandomStream rng(1);
  EXPECT_EQ(sample_point(s, rng), (TorusPoint{0.3, 0.9}));
}

TEST(SamplePoint, FixedCoordinateCopiedExactly) {
  const SubtorusSpec s(3, {1, 3}, {{2, 0.7}}, TailPolicy::fixed_at_base);
  RandomStream rng(2);
  const DualExponent d(2.0);
  for (int t = 0; t < 1000; ++t) {
    const TorusPoint x = sample_point(s, rng);
    ASSERT_EQ(x.value(2), 0.7);
    // restricted to the pinned coordinates the point sits on the base
    ASSERT_EQ(dist_p(TorusPoint{x.value(2)}, TorusPoint{0.7}, d), 0.0);
  }
}

TEST(SamplePoint, FreeCoordinateIsUniform) {
  const SubtorusSpec s(1, {1}, {}, TailPolicy::fixed_at_base);
  RandomStream rng(3);
  std::vector<double> xs(100000);
  for (double& v : xs) v = sample_point(s, rng).value(1);
  EXPECT_GT(ks_uniform(xs).p_value, 0.001);
}
