#include "riesz/rng.h"

#include <gtest/gtest.h>

#include "riesz/quasi_random.h"

namespace riesz {
namespace {

TEST(SubSeed, DeterministicAndTagSensitive) {
  EXPECT_EQ(SubSeed(7, "a", 3), SubSeed(7, "a", 3));
  EXPECT_NE(SubSeed(7, "a", 3), SubSeed(7, "b", 3));
  EXPECT_NE(SubSeed(7, "a", 3), SubSeed(7, "a", 4));
  EXPECT_NE(SubSeed(7, "a", 3), SubSeed(8, "a", 3));
}

TEST(Rng, ReproducibleStreams) {
  Rng a = MakeRng(11, "x"), b = MakeRng(11, "x");
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(Uniform(a), Uniform(b));
    EXPECT_EQ(Gaussian(a), Gaussian(b));
  }
}

TEST(Rng, UniformRangeAndGaussianMoments) {
  Rng rng = MakeRng(12, "moments");
  double sum = 0, sum_sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = Uniform(rng, -2.0, 3.0);
    ASSERT_GE(u, -2.0);
    ASSERT_LT(u, 3.0);
    const double g = Gaussian(rng);
    sum += g;
    sum_sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
}

TEST(Rng, RandomOrthogonalIsOrthogonal) {
  Rng rng = MakeRng(13, "orth");
  const Matrix q = RandomOrthogonal(rng, 6);
  EXPECT_LE((q.transpose() * q - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(),
            1e-12);
  const SymMatrix p = RandomPsd(rng, 5, 3);
  EXPECT_GE(EigenvaluesSorted(p)(0), -1e-12);
}

TEST(QuasiRandom, BallAndSpherePoints) {
  const Matrix ball = BallSamples(4, 2000, 5);
  const Matrix sphere = SphereSamples(4, 2000, 5);
  for (int i = 0; i < 2000; ++i) {
    ASSERT_LE(ball.col(i).norm(), 1.0 + 1e-15);
    ASSERT_NEAR(sphere.col(i).norm(), 1.0, 1e-12);
  }
  // Nested prefixes.
  const Matrix prefix = BallSamples(4, 500, 5);
  EXPECT_EQ(prefix, ball.leftCols(500));
  // Quadrature oracle: E|x|^2 over the unit ball of R^n is n / (n + 2).
  double m2 = 0;
  for (int i = 0; i < 2000; ++i) m2 += ball.col(i).squaredNorm();
  EXPECT_NEAR(m2 / 2000, 4.0 / 6.0, 5e-3);
  // Sphere: E x_1^2 = 1/n.
  double s2 = 0;
  for (int i = 0; i < 2000; ++i) s2 += sphere(0, i) * sphere(0, i);
  EXPECT_NEAR(s2 / 2000, 0.25, 5e-3);
}

TEST(QuasiRandom, UnitBallVolume) {
  EXPECT_NEAR(UnitBallVolume(2), M_PI, 1e-14);
  EXPECT_NEAR(UnitBallVolume(3), 4.0 * M_PI / 3.0, 1e-14);
  EXPECT_NEAR(UnitBallVolume(4), M_PI * M_PI / 2.0, 1e-14);
}

}  // namespace
}  // namespace riesz
