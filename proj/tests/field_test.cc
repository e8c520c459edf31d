#include "riesz/field.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "riesz/expression.h"
#include "riesz/rng.h"

namespace riesz {
namespace {

TEST(RieszKernel, Examples) {
  EXPECT_DOUBLE_EQ(RieszKernel(2.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(RieszKernel(4.0, 2.0), -0.25);
  EXPECT_DOUBLE_EQ(RieszKernel(1.5, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(RieszKernel(1.0, 3.0), 3.0);
  EXPECT_THROW(RieszKernel(2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(RieszKernel(0.5, 1.0), std::invalid_argument);
}

TEST(Floor, ReplacesMinusInfinityAndNan) {
  EXPECT_EQ(FloorValue(-std::numeric_limits<double>::infinity()),
            kMinusInfinityFloor);
  EXPECT_EQ(FloorValue(std::nan("")), kMinusInfinityFloor);
  EXPECT_EQ(FloorValue(-3.0), -3.0);
  EXPECT_TRUE(IsSaturated(kMinusInfinityFloor));
  EXPECT_FALSE(IsSaturated(-1e6));
}

TEST(Expression, Grammar) {
  Vector x(3);
  x << 3.0, -4.0, 2.0;
  EXPECT_DOUBLE_EQ(Expression::Parse("x1 + 2*x2").Evaluate(x), -5.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("-x1^2").Evaluate(x), -9.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("2^3^2").Evaluate(x), 512.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("(x1 - x3) / 2").Evaluate(x), 0.5);
  EXPECT_DOUBLE_EQ(Expression::Parse("abs(x2)").Evaluate(x), 4.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("max(x1, x2, x3)").Evaluate(x), 3.0);
  EXPECT_NEAR(Expression::Parse("r").Evaluate(x), std::sqrt(29.0), 1e-15);
  EXPECT_DOUBLE_EQ(Expression::Parse("log(1)").Evaluate(x), 0.0);
  EXPECT_EQ(Expression::Parse("log(0)").Evaluate(x),
            -std::numeric_limits<double>::infinity());
  EXPECT_EQ(Expression::Parse("x3 + x1").max_coordinate(), 3);
}

TEST(Expression, Errors) {
  for (const char* bad : {"", "x0", "1 +", "(x1", "foo(x1)", "max()", "x1 x2",
                          "2 ** 3"}) {
    EXPECT_THROW(Expression::Parse(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(FieldFromExpression("x5", 4), std::invalid_argument);
}

TEST(Field, ExpressionFloorsLog) {
  const ScalarField f = FieldFromExpression("log(abs(x1))", 2);
  EXPECT_EQ(f(Vector::Unit(2, 1)), kMinusInfinityFloor);
  EXPECT_NEAR(f(Vector::Unit(2, 0) * std::exp(1.0)), 1.0, 1e-15);
}

TEST(Catalog, EveryIdBuildsAndEvaluates) {
  for (const std::string& id : CatalogIds()) {
    const int n = id == "quat_q1" ? 8 : 4;
    const ScalarField f = CatalogField(id, n, 3.0);
    EXPECT_EQ(f.dim, n);
    ASSERT_TRUE(f.natural_p.has_value()) << id;
    Vector x = Vector::Constant(n, 0.3);
    EXPECT_TRUE(std::isfinite(f(x))) << id;
  }
  EXPECT_THROW(CatalogField("nope", 3), std::invalid_argument);
  EXPECT_THROW(CatalogField("log_z1", 3), std::invalid_argument);
  EXPECT_THROW(CatalogField("quat_q1", 4 + 2), std::invalid_argument);
}

TEST(Catalog, KernelValues) {
  Vector x = Vector::Zero(3);
  x(0) = 2.0;
  EXPECT_DOUBLE_EQ(CatalogField("kernel", 3, 4.0)(x), -0.25);
  EXPECT_DOUBLE_EQ(CatalogField("kernel_plus_quadratic", 3, 4.0)(x), 3.75);
  EXPECT_DOUBLE_EQ(CatalogField("kernel_scaled", 3, 4.0)(x), -0.5);
  EXPECT_EQ(CatalogField("kernel", 3, 2.0)(Vector::Zero(3)), kMinusInfinityFloor);
  EXPECT_EQ(CatalogField("kernel", 3, 1.5)(Vector::Zero(3)), 0.0);
}

TEST(Catalog, StructuredFields) {
  Vector x = Vector::Zero(4);
  x(0) = 0.6;
  x(2) = 0.8;  // z1 = 0.6 + 0.8i
  EXPECT_NEAR(CatalogField("log_z1", 4)(x), 0.0, 1e-15);
  Vector y = Vector::Zero(4);
  y(1) = 1.0;  // z2 only
  EXPECT_EQ(CatalogField("log_z1", 4)(y), kMinusInfinityFloor);
  EXPECT_NEAR(CatalogField("max_log", 4)(y), 0.0, 1e-15);
  Vector q = Vector::Zero(8);
  q(3) = 0.5;
  EXPECT_NEAR(CatalogField("quat_q1", 8)(q), -4.0, 1e-12);
  q.setZero();
  q(5) = 1.0;
  EXPECT_EQ(CatalogField("quat_q1", 8)(q), kMinusInfinityFloor);
}

TEST(Catalog, ConvexSupportFunctions) {
  Rng rng = MakeRng(1, "support");
  for (const std::string id :
       {"abs_x1", "euclid_norm", "max_affine", "halfspace", "smooth_linear"}) {
    const ScalarField f = CatalogField(id, 3);
    ASSERT_TRUE(static_cast<bool>(f.support)) << id;
    for (int i = 0; i < 50; ++i) {
      const Vector x = GaussianVector(rng, 3);
      // Directional derivative at 0 by a one-sided difference.
      const double t = 1e-7;
      const double dd = (f(t * x) - f(Vector::Zero(3))) / t;
      EXPECT_NEAR(dd, f.support(x), 1e-5 * (1 + x.norm())) << id;
    }
  }
}

}  // namespace
}  // namespace riesz
