#include "riesz/sphjet.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "riesz/rng.h"

namespace riesz {
namespace {

SphericalJet RandomJet(Rng& rng, int n) {
  const UnitVector sigma = RandomUnitVector(rng, n);
  return SphericalJet(sigma, TangentFrame(sigma), Gaussian(rng),
                      GaussianVector(rng, n - 1), RandomSymmetric(rng, n - 1));
}

TEST(Jet, TangentFrameIsOrthonormalComplement) {
  Rng rng = MakeRng(1, "frame");
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 20; ++k) {
      const UnitVector s = RandomUnitVector(rng, n);
      const Frame t = TangentFrame(s);
      EXPECT_EQ(t.rank(), n - 1);
      EXPECT_LE((t.basis().transpose() * s.vector()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_THROW(SphericalJet(UnitVector::Basis(3, 0), Frame::CoordinatePlane(3, {0, 1}),
                            0.0, Vector::Zero(2), SymMatrix::Zero(2)),
               std::invalid_argument);
}

TEST(Jet, TraceIdentity) {
  Rng rng = MakeRng(2, "trace");
  for (int k = 0; k < 1000; ++k) {
    const int n = 3 + k % 4;
    const double p = 1.0 + 4.0 * Uniform(rng);
    const SphericalJet jet = RandomJet(rng, n);
    const PhiTrace t = TraceOfPhi(jet, p);
    EXPECT_NEAR(t.trace, t.operator_value, 1e-12 * (1 + std::abs(t.trace)));
    // Independent route: trace of the ambient matrix.
    EXPECT_NEAR(AssemblePhiAmbient(jet, p).trace(), t.operator_value,
                1e-12 * (1 + std::abs(t.trace)) + 1e-12 * n);
  }
}

TEST(Jet, PhiOfConstantIsHessianOfKernel) {
  // g = -1, p = 3: u = -1/|x| has Hessian (I - 3 s s^T) at s.
  const UnitVector s = UnitVector::Normalized(Vector::Ones(4));
  const SphericalJet jet(s, TangentFrame(s), -1.0, Vector::Zero(3), SymMatrix::Zero(3));
  const Matrix expected = Matrix::Identity(4, 4) - 3.0 * s.vector() * s.vector().transpose();
  EXPECT_LE((AssemblePhiAmbient(jet, 3.0).matrix() - expected).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(Jet, FiniteDifferences) {
  const PointFunction f = [](const Vector& x) { return x(0) * x(0) * x(1) + std::sin(x(2)); };
  Vector x(3);
  x << 0.3, -0.2, 0.5;
  const Vector g = FdGradient(f, x, 1e-5);
  EXPECT_NEAR(g(0), 2 * 0.3 * -0.2, 1e-9);
  EXPECT_NEAR(g(2), std::cos(0.5), 1e-9);
  const SymMatrix h = FdHessian(f, x, 1e-4);
  EXPECT_NEAR(h(0, 1), 0.6, 1e-6);
  EXPECT_NEAR(h(2, 2), -std::sin(0.5), 1e-6);
  EXPECT_THROW(FdHessian([](const Vector&) { return std::nan(""); }, x, 1e-4),
               std::domain_error);
  EXPECT_THROW(JetFromFunction(f, UnitVector::Basis(3, 0), 1.0), std::invalid_argument);
}

TEST(Jet, JetOfRestrictedQuadratic) {
  // g = <B s, s> on the sphere: Dg = 2 T^T B s, Hess g = 2 T^T B T - 2 g I.
  Rng rng = MakeRng(3, "quadratic");
  for (int k = 0; k < 20; ++k) {
    const SymMatrix b = RandomSymmetric(rng, 4);
    const UnitVector s = RandomUnitVector(rng, 4);
    const PointFunction g = [&b](const Vector& x) { return x.dot(b.matrix() * x); };
    const SphericalJet jet = JetFromFunction(g, s, 1e-4);
    const Matrix& t = jet.tangent().basis();
    const double g0 = g(s.vector());
    EXPECT_NEAR(jet.g(), g0, 1e-14);
    EXPECT_LE((jet.dg() - 2.0 * t.transpose() * b.matrix() * s.vector()).cwiseAbs().maxCoeff(),
              1e-7);
    const Matrix hess = 2.0 * t.transpose() * b.matrix() * t - 2.0 * g0 * Matrix::Identity(3, 3);
    EXPECT_LE((jet.hess().matrix() - hess).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(FdCheck, CrossCheckOnLowDegreeHarmonics) {
  Rng rng = MakeRng(4, "fdcheck");
  for (int n : {3, 4}) {
    for (double p : {1.0, 2.0, 3.0, 4.0}) {
      for (int k = 0; k < 5; ++k) {
        const double c = Gaussian(rng);
        const Vector a = GaussianVector(rng, n);
        Matrix m = RandomSymmetric(rng, n).matrix();
        m -= (m.trace() / n) * Matrix::Identity(n, n);
        const std::vector<PointFunction> gs = {
            [c](const Vector&) { return c; },
            [a](const Vector& x) { return a.dot(x); },
            [m](const Vector& x) { return x.dot(m * x); }};
        const UnitVector s = RandomUnitVector(rng, n);
        for (const PointFunction& g : gs) {
          const FdCheckReport r = FdCrossCheck(g, s, p, 1e-4);
          EXPECT_LE(r.residual, 1e-5) << "n=" << n << " p=" << p;
        }
      }
    }
  }
}

TEST(FdCheck, DetectsWrongHomogeneity) {
  // The jet map for p = 3 does not describe the p = 4 extension.
  const PointFunction g = [](const Vector& x) { return x(0); };
  const UnitVector s = UnitVector::Normalized(Vector::Ones(3));
  const FdCheckReport r = FdCrossCheck(g, s, 3.0, 1e-4);
  const SymMatrix other = AssemblePhiAmbient(JetFromFunction(g, s, 1e-4), 4.0);
  EXPECT_GT((r.fd_hessian.matrix() - other.matrix()).cwiseAbs().maxCoeff(), 0.1);
}

struct Family {
  std::string label;
  Subequation f;
  double p;
};

TEST(SphereSubeq, KernelJetLiesOnBoundary) {
  std::vector<Family> fams;
  for (int n : {3, 4}) {
    for (double p : {1.5, 2.0, 3.0}) {
      fams.push_back({"minmax", Subequation::MinMax(n, p), p});
      fams.push_back({"min2", Subequation::Min2(n, p), p});
      fams.push_back({"pconvex", Subequation::PConvex(n, p), p});
    }
    fams.push_back({"pconvex", Subequation::PConvex(n, n), static_cast<double>(n)});
    fams.push_back({"trace", Subequation::Trace(n), static_cast<double>(n)});
    // delta = (p-1) n / (n-p) moves the orphant to characteristic p.
    fams.push_back({"expansion", Expand(Subequation::Orphant(n), 0.5 * n / (n - 1.5)), 1.5});
    if (n == 4) fams.push_back({"expansion", Expand(Subequation::Orphant(n), 4.0), 2.5});
  }
  fams.push_back({"complex", Subequation::ComplexLift(Subequation::Orphant(2),
                                                      ComplexStructure::Standard(2)), 2.0});
  fams.push_back({"quaternionic",
                  Subequation::QuaternionLift(Subequation::Orphant(2),
                                              QuaternionStructure::Standard(2)),
                  4.0});
  Rng rng = MakeRng(5, "boundary");
  for (const Family& fam : fams) {
    const int n = fam.f.dim();
    // The kernel value on the unit sphere: +1 for p < 2, -1 for p > 2.
    const double g = fam.p < 2.0 ? 1.0 : -1.0;
    for (int k = 0; k < 10; ++k) {
      const UnitVector s = RandomUnitVector(rng, n);
      const SphericalJet jet(s, TangentFrame(s), g, Vector::Zero(n - 1),
                             SymMatrix::Zero(n - 1));
      const MemberResult m = SphereSubeqMember(fam.f, jet, fam.p);
      EXPECT_TRUE(m.member) << fam.label << " p=" << fam.p;
      EXPECT_LE(std::abs(m.margin), 1e-9) << fam.label << " n=" << n << " p=" << fam.p;
      // Slightly above the kernel leaves the subequation.
      const SphericalJet up(s, TangentFrame(s), g, Vector::Zero(n - 1),
                            SymMatrix::Identity(n - 1) * -1e-3);
      EXPECT_LT(SphereSubeqMember(fam.f, up, fam.p).margin, 0.0) << fam.label;
    }
  }
}

TEST(Structure, ComplexRadialLogarithm) {
  const ComplexStructure cs = ComplexStructure::Standard(2);
  Rng rng = MakeRng(6, "complex");
  for (int k = 0; k < 10; ++k) {
    UnitVector s = RandomUnitVector(rng, 4);
    while (std::hypot(s.vector()(0), s.vector()(2)) < 0.5) s = RandomUnitVector(rng, 4);
    // U = log|x|: hermitian Hessian vanishes on C s and is the identity
    // on its complement.
    const LineBlockReport r =
        ComplexRadialStructureCheck([](const Vector&) { return 0.0; }, 1.0, s, cs);
    EXPECT_LE(r.line_block_norm, 1e-6);
    ASSERT_EQ(r.horizontal_spectrum.size(), 2);
    EXPECT_NEAR(r.horizontal_spectrum(0), 1.0, 1e-6);
    EXPECT_NEAR(r.horizontal_spectrum(1), 1.0, 1e-6);
    // U = log|z1| is pluriharmonic away from z1 = 0.
    const PointFunction g = [](const Vector& x) {
      return std::log(std::hypot(x(0), x(2)) / x.norm());
    };
    const LineBlockReport z = ComplexRadialStructureCheck(g, 1.0, s, cs);
    EXPECT_LE(z.line_block_norm, 1e-6);
    EXPECT_LE(z.horizontal_spectrum.cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(Structure, ComplexNegativeControls) {
  const ComplexStructure cs = ComplexStructure::Standard(2);
  const UnitVector s = UnitVector::Normalized(Vector::Ones(4));
  // Not constant along complex lines.
  EXPECT_THROW(ComplexRadialStructureCheck([](const Vector& x) { return x(0); }, 1.0, s, cs),
               std::invalid_argument);
  // Constant on complex lines but not plurisubharmonic: U = 2 log|z1| - log|x|
  // has hermitian spectrum -1 off the line.
  const PointFunction g = [](const Vector& x) {
    return std::log((x(0) * x(0) + x(2) * x(2)) / x.squaredNorm());
  };
  const LineBlockReport r = ComplexRadialStructureCheck(g, 1.0, s, cs);
  EXPECT_LE(r.line_block_norm, 1e-6);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-5);
}

TEST(Structure, QuaternionicKernel) {
  const QuaternionStructure qs = QuaternionStructure::Standard(2);
  Rng rng = MakeRng(7, "quaternionic");
  for (int k = 0; k < 10; ++k) {
    const UnitVector s = RandomUnitVector(rng, 8);
    // U = -1/|x|^2: quaternionic hermitian Hessian is 2 (I - P_{H s}).
    const LineBlockReport r =
        QuaternionicBlockCheck([](const Vector&) { return -1.0; }, s, qs);
    EXPECT_LE(r.line_block_norm, 1e-5);
    ASSERT_EQ(r.horizontal_spectrum.size(), 4);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.horizontal_spectrum(i), 2.0, 1e-5);
  }
  // U = -1/|q1|^2 on the line H e_1.
  const PointFunction g = [](const Vector& x) {
    return -x.squaredNorm() / x.head(4).squaredNorm();
  };
  Vector v = Vector::Zero(8);
  v.head(4) << 0.5, 0.5, -0.5, 0.5;
  const LineBlockReport q = QuaternionicBlockCheck(g, UnitVector(v), qs);
  EXPECT_LE(q.line_block_norm, 1e-5);
  EXPECT_THROW(QuaternionicBlockCheck([](const Vector& x) { return x(1); },
                                      UnitVector(v), qs),
               std::invalid_argument);
}

}  // namespace
}  // namespace riesz
