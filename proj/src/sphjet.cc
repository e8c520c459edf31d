#include "riesz/sphjet.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace riesz {

namespace {

constexpr double kLineConstancyTol = 1e-8;

double MaxAbs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double Checked(double v) {
  if (!std::isfinite(v)) {
    throw std::domain_error("finite differences: non-finite sample");
  }
  return v;
}

// Orthonormal basis of the orthogonal complement of span(cols).
Matrix Complement(const Matrix& cols) {
  const int n = static_cast<int>(cols.rows());
  const Matrix p = cols * cols.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(n, n) - p);
  const int k = n - static_cast<int>(cols.cols());
  return es.eigenvectors().rightCols(k);
}

LineBlockReport SplitBlocks(const SymMatrix& herm, const Matrix& line) {
  LineBlockReport rep;
  rep.line_block_norm = MaxAbs(line.transpose() * herm.matrix() * line);
  const Matrix comp = Complement(line);
  if (comp.cols() > 0) {
    rep.horizontal_spectrum =
        EigenvaluesSorted(SymMatrix(comp.transpose() * herm.matrix() * comp));
    rep.min_eigenvalue = rep.horizontal_spectrum(0);
  } else {
    rep.horizontal_spectrum = Vector(0);
  }
  return rep;
}

double LineDefect(const PointFunction& g, const Vector& sigma,
                  const std::vector<Vector>& directions) {
  const double g0 = g(sigma);
  double defect = 0.0;
  for (const Vector& d : directions) {
    for (int k = 1; k < 8; ++k) {
      const double th = k * std::numbers::pi / 4.0;
      const Vector x = std::cos(th) * sigma + std::sin(th) * d;
      defect = std::max(defect, std::abs(g(x) - g0));
    }
  }
  if (defect > kLineConstancyTol * (1.0 + std::abs(g0))) {
    throw std::invalid_argument("g is not constant along the structure line");
  }
  return defect;
}

PointFunction DegreeZero(const PointFunction& g) {
  return [g](const Vector& x) { return g(x / x.norm()); };
}

}  // namespace

SphericalJet::SphericalJet(const UnitVector& sigma, const Frame& tangent,
                           double g, const Vector& dg, const SymMatrix& hess)
    : sigma_(sigma), tangent_(tangent), g_(g), dg_(dg), hess_(hess) {
  const int n = sigma.dim();
  if (n < 2 || tangent.dim() != n || tangent.rank() != n - 1 ||
      dg.size() != n - 1 || hess.dim() != n - 1) {
    throw std::invalid_argument("SphericalJet: inconsistent dimensions");
  }
  if (MaxAbs(tangent.basis().transpose() * sigma.vector()) > 1e-10) {
    throw std::invalid_argument("SphericalJet: tangent frame not orthogonal to sigma");
  }
}

Matrix SphericalJet::Basis() const {
  Matrix q(dim(), dim());
  q << tangent_.basis(), sigma_.vector();
  return q;
}

Frame TangentFrame(const UnitVector& sigma) {
  const int n = sigma.dim();
  if (n < 2) throw std::invalid_argument("TangentFrame: need n >= 2");
  int skip = 0;
  sigma.vector().cwiseAbs().maxCoeff(&skip);
  Matrix cols(n, n);
  cols.col(0) = sigma.vector();
  for (int i = 0, c = 1; i < n; ++i) {
    if (i != skip) cols.col(c++) = Vector::Unit(n, i);
  }
  const Frame full = Frame::FromSpan(cols);
  return Frame(full.basis().rightCols(n - 1));
}

SymMatrix AssemblePhi(const SphericalJet& jet, double p) {
  const int n = jet.dim();
  const double g = jet.g();
  Matrix phi(n, n);
  phi.topLeftCorner(n - 1, n - 1) =
      jet.hess().matrix() - (p - 2.0) * g * Matrix::Identity(n - 1, n - 1);
  phi.topRightCorner(n - 1, 1) = -(p - 1.0) * jet.dg();
  phi.bottomLeftCorner(1, n - 1) = -(p - 1.0) * jet.dg().transpose();
  phi(n - 1, n - 1) = (p - 2.0) * (p - 1.0) * g;
  return SymMatrix(phi);
}

SymMatrix AssemblePhiAmbient(const SphericalJet& jet, double p) {
  const Matrix q = jet.Basis();
  return SymMatrix(q * AssemblePhi(jet, p).matrix() * q.transpose());
}

PhiTrace TraceOfPhi(const SphericalJet& jet, double p) {
  const int n = jet.dim();
  return {AssemblePhi(jet, p).trace(),
          jet.hess().trace() - (n - p) * (p - 2.0) * jet.g()};
}

Vector FdGradient(const PointFunction& f, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  Vector grad(n);
  for (int i = 0; i < n; ++i) {
    const Vector e = h * Vector::Unit(n, i);
    grad(i) = (Checked(f(x + e)) - Checked(f(x - e))) / (2.0 * h);
  }
  return grad;
}

SymMatrix FdHessian(const PointFunction& f, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  Matrix hess(n, n);
  const double f0 = Checked(f(x));
  for (int i = 0; i < n; ++i) {
    const Vector ei = h * Vector::Unit(n, i);
    hess(i, i) = (Checked(f(x + ei)) - 2.0 * f0 + Checked(f(x - ei))) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      const Vector ej = h * Vector::Unit(n, j);
      const double v = (Checked(f(x + ei + ej)) - Checked(f(x + ei - ej)) -
                        Checked(f(x - ei + ej)) + Checked(f(x - ei - ej))) /
                       (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return SymMatrix(hess);
}

SphericalJet JetFromFunction(const PointFunction& g, const UnitVector& sigma,
                             double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) {
    throw std::invalid_argument("JetFromFunction: h must lie in [1e-6, 1e-2]");
  }
  const PointFunction ext = DegreeZero(g);
  const Vector& s = sigma.vector();
  const Frame t = TangentFrame(sigma);
  const Matrix& tb = t.basis();
  const Vector grad = FdGradient(ext, s, h);
  const SymMatrix hess = FdHessian(ext, s, h);
  // On the tangent block the degree-0 extension's Hessian is Hess g; the
  // sigma o Dg term only lives in the mixed block.
  return SphericalJet(sigma, t, Checked(g(s)), tb.transpose() * grad,
                      SymMatrix(tb.transpose() * hess.matrix() * tb));
}

FdCheckReport FdCrossCheck(const PointFunction& g, const UnitVector& sigma,
                           double p, double h) {
  const PointFunction u = [g, p](const Vector& x) {
    const double r = x.norm();
    return std::pow(r, 2.0 - p) * g(x / r);
  };
  FdCheckReport rep;
  rep.fd_hessian = FdHessian(u, sigma.vector(), h);
  rep.phi = AssemblePhiAmbient(JetFromFunction(g, sigma, h), p);
  rep.residual = MaxAbs(rep.fd_hessian.matrix() - rep.phi.matrix());
  rep.constant = rep.residual / (h * h);
  return rep;
}

MemberResult SphereSubeqMember(const Subequation& f, const SphericalJet& jet,
                               double p, double tol) {
  return Member(f, AssemblePhiAmbient(jet, p), tol);
}

LineBlockReport ComplexRadialStructureCheck(const PointFunction& g,
                                            double theta,
                                            const UnitVector& sigma,
                                            const ComplexStructure& s,
                                            double h) {
  if (sigma.dim() != s.dim()) {
    throw std::invalid_argument("ComplexRadialStructureCheck: dimension mismatch");
  }
  const Vector& x0 = sigma.vector();
  const Vector jx = s.j() * x0;
  const double defect = LineDefect(g, x0, {jx});
  const PointFunction u = [g, theta](const Vector& x) {
    const double r = x.norm();
    return theta * std::log(r) + g(x / r);
  };
  const SymMatrix herm = HermitianPartComplex(FdHessian(u, x0, h), s);
  Matrix line(x0.size(), 2);
  line << x0, jx;
  LineBlockReport rep = SplitBlocks(herm, line);
  rep.line_constancy_defect = defect;
  return rep;
}

LineBlockReport QuaternionicBlockCheck(const PointFunction& g,
                                       const UnitVector& sigma,
                                       const QuaternionStructure& s,
                                       double h) {
  if (sigma.dim() != s.dim()) {
    throw std::invalid_argument("QuaternionicBlockCheck: dimension mismatch");
  }
  const Vector& x0 = sigma.vector();
  const Vector ix = s.i() * x0, jx = s.j() * x0, kx = s.k() * x0;
  const Vector mixed = (ix + jx + kx) / std::sqrt(3.0);
  const double defect = LineDefect(g, x0, {ix, jx, kx, mixed});
  const PointFunction u = [g](const Vector& x) {
    const double r2 = x.squaredNorm();
    return g(x / std::sqrt(r2)) / r2;
  };
  const SymMatrix herm = HermitianPartQuaternionic(FdHessian(u, x0, h), s);
  Matrix line(x0.size(), 4);
  line << x0, ix, jx, kx;
  LineBlockReport rep = SplitBlocks(herm, line);
  rep.line_constancy_defect = defect;
  return rep;
}

}  // namespace riesz
