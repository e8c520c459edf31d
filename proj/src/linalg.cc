#include "riesz/linalg.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace riesz {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kFrameGramTol = 1e-8;
constexpr double kStructureTol = 1e-12;

void RequireSameDim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

bool IsOrthogonal(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  return (q.transpose() * q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <=
         kStructureTol;
}

bool SquaresToMinusIdentity(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  return (q * q + Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <=
         kStructureTol;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("SymMatrix: need a nonempty square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw std::invalid_argument("SymMatrix: input is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(int n) {
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::Zero(int n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::Diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

SymMatrix SymMatrix::Diagonal(std::initializer_list<double> d) {
  Vector v(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return Diagonal(v);
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  RequireSameDim(dim(), o.dim(), "SymMatrix::operator+");
  return SymMatrix(m_ + o.m_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  RequireSameDim(dim(), o.dim(), "SymMatrix::operator-");
  return SymMatrix(m_ - o.m_);
}

SymMatrix SymMatrix::operator-() const { return SymMatrix(-m_); }

SymMatrix SymMatrix::operator*(double t) const { return SymMatrix(t * m_); }

UnitVector::UnitVector(const Vector& v) : v_(v) {
  if (v.size() < 1 || std::abs(v.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("UnitVector: norm differs from 1");
  }
}

UnitVector UnitVector::Normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVector: cannot normalize zero vector");
  }
  return UnitVector(v / n);
}

UnitVector UnitVector::Basis(int n, int i) {
  return UnitVector(Vector::Unit(n, i));
}

Frame::Frame(const Matrix& columns) : basis_(columns) {
  if (columns.cols() < 1 || columns.cols() > columns.rows()) {
    throw std::invalid_argument("Frame: need 1 <= p <= n columns");
  }
  const int p = static_cast<int>(columns.cols());
  const double residual =
      (columns.transpose() * columns - Matrix::Identity(p, p))
          .cwiseAbs()
          .maxCoeff();
  if (!(residual <= kFrameGramTol)) {
    throw std::invalid_argument("Frame: columns are not orthonormal");
  }
}

Frame Frame::FromSpan(const Matrix& columns) {
  const int n = static_cast<int>(columns.rows());
  const int p = static_cast<int>(columns.cols());
  if (p < 1 || p > n) {
    throw std::invalid_argument("Frame::FromSpan: need 1 <= p <= n columns");
  }
  Eigen::HouseholderQR<Matrix> qr(columns);
  const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const double scale = columns.colwise().norm().maxCoeff();
  for (int i = 0; i < p; ++i) {
    if (!(std::abs(r(i, i)) > kFrameGramTol * scale)) {
      throw std::invalid_argument("Frame::FromSpan: columns are dependent");
    }
  }
  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  // Fix signs so that the first column keeps the direction of the input.
  for (int i = 0; i < p; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return Frame(q);
}

Frame Frame::CoordinatePlane(int n, std::initializer_list<int> axes) {
  Matrix w = Matrix::Zero(n, static_cast<int>(axes.size()));
  int c = 0;
  for (int a : axes) w(a, c++) = 1.0;
  return Frame(w);
}

double Frame::DistanceTo(const Vector& v) const {
  RequireSameDim(dim(), static_cast<int>(v.size()), "Frame::DistanceTo");
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

ComplexStructure::ComplexStructure(const Matrix& j) : j_(j) {
  if (j.rows() != j.cols() || j.rows() < 2 || j.rows() % 2 != 0) {
    throw std::invalid_argument("ComplexStructure: need even square matrix");
  }
  if (!IsOrthogonal(j) || !SquaresToMinusIdentity(j)) {
    throw std::invalid_argument(
        "ComplexStructure: J must be orthogonal with J^2 = -I");
  }
}

ComplexStructure ComplexStructure::Standard(int m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    j(m + i, i) = 1.0;
    j(i, m + i) = -1.0;
  }
  return ComplexStructure(j);
}

ComplexStructure ComplexStructure::Paired(int m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    j(2 * i + 1, 2 * i) = 1.0;
    j(2 * i, 2 * i + 1) = -1.0;
  }
  return ComplexStructure(j);
}

QuaternionStructure::QuaternionStructure(const Matrix& i, const Matrix& j,
                                         const Matrix& k)
    : i_(i), j_(j), k_(k) {
  const auto n = i.rows();
  if (n < 4 || n % 4 != 0 || i.cols() != n || j.rows() != n ||
      j.cols() != n || k.rows() != n || k.cols() != n) {
    throw std::invalid_argument("QuaternionStructure: need 4m x 4m matrices");
  }
  for (const Matrix* q : {&i_, &j_, &k_}) {
    if (!IsOrthogonal(*q) || !SquaresToMinusIdentity(*q)) {
      throw std::invalid_argument(
          "QuaternionStructure: I, J, K must be orthogonal square roots of -Id");
    }
  }
  if ((i_ * j_ - k_).cwiseAbs().maxCoeff() > kStructureTol ||
      (i_ * j_ + j_ * i_).cwiseAbs().maxCoeff() > kStructureTol) {
    throw std::invalid_argument("QuaternionStructure: need IJ = K = -JI");
  }
}

QuaternionStructure QuaternionStructure::Standard(int m) {
  // Left multiplication on (a, b, c, d) = a + b i + c j + d k.
  Eigen::Matrix4d li, lj, lk;
  li << 0, -1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, -1,
        0, 0, 1, 0;
  lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  Matrix i = Matrix::Zero(4 * m, 4 * m);
  Matrix j = i, k = i;
  for (int b = 0; b < m; ++b) {
    i.block<4, 4>(4 * b, 4 * b) = li;
    j.block<4, 4>(4 * b, 4 * b) = lj;
    k.block<4, 4>(4 * b, 4 * b) = lk;
  }
  return QuaternionStructure(i, j, k);
}

Vector EigenvaluesSorted(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SymMatrix Projector(const Frame& w) {
  return SymMatrix(w.basis() * w.basis().transpose());
}

double TraceOnPlane(const SymMatrix& a, const Frame& w) {
  RequireSameDim(a.dim(), w.dim(), "TraceOnPlane");
  return (w.basis().transpose() * a.matrix() * w.basis()).trace();
}

SymMatrix HermitianPartComplex(const SymMatrix& a, const ComplexStructure& s) {
  RequireSameDim(a.dim(), s.dim(), "HermitianPartComplex");
  const Matrix& j = s.j();
  return SymMatrix(0.5 * (a.matrix() - j * a.matrix() * j));
}

SymMatrix SkewPartComplex(const SymMatrix& a, const ComplexStructure& s) {
  RequireSameDim(a.dim(), s.dim(), "SkewPartComplex");
  const Matrix& j = s.j();
  return SymMatrix(0.5 * (a.matrix() + j * a.matrix() * j));
}

Vector SkewHermitianEigenvaluePairs(const SymMatrix& a,
                                    const ComplexStructure& s) {
  const Vector ev = EigenvaluesSorted(SkewPartComplex(a, s));
  const int m = s.complex_dim();
  const double tol = 1e-8 * (1.0 + ev.cwiseAbs().maxCoeff());
  Vector pairs(m);
  for (int i = 0; i < m; ++i) {
    const double neg = ev(i);
    const double pos = ev(2 * m - 1 - i);
    if (std::abs(neg + pos) > tol) {
      throw std::domain_error(
          "SkewHermitianEigenvaluePairs: spectrum not symmetric under "
          "negation");
    }
    // pos is the i-th largest, so fill from the back to get ascending order.
    pairs(m - 1 - i) = std::max(0.0, 0.5 * (pos - neg));
  }
  return pairs;
}

SymMatrix HermitianPartQuaternionic(const SymMatrix& a,
                                    const QuaternionStructure& s) {
  RequireSameDim(a.dim(), s.dim(), "HermitianPartQuaternionic");
  const Matrix& x = a.matrix();
  return SymMatrix(0.25 * (x - s.i() * x * s.i() - s.j() * x * s.j() -
                           s.k() * x * s.k()));
}

Vector CollapseMultiplicity(const Vector& sorted, int multiplicity,
                            double tol) {
  const int n = static_cast<int>(sorted.size());
  if (multiplicity < 1 || n % multiplicity != 0) {
    throw std::invalid_argument("CollapseMultiplicity: bad multiplicity");
  }
  const double bound =
      tol * (1.0 + (n > 0 ? sorted.cwiseAbs().maxCoeff() : 0.0));
  Vector out(n / multiplicity);
  for (int g = 0; g < out.size(); ++g) {
    const auto group = sorted.segment(g * multiplicity, multiplicity);
    if (group.maxCoeff() - group.minCoeff() > bound) {
      throw std::domain_error(
          "CollapseMultiplicity: eigenvalue multiplicity pattern violated");
    }
    out(g) = group.mean();
  }
  return out;
}

Vector ComplexEigenvalues(const SymMatrix& a, const ComplexStructure& s) {
  return CollapseMultiplicity(EigenvaluesSorted(HermitianPartComplex(a, s)),
                              2);
}

Vector QuaternionicEigenvalues(const SymMatrix& a,
                               const QuaternionStructure& s) {
  return CollapseMultiplicity(
      EigenvaluesSorted(HermitianPartQuaternionic(a, s)), 4);
}

}  // namespace riesz
