#ifndef RIESZ_LINALG_H_
#define RIESZ_LINALG_H_

#include <initializer_list>

#include <Eigen/Dense>

namespace riesz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A real symmetric n x n matrix. The stored entries are exactly symmetric:
// inputs are checked for symmetry and then replaced by (M + M^T) / 2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  static SymMatrix Identity(int n);
  static SymMatrix Zero(int n);
  static SymMatrix Diagonal(const Vector& d);
  static SymMatrix Diagonal(std::initializer_list<double> d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  // Frobenius norm.
  double norm() const { return m_.norm(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator-() const;
  SymMatrix operator*(double t) const;
  friend SymMatrix operator*(double t, const SymMatrix& a) { return a * t; }

 private:
  Matrix m_;
};

class UnitVector {
 public:
  // Requires | |v| - 1 | <= 1e-12.
  explicit UnitVector(const Vector& v);
  static UnitVector Normalized(const Vector& v);
  static UnitVector Basis(int n, int i);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& vector() const { return v_; }

 private:
  Vector v_;
};

// p orthonormal columns in R^n.
class Frame {
 public:
  // Rejects columns whose Gram matrix deviates from the identity by more
  // than 1e-8 (max-abs entry).
  explicit Frame(const Matrix& columns);
  // Orthonormalizes the columns (Householder QR); throws if they are
  // numerically dependent.
  static Frame FromSpan(const Matrix& columns);
  static Frame CoordinatePlane(int n, std::initializer_list<int> axes);

  int dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Vector column(int i) const { return basis_.col(i); }
  // Distance from v to the span of the frame.
  double DistanceTo(const Vector& v) const;

 private:
  Matrix basis_;
};

// Orthogonal J with J^2 = -I on R^{2m}.
class ComplexStructure {
 public:
  explicit ComplexStructure(const Matrix& j);
  // J e_i = e_{m+i}, J e_{m+i} = -e_i.
  static ComplexStructure Standard(int m);
  // J e_{2i} = e_{2i+1}, J e_{2i+1} = -e_{2i}.
  static ComplexStructure Paired(int m);

  int dim() const { return static_cast<int>(j_.rows()); }
  int complex_dim() const { return dim() / 2; }
  const Matrix& j() const { return j_; }

 private:
  Matrix j_;
};

// Orthogonal I, J, K on R^{4m} with I^2 = J^2 = K^2 = -Id and IJ = K.
class QuaternionStructure {
 public:
  QuaternionStructure(const Matrix& i, const Matrix& j, const Matrix& k);
  // Left multiplication by i, j, k on each quaternion coordinate
  // q = x_{4l} + x_{4l+1} i + x_{4l+2} j + x_{4l+3} k.
  static QuaternionStructure Standard(int m);

  int dim() const { return static_cast<int>(i_.rows()); }
  int quaternionic_dim() const { return dim() / 4; }
  const Matrix& i() const { return i_; }
  const Matrix& j() const { return j_; }
  const Matrix& k() const { return k_; }

 private:
  Matrix i_, j_, k_;
};

// Ascending eigenvalues.
Vector EigenvaluesSorted(const SymMatrix& a);

// P = W W^T.
SymMatrix Projector(const Frame& w);

// tr(A|_W) = sum_i <A w_i, w_i>.
double TraceOnPlane(const SymMatrix& a, const Frame& w);

// A_C = (A - JAJ) / 2, the orthogonal projection onto the J-commutant.
SymMatrix HermitianPartComplex(const SymMatrix& a, const ComplexStructure& s);

// (A + JAJ) / 2, anticommutes with J.
SymMatrix SkewPartComplex(const SymMatrix& a, const ComplexStructure& s);

// The m nonnegative values lambda_i whose +/- pairs form the spectrum of the
// skew-hermitian part. Ascending. Throws std::domain_error when the spectrum
// is not symmetric under negation (wrong structure or corrupted input).
Vector SkewHermitianEigenvaluePairs(const SymMatrix& a,
                                    const ComplexStructure& s);

// A_H = (A - IAI - JAJ - KAK) / 4.
SymMatrix HermitianPartQuaternionic(const SymMatrix& a,
                                    const QuaternionStructure& s);

// Collapses an ascending spectrum in which every value is repeated
// `multiplicity` times into its distinct representatives (averaged). Throws
// std::domain_error if a group spreads more than tol * (1 + max|lambda|).
Vector CollapseMultiplicity(const Vector& sorted, int multiplicity,
                            double tol = 1e-8);

// lambda^C_k(A): eigenvalues of A_C, one per complex dimension.
Vector ComplexEigenvalues(const SymMatrix& a, const ComplexStructure& s);
// lambda^H_k(A): eigenvalues of A_H, one per quaternionic dimension.
Vector QuaternionicEigenvalues(const SymMatrix& a,
                               const QuaternionStructure& s);

}  // namespace riesz

#endif  // RIESZ_LINALG_H_
