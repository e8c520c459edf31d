#ifndef RIESZ_GARDING_H_
#define RIESZ_GARDING_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riesz/linalg.h"

namespace riesz {

// Raised when s -> M(s e + A) has roots that are not real within tolerance.
class HyperbolicityViolation : public std::runtime_error {
 public:
  HyperbolicityViolation(const std::string& what, SymMatrix a, double residual)
      : std::runtime_error(what), a_(std::move(a)), residual_(residual) {}

  const SymMatrix& matrix() const { return a_; }
  double residual() const { return residual_; }

 private:
  SymMatrix a_;
  double residual_;
};

enum class GardingKind {
  kDetReal,
  kDetComplex,
  kDetQuaternionic,
  kElementarySymmetric,
  kPConvexity,
  kDeltaReg,
  kLag,
  kIso,
  kCorruptedDet,
};

// A homogeneous polynomial M of degree m on Sym(R^n), hyperbolic in the
// direction of the identity. Eigenvalues are normalized with respect to
// e = M(I)^{-1/m} I, so that M(s e + A) = prod_j (s + lambda_j(A)); for the
// determinants e = I.
class GardingOperator {
 public:
  static GardingOperator DetReal(int n);
  static GardingOperator DetComplex(const ComplexStructure& s);
  static GardingOperator DetQuaternionic(const QuaternionStructure& s);
  // sigma_k: coefficient of t^{m-k} in t -> M(A + t e).
  static GardingOperator ElementarySymmetric(const GardingOperator& base,
                                             int k);
  // Sigma_p: product over the linear forms
  // lambda_{i_1} + ... + lambda_{i_[p]} + (p - [p]) lambda_j of the base
  // eigenvalues (j outside I; only |I| = p when p is an integer).
  static GardingOperator PConvexity(const GardingOperator& base, double p);
  // M^delta(A) = M(A + (delta/n) tr(A) I).
  static GardingOperator DeltaReg(const GardingOperator& base, double delta);
  // prod over sign patterns of t/2 +- lambda_1 +- ... +- lambda_m.
  static GardingOperator Lag(const ComplexStructure& s);
  // prod over |I| = p and sign patterns of (p/2m) t +- lambda_{i_1} ...
  static GardingOperator Iso(const ComplexStructure& s, int p);
  // det A + 0.5 A(0,1)^3: not hyperbolic; a negative control.
  static GardingOperator CorruptedDet(int n);

  GardingKind kind() const { return kind_; }
  int dim() const { return n_; }
  int degree() const { return degree_; }
  std::string name() const;

  double Evaluate(const SymMatrix& a) const;
  // c with e = c I.
  double unit_scale() const { return unit_scale_; }
  // Closed-form eigenvalues (ascending) when the construction provides
  // them; empty for sigma_k and the corrupted operator.
  std::optional<Vector> StructuralSpectrum(const SymMatrix& a) const;
  // Crude bound on |lambda_j(A)| / |A|_F used to size the root-finding
  // interval.
  double eigen_bound() const { return eigen_bound_; }

 private:
  GardingOperator(GardingKind kind, int n) : kind_(kind), n_(n) {}
  void Finalize();
  // Eigenvalues of the base operator, structural when available.
  Vector BaseSpectrum(const SymMatrix& a) const;
  Vector FactorValues(const SymMatrix& a) const;

  GardingKind kind_;
  int n_;
  int degree_ = 0;
  double param_ = 0.0;
  int int_param_ = 0;
  double unit_scale_ = 1.0;
  double eigen_bound_ = 1.0;
  std::shared_ptr<const GardingOperator> base_;
  std::optional<ComplexStructure> complex_;
  std::optional<QuaternionStructure> quaternion_;
};

struct GardingSpectrum {
  Vector eigenvalues;  // ascending
  // Largest imaginary part among roots accepted as real individually.
  double residual = 0.0;
  // Largest spread of a root cluster merged into a multiple eigenvalue.
  double cluster_spread = 0.0;
};

// Negatives of the roots of s -> M(s e + A), found from Chebyshev samples
// through the colleague matrix. Throws HyperbolicityViolation when a root
// has an imaginary part above tol * (1 + |A|_F) that cannot be explained as
// a numerically split multiple real root.
GardingSpectrum GardingEigenvalues(const GardingOperator& m,
                                   const SymMatrix& a, double tol = 1e-6);

// Monomial coefficients c_0..c_d of t -> f(t), a polynomial of degree <= d,
// from d + 1 samples at Chebyshev nodes on [-radius, radius].
Vector InterpolateMonomial(const std::function<double(double)>& f, int d,
                           double radius);

double ElementarySymmetricValue(const GardingOperator& base, int k,
                                const SymMatrix& a);

struct BranchResult {
  bool member;
  double margin;
};
// k-th branch {lambda_k >= 0}; k = 1 is the closed Garding cone.
BranchResult BranchMember(const GardingOperator& m, int k, const SymMatrix& a);

double MLagValue(const SymMatrix& a, const ComplexStructure& s);

struct Counterexample {
  std::string check;
  int trial = -1;
  std::vector<SymMatrix> matrices;
  double value = 0.0;
  std::string detail;
};

struct CertificationCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // most negative slack observed
  std::optional<Counterexample> first_failure;
};

struct CertificationReport {
  std::string operator_name;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<CertificationCheck> checks;  // real_roots, convexity,
                                           // positivity, monotonicity
  bool passed() const;
};

CertificationReport CertifyGarding(const GardingOperator& m, int trials,
                                   std::uint64_t seed);

}  // namespace riesz

#endif  // RIESZ_GARDING_H_
