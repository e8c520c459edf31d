#ifndef RIESZ_SPHJET_H_
#define RIESZ_SPHJET_H_

#include "riesz/field.h"
#include "riesz/linalg.h"
#include "riesz/subeq.h"

namespace riesz {

// Riemannian 2-jet (g, Dg, Hess g) of a function on S^{n-1} at sigma, in
// coordinates of an orthonormal frame of the tangent space.
class SphericalJet {
 public:
  SphericalJet(const UnitVector& sigma, const Frame& tangent, double g,
               const Vector& dg, const SymMatrix& hess);

  int dim() const { return sigma_.dim(); }
  const UnitVector& sigma() const { return sigma_; }
  const Frame& tangent() const { return tangent_; }
  double g() const { return g_; }
  const Vector& dg() const { return dg_; }
  const SymMatrix& hess() const { return hess_; }
  // Orthogonal n x n matrix [tangent | sigma].
  Matrix Basis() const;

 private:
  UnitVector sigma_;
  Frame tangent_;
  double g_;
  Vector dg_;
  SymMatrix hess_;
};

// Deterministic orthonormal basis of sigma^perp.
Frame TangentFrame(const UnitVector& sigma);

// Phi(J) in the basis (tangent, sigma):
//   [ Hess - (p-2) g I     -(p-1) Dg       ]
//   [ -(p-1) Dg^T          (p-2)(p-1) g    ]
SymMatrix AssemblePhi(const SphericalJet& jet, double p);
// The same matrix in ambient coordinates: Q Phi Q^T with Q = jet.Basis().
SymMatrix AssemblePhiAmbient(const SphericalJet& jet, double p);

struct PhiTrace {
  double trace;     // tr Phi
  double operator_value;  // tr Hess - (n-p)(p-2) g
};
PhiTrace TraceOfPhi(const SphericalJet& jet, double p);

// Central differences (step h) of a function on R^n.
Vector FdGradient(const PointFunction& f, const Vector& x, double h);
SymMatrix FdHessian(const PointFunction& f, const Vector& x, double h);

// Jet of g at sigma from central differences of the degree-0 extension
// g(x / |x|). Requires h in [1e-6, 1e-2]; throws std::domain_error on
// non-finite samples.
SphericalJet JetFromFunction(const PointFunction& g, const UnitVector& sigma,
                             double h = 1e-4);

struct FdCheckReport {
  double residual = 0.0;  // max-abs entry difference
  double constant = 0.0;  // residual / h^2
  SymMatrix fd_hessian = SymMatrix::Zero(1);
  SymMatrix phi = SymMatrix::Zero(1);
};
// Compares the finite-difference Hessian of u = |x|^{2-p} g(x/|x|) at sigma
// with Phi of the finite-difference jet.
FdCheckReport FdCrossCheck(const PointFunction& g, const UnitVector& sigma,
                           double p, double h = 1e-4);

MemberResult SphereSubeqMember(const Subequation& f, const SphericalJet& jet,
                               double p, double tol = 1e-9);

struct LineBlockReport {
  double line_block_norm = 0.0;   // max-abs entry on the structure line
  Vector horizontal_spectrum;     // ascending, on the orthogonal complement
  double min_eigenvalue = 0.0;
  double line_constancy_defect = 0.0;
};

// U = theta log|x| + g(x/|x|); hermitian part of its finite-difference
// Hessian at sigma, split along C sigma and its complement. Throws
// std::invalid_argument if g is not constant on complex lines within 1e-8.
LineBlockReport ComplexRadialStructureCheck(const PointFunction& g,
                                            double theta,
                                            const UnitVector& sigma,
                                            const ComplexStructure& s,
                                            double h = 1e-4);

// U = |x|^{-2} g(x/|x|); quaternionic hermitian part of its
// finite-difference Hessian at sigma split along H sigma and its complement.
LineBlockReport QuaternionicBlockCheck(const PointFunction& g,
                                       const UnitVector& sigma,
                                       const QuaternionStructure& s,
                                       double h = 1e-4);

}  // namespace riesz

#endif  // RIESZ_SPHJET_H_
