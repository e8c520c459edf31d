#ifndef RIESZ_SUBEQ_H_
#define RIESZ_SUBEQ_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riesz/garding.h"
#include "riesz/grassmann.h"
#include "riesz/linalg.h"

namespace riesz {

enum class SubeqKind {
  kOrphant,         // lambda_min >= 0
  kTrace,           // tr A >= 0
  kMinMax,          // lambda_min + (p-1) lambda_max >= 0
  kMin2,            // lambda_min + (p-1) lambda_2 >= 0
  kPConvex,         // sum of the [p] smallest + (p-[p]) next >= 0
  kExpansion,       // base at A + (delta/n) tr(A) I
  kComplexLift,     // base at the complex eigenvalues
  kQuaternionLift,  // base at the quaternionic eigenvalues
  kLagrangian,      // t/2 - sum of skew pairs >= 0
  kIsotropic,       // (p/2m) t - sum of the p largest skew pairs >= 0
  kIsotropicDual,   // (p/2m) t + sum of the p largest skew pairs >= 0
  kDual,            // -base(-A) >= 0
  kGeometric,       // min over sampled planes of tr(A|_W) >= 0
  kGardingBranch,   // lambda_k of a Garding operator >= 0
};

enum class Representation { kEigenProfile, kGeometric, kGardingBranch };

// A closed cone F in Sym(R^n) given by a margin: A is in F iff margin >= 0.
// All built-in margins are positively 1-homogeneous and monotone under
// addition of positive semidefinite matrices.
class Subequation {
 public:
  static Subequation Orphant(int n);
  static Subequation Trace(int n);
  static Subequation MinMax(int n, double p);
  static Subequation Min2(int n, double p);
  static Subequation PConvex(int n, double p);
  static Subequation Expansion(const Subequation& base, double delta);
  static Subequation ComplexLift(const Subequation& base,
                                 const ComplexStructure& s);
  static Subequation QuaternionLift(const Subequation& base,
                                    const QuaternionStructure& s);
  static Subequation Lagrangian(const ComplexStructure& s);
  static Subequation Isotropic(const ComplexStructure& s, int p);
  static Subequation IsotropicDual(const ComplexStructure& s, int p);
  static Subequation Dual(const Subequation& base);
  // Planes are drawn once, from sub-seeds (seed, i), i < budget.
  static Subequation Geometric(const PlaneFamily& family, int budget,
                               std::uint64_t seed);
  static Subequation GardingBranch(const GardingOperator& m, int k);

  int dim() const { return n_; }
  SubeqKind kind() const { return kind_; }
  Representation representation() const;
  std::string name() const;
  double parameter() const { return param_; }
  int budget() const { return static_cast<int>(planes_.size()); }

  double Margin(const SymMatrix& a) const;

 private:
  Subequation(SubeqKind kind, int n, double param)
      : kind_(kind), n_(n), param_(param) {}

  SubeqKind kind_;
  int n_;
  double param_;
  int int_param_ = 0;
  std::shared_ptr<const Subequation> base_;
  std::optional<ComplexStructure> complex_;
  std::optional<QuaternionStructure> quaternion_;
  std::shared_ptr<const GardingOperator> garding_;
  std::vector<Frame> planes_;
};

struct MemberResult {
  bool member;
  double margin;
};

// member iff margin >= -tol.
MemberResult Member(const Subequation& f, const SymMatrix& a, double tol);

// A in dual(F) iff -A - eps I is not in F.
bool DualMember(const Subequation& f, const SymMatrix& a, double eps);

// A value in [1, infinity]; infinity is a tag, never a float sentinel.
struct ExtendedReal {
  bool infinite = false;
  double value = 0.0;

  static ExtendedReal Finite(double v) { return {false, v}; }
  static ExtendedReal Infinity() { return {true, 0.0}; }
  std::string ToString() const;
};

struct RieszCharacteristic {
  ExtendedReal value;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
};

// sup{p : diag(-(p-1), 1, ..., 1) in F}, by bisection on [1, p_max].
// Throws std::domain_error when the test matrix at p = 1 is not in F.
RieszCharacteristic RieszIncreasing(const Subequation& f, double p_max,
                                    double tol);
// inf{q : diag(-1, ..., -1, q-1) in F}, by bisection on [1, q_max].
RieszCharacteristic RieszDecreasing(const Subequation& f, double q_max,
                                    double tol);

Subequation Expand(const Subequation& f, double delta);

// n(1+delta)p / (n + delta p); n(1+delta)/delta for p = infinity.
ExtendedReal PredictedExpansionCharacteristic(ExtendedReal p, double delta,
                                              int n);

MemberResult PConvexMember(const SymMatrix& a, double p);
MemberResult LagrangianMember(const SymMatrix& a, const ComplexStructure& s);
MemberResult IsotropicMember(const SymMatrix& a, const ComplexStructure& s,
                             int p, bool dual = false);
// Base is a subequation on R^m fed with the m complex (quaternionic)
// eigenvalues of A.
MemberResult LiftedMember(const SymMatrix& a, const Subequation& base,
                          const ComplexStructure& s);
MemberResult LiftedMember(const SymMatrix& a, const Subequation& base,
                          const QuaternionStructure& s);
// Sampled, necessary-condition test: min over `budget` planes.
MemberResult GeometricMember(const SymMatrix& a, const PlaneFamily& family,
                             int budget, std::uint64_t seed);

}  // namespace riesz

#endif  // RIESZ_SUBEQ_H_
