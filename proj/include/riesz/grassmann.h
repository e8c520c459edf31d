#ifndef RIESZ_GRASSMANN_H_
#define RIESZ_GRASSMANN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riesz/linalg.h"
#include "riesz/rng.h"

namespace riesz {

enum class FamilyKind {
  kFullReal,
  kComplexPlanes,
  kQuaternionicPlanes,
  kLagrangian,
  kIsotropic,
  kKahlerOrbit,
  kQuatOrbit,
  kExplicit,
};

// A structured set of real p-planes in R^n together with a sampler and a
// completion routine ("the family plane through these vectors").
class PlaneFamily {
 public:
  static PlaneFamily FullReal(int n, int p);
  // Complex k-planes (real dimension 2k).
  static PlaneFamily ComplexPlanes(int k, const ComplexStructure& s);
  // Quaternionic k-planes (real dimension 4k).
  static PlaneFamily QuaternionicPlanes(int k, const QuaternionStructure& s);
  static PlaneFamily Lagrangian(const ComplexStructure& s);
  static PlaneFamily Isotropic(int p, const ComplexStructure& s);
  // U(n)-orbit of real 2-planes with Kahler angle invariant cos_theta.
  static PlaneFamily KahlerOrbit(double cos_theta, const ComplexStructure& s);
  // Sp(n).Sp(1)-orbit of real 2-planes with |pi^perp_x v|^2 = invariant.
  static PlaneFamily QuatOrbit(double invariant, const QuaternionStructure& s);
  static PlaneFamily Explicit(std::vector<Frame> frames);

  FamilyKind kind() const { return kind_; }
  int dim() const { return n_; }
  int plane_dim() const { return p_; }
  double parameter() const { return param_; }
  std::string name() const;
  const std::vector<Frame>& frames() const { return frames_; }

  // Largest deviation of w from the family predicate.
  double Violation(const Frame& w) const;
  bool Contains(const Frame& w, double tol = 1e-8) const {
    return Violation(w) <= tol;
  }

  Frame Sample(Rng& rng) const;
  // A family plane whose span contains the orthonormal columns of `vectors`.
  // Throws std::invalid_argument if no such plane can be built.
  Frame Through(const Matrix& vectors, Rng& rng) const;

  // Scalar whose zero set on pairs of unit vectors (a, b) marks the pairs
  // lying in a common family plane. Identically zero for families in which
  // every pair does; never crosses zero for line families.
  double PairResidual(const Vector& a, const Vector& b) const;

 private:
  PlaneFamily(FamilyKind kind, int n, int p, double param)
      : kind_(kind), n_(n), p_(p), param_(param) {}

  FamilyKind kind_;
  int n_;
  int p_;
  double param_;
  std::optional<ComplexStructure> complex_;
  std::optional<QuaternionStructure> quaternion_;
  std::vector<Frame> frames_;
};

// p1 + p2 - rank[W1 | W2], with singular values below tol * sigma_max
// treated as zero.
int IntersectionDim(const Frame& w1, const Frame& w2, double tol = 1e-8);

// |<J w1, w2>| for a 2-plane.
double KahlerAngleInvariant(const Frame& w, const ComplexStructure& s);

// 1 - <v,x>^2 - sum_{e in I,J,K} <v, e x>^2 for the orthonormal basis {x, v}.
double QuaternionicInvariant(const Frame& w, const QuaternionStructure& s);

struct IsotropyResult {
  bool isotropic;
  double max_violation;
};
IsotropyResult IsotropyCheck(const Frame& w, const ComplexStructure& s);

// Random element of U(m) (orthogonal, commuting with J).
Matrix RandomUnitary(Rng& rng, const ComplexStructure& s);
// Random element of Sp(m) (orthogonal, commuting with I, J, K).
Matrix RandomSymplectic(Rng& rng, const QuaternionStructure& s);
// Random unit quaternion a + bI + cJ + dK acting on R^{4m}.
Matrix RandomSp1(Rng& rng, const QuaternionStructure& s);

struct TransitivityReport {
  bool chain_found = false;
  std::vector<Frame> chain;
  // dim(W_i cap W_{i+1}) along the chain.
  std::vector<int> chain_intersections;
  int samples_used = 0;
  int distinct_planes = 0;
  std::uint64_t seed = 0;
  // Intersection dimension -> number of pairs among the (first 64) distinct
  // planes generated.
  std::map<int, int> intersection_histogram;
};

// Searches for a chain W_1, ..., W_k of family planes with x in W_1, y in
// W_k and consecutive planes meeting nontrivially. Planes are grown as two
// trees (from x and from y) by sampling family planes through points of
// existing planes, and the trees are joined by locating a family plane that
// meets one plane of each tree. A negative verdict is evidence only.
TransitivityReport TransitivityCheck(const PlaneFamily& family,
                                     const UnitVector& x, const UnitVector& y,
                                     int budget, std::uint64_t seed);

}  // namespace riesz

#endif  // RIESZ_GRASSMANN_H_
