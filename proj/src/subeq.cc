#include "riesz/subeq.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "riesz/rng.h"

namespace riesz {

namespace {

constexpr double kBisectionMemberTol = 1e-12;

std::string Num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double PConvexMargin(const Vector& ev, double p) {
  const int n = static_cast<int>(ev.size());
  const int fl = static_cast<int>(std::floor(p + 1e-12));
  const double frac = std::max(0.0, p - fl);
  double margin = ev.head(std::min(fl, n)).sum();
  if (fl < n && frac > 1e-12) margin += frac * ev(fl);
  return margin;
}

double SumLargest(const Vector& ascending, int p) {
  return ascending.tail(p).sum();
}

void RequireDim(const Subequation& f, const SymMatrix& a) {
  if (f.dim() != a.dim()) {
    throw std::invalid_argument("subequation: dimension mismatch");
  }
}

}  // namespace

Subequation Subequation::Orphant(int n) {
  if (n < 1) throw std::invalid_argument("Orphant: n must be >= 1");
  return Subequation(SubeqKind::kOrphant, n, 1.0);
}

Subequation Subequation::Trace(int n) {
  if (n < 1) throw std::invalid_argument("Trace: n must be >= 1");
  return Subequation(SubeqKind::kTrace, n, n);
}

Subequation Subequation::MinMax(int n, double p) {
  if (n < 1 || !(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("MinMax: need n >= 1 and finite p >= 1");
  }
  return Subequation(SubeqKind::kMinMax, n, p);
}

Subequation Subequation::Min2(int n, double p) {
  if (n < 2 || !(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Min2: need n >= 2 and finite p >= 1");
  }
  return Subequation(SubeqKind::kMin2, n, p);
}

Subequation Subequation::PConvex(int n, double p) {
  if (!(p >= 1.0 && p <= n)) {
    throw std::invalid_argument("PConvex: need 1 <= p <= n (p = " + Num(p) +
                                ", n = " + std::to_string(n) + ")");
  }
  return Subequation(SubeqKind::kPConvex, n, p);
}

Subequation Subequation::Expansion(const Subequation& base, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("Expansion: delta must be >= 0");
  }
  Subequation f(SubeqKind::kExpansion, base.dim(), delta);
  f.base_ = std::make_shared<const Subequation>(base);
  return f;
}

Subequation Subequation::ComplexLift(const Subequation& base,
                                     const ComplexStructure& s) {
  if (base.dim() != s.complex_dim()) {
    throw std::invalid_argument("ComplexLift: base must live on R^m");
  }
  Subequation f(SubeqKind::kComplexLift, s.dim(), 0.0);
  f.base_ = std::make_shared<const Subequation>(base);
  f.complex_ = s;
  return f;
}

Subequation Subequation::QuaternionLift(const Subequation& base,
                                        const QuaternionStructure& s) {
  if (base.dim() != s.quaternionic_dim()) {
    throw std::invalid_argument("QuaternionLift: base must live on R^m");
  }
  Subequation f(SubeqKind::kQuaternionLift, s.dim(), 0.0);
  f.base_ = std::make_shared<const Subequation>(base);
  f.quaternion_ = s;
  return f;
}

Subequation Subequation::Lagrangian(const ComplexStructure& s) {
  Subequation f(SubeqKind::kLagrangian, s.dim(), 0.0);
  f.complex_ = s;
  return f;
}

Subequation Subequation::Isotropic(const ComplexStructure& s, int p) {
  if (p < 1 || p > s.complex_dim()) {
    throw std::invalid_argument("Isotropic: need 1 <= p <= m");
  }
  Subequation f(SubeqKind::kIsotropic, s.dim(), p);
  f.int_param_ = p;
  f.complex_ = s;
  return f;
}

Subequation Subequation::IsotropicDual(const ComplexStructure& s, int p) {
  Subequation f = Isotropic(s, p);
  f.kind_ = SubeqKind::kIsotropicDual;
  return f;
}

Subequation Subequation::Dual(const Subequation& base) {
  Subequation f(SubeqKind::kDual, base.dim(), 0.0);
  f.base_ = std::make_shared<const Subequation>(base);
  return f;
}

Subequation Subequation::Geometric(const PlaneFamily& family, int budget,
                                   std::uint64_t seed) {
  if (budget < 1) {
    throw std::invalid_argument("Geometric: sample budget must be >= 1");
  }
  Subequation f(SubeqKind::kGeometric, family.dim(), family.plane_dim());
  f.planes_.reserve(budget);
  for (int i = 0; i < budget; ++i) {
    Rng rng = MakeRng(seed, "geometric", static_cast<std::uint64_t>(i));
    f.planes_.push_back(family.Sample(rng));
  }
  return f;
}

Subequation Subequation::GardingBranch(const GardingOperator& m, int k) {
  if (k < 1 || k > m.degree()) {
    throw std::invalid_argument("GardingBranch: need 1 <= k <= m");
  }
  Subequation f(SubeqKind::kGardingBranch, m.dim(), k);
  f.int_param_ = k;
  f.garding_ = std::make_shared<const GardingOperator>(m);
  return f;
}

Representation Subequation::representation() const {
  switch (kind_) {
    case SubeqKind::kGeometric: return Representation::kGeometric;
    case SubeqKind::kGardingBranch: return Representation::kGardingBranch;
    default: return Representation::kEigenProfile;
  }
}

std::string Subequation::name() const {
  switch (kind_) {
    case SubeqKind::kOrphant: return "orphant";
    case SubeqKind::kTrace: return "trace";
    case SubeqKind::kMinMax: return "minmax(" + Num(param_) + ")";
    case SubeqKind::kMin2: return "min2(" + Num(param_) + ")";
    case SubeqKind::kPConvex: return "pconvex(" + Num(param_) + ")";
    case SubeqKind::kExpansion:
      return "expansion(" + base_->name() + ", " + Num(param_) + ")";
    case SubeqKind::kComplexLift: return "complex_lift(" + base_->name() + ")";
    case SubeqKind::kQuaternionLift:
      return "quaternion_lift(" + base_->name() + ")";
    case SubeqKind::kLagrangian: return "lagrangian";
    case SubeqKind::kIsotropic: return "isotropic(" + Num(param_) + ")";
    case SubeqKind::kIsotropicDual:
      return "isotropic_dual(" + Num(param_) + ")";
    case SubeqKind::kDual: return "dual(" + base_->name() + ")";
    case SubeqKind::kGeometric:
      return "geometric(p=" + Num(param_) + ", budget=" +
             std::to_string(planes_.size()) + ")";
    case SubeqKind::kGardingBranch:
      return "garding_branch(" + garding_->name() + ", " +
             std::to_string(int_param_) + ")";
  }
  return "unknown";
}

double Subequation::Margin(const SymMatrix& a) const {
  RequireDim(*this, a);
  switch (kind_) {
    case SubeqKind::kOrphant:
      return EigenvaluesSorted(a)(0);
    case SubeqKind::kTrace:
      return a.trace();
    case SubeqKind::kMinMax: {
      const Vector ev = EigenvaluesSorted(a);
      return ev(0) + (param_ - 1.0) * ev(n_ - 1);
    }
    case SubeqKind::kMin2: {
      const Vector ev = EigenvaluesSorted(a);
      return ev(0) + (param_ - 1.0) * ev(1);
    }
    case SubeqKind::kPConvex:
      return PConvexMargin(EigenvaluesSorted(a), param_);
    case SubeqKind::kExpansion:
      return base_->Margin(a + SymMatrix::Identity(n_) *
                                   (param_ / n_ * a.trace()));
    case SubeqKind::kComplexLift:
      return base_->Margin(SymMatrix::Diagonal(ComplexEigenvalues(a, *complex_)));
    case SubeqKind::kQuaternionLift:
      return base_->Margin(
          SymMatrix::Diagonal(QuaternionicEigenvalues(a, *quaternion_)));
    case SubeqKind::kLagrangian:
      return 0.5 * a.trace() - SkewHermitianEigenvaluePairs(a, *complex_).sum();
    case SubeqKind::kIsotropic:
    case SubeqKind::kIsotropicDual: {
      const Vector pairs = SkewHermitianEigenvaluePairs(a, *complex_);
      const double lead = a.trace() * int_param_ / n_;
      const double tail = SumLargest(pairs, int_param_);
      return kind_ == SubeqKind::kIsotropic ? lead - tail : lead + tail;
    }
    case SubeqKind::kDual:
      return -base_->Margin(-a);
    case SubeqKind::kGeometric: {
      double best = std::numeric_limits<double>::infinity();
      for (const Frame& w : planes_) best = std::min(best, TraceOnPlane(a, w));
      return best;
    }
    case SubeqKind::kGardingBranch:
      return GardingEigenvalues(*garding_, a).eigenvalues(int_param_ - 1);
  }
  throw std::logic_error("Subequation::Margin: unknown kind");
}

MemberResult Member(const Subequation& f, const SymMatrix& a, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("Member: tol must be >= 0");
  const double margin = f.Margin(a);
  return {margin >= -tol, margin};
}

bool DualMember(const Subequation& f, const SymMatrix& a, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("DualMember: eps must be > 0");
  return !Member(f, -a - SymMatrix::Identity(a.dim()) * eps, 0.0).member;
}

std::string ExtendedReal::ToString() const {
  return infinite ? std::string("inf") : Num(value);
}

namespace {

SymMatrix IncreasingTest(int n, double p) {
  Vector d = Vector::Ones(n);
  d(0) = -(p - 1.0);
  return SymMatrix::Diagonal(d);
}

SymMatrix DecreasingTest(int n, double q) {
  Vector d = -Vector::Ones(n);
  d(n - 1) = q - 1.0;
  return SymMatrix::Diagonal(d);
}

bool TestMember(const Subequation& f, const SymMatrix& a) {
  return Member(f, a, kBisectionMemberTol).member;
}

}  // namespace

RieszCharacteristic RieszIncreasing(const Subequation& f, double p_max,
                                    double tol) {
  if (!(p_max >= 1.0) || !(tol > 0.0)) {
    throw std::invalid_argument("RieszIncreasing: need p_max >= 1, tol > 0");
  }
  const int n = f.dim();
  RieszCharacteristic out;
  ++out.evaluations;
  if (!TestMember(f, IncreasingTest(n, 1.0))) {
    throw std::domain_error(
        "RieszIncreasing: diag(0,1,...,1) is not a member; F does not "
        "contain P");
  }
  ++out.evaluations;
  if (TestMember(f, IncreasingTest(n, p_max))) {
    out.value = ExtendedReal::Infinity();
    out.bracket_lo = p_max;
    out.bracket_hi = p_max;
    return out;
  }
  double lo = 1.0, hi = p_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ++out.evaluations;
    (TestMember(f, IncreasingTest(n, mid)) ? lo : hi) = mid;
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.value = ExtendedReal::Finite(0.5 * (lo + hi));
  return out;
}

RieszCharacteristic RieszDecreasing(const Subequation& f, double q_max,
                                    double tol) {
  if (!(q_max >= 1.0) || !(tol > 0.0)) {
    throw std::invalid_argument("RieszDecreasing: need q_max >= 1, tol > 0");
  }
  const int n = f.dim();
  RieszCharacteristic out;
  ++out.evaluations;
  if (TestMember(f, DecreasingTest(n, 1.0))) {
    out.value = ExtendedReal::Finite(1.0);
    out.bracket_lo = out.bracket_hi = 1.0;
    return out;
  }
  ++out.evaluations;
  if (!TestMember(f, DecreasingTest(n, q_max))) {
    out.value = ExtendedReal::Infinity();
    out.bracket_lo = out.bracket_hi = q_max;
    return out;
  }
  double lo = 1.0, hi = q_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ++out.evaluations;
    (TestMember(f, DecreasingTest(n, mid)) ? hi : lo) = mid;
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.value = ExtendedReal::Finite(0.5 * (lo + hi));
  return out;
}

Subequation Expand(const Subequation& f, double delta) {
  return Subequation::Expansion(f, delta);
}

ExtendedReal PredictedExpansionCharacteristic(ExtendedReal p, double delta,
                                              int n) {
  if (!(delta >= 0.0) || n < 1) {
    throw std::invalid_argument("PredictedExpansionCharacteristic: bad input");
  }
  if (p.infinite) {
    if (delta == 0.0) return ExtendedReal::Infinity();
    return ExtendedReal::Finite(n * (1.0 + delta) / delta);
  }
  return ExtendedReal::Finite(n * (1.0 + delta) * p.value /
                              (n + delta * p.value));
}

MemberResult PConvexMember(const SymMatrix& a, double p) {
  return Member(Subequation::PConvex(a.dim(), p), a, 0.0);
}

MemberResult LagrangianMember(const SymMatrix& a, const ComplexStructure& s) {
  return Member(Subequation::Lagrangian(s), a, 0.0);
}

MemberResult IsotropicMember(const SymMatrix& a, const ComplexStructure& s,
                             int p, bool dual) {
  return Member(dual ? Subequation::IsotropicDual(s, p)
                     : Subequation::Isotropic(s, p),
                a, 0.0);
}

MemberResult LiftedMember(const SymMatrix& a, const Subequation& base,
                          const ComplexStructure& s) {
  return Member(Subequation::ComplexLift(base, s), a, 0.0);
}

MemberResult LiftedMember(const SymMatrix& a, const Subequation& base,
                          const QuaternionStructure& s) {
  return Member(Subequation::QuaternionLift(base, s), a, 0.0);
}

MemberResult GeometricMember(const SymMatrix& a, const PlaneFamily& family,
                             int budget, std::uint64_t seed) {
  return Member(Subequation::Geometric(family, budget, seed), a, 0.0);
}

}  // namespace riesz
