#include "riesz/garding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "riesz/rng.h"

namespace riesz {

namespace {

constexpr double kClusterEta = 1e-13;

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls f(mask) for every subset of {0..n-1} of size k.
template <typename F>
void ForEachSubset(int n, int k, F&& f) {
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == k) f(mask);
  }
}

Vector SortedCopy(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double Product(const Vector& v) { return v.prod(); }

}  // namespace

GardingOperator GardingOperator::DetReal(int n) {
  if (n < 1) throw std::invalid_argument("DetReal: n must be >= 1");
  GardingOperator m(GardingKind::kDetReal, n);
  m.degree_ = n;
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::DetComplex(const ComplexStructure& s) {
  GardingOperator m(GardingKind::kDetComplex, s.dim());
  m.complex_ = s;
  m.degree_ = s.complex_dim();
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::DetQuaternionic(const QuaternionStructure& s) {
  GardingOperator m(GardingKind::kDetQuaternionic, s.dim());
  m.quaternion_ = s;
  m.degree_ = s.quaternionic_dim();
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::ElementarySymmetric(const GardingOperator& base,
                                                     int k) {
  if (k < 1 || k > base.degree()) {
    throw std::invalid_argument("ElementarySymmetric: need 1 <= k <= m");
  }
  GardingOperator m(GardingKind::kElementarySymmetric, base.dim());
  m.base_ = std::make_shared<const GardingOperator>(base);
  m.int_param_ = k;
  m.degree_ = k;
  m.eigen_bound_ =
      base.eigen_bound() * std::pow(Binomial(base.degree(), k), 1.0 / k);
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::PConvexity(const GardingOperator& base,
                                            double p) {
  const int mb = base.degree();
  if (!(p >= 1.0 && p <= mb)) {
    throw std::invalid_argument("PConvexity: need 1 <= p <= m");
  }
  if (mb > 20) throw std::invalid_argument("PConvexity: base degree too large");
  GardingOperator m(GardingKind::kPConvexity, base.dim());
  m.base_ = std::make_shared<const GardingOperator>(base);
  m.param_ = p;
  const int fl = static_cast<int>(std::floor(p + 1e-12));
  const bool integral = p - fl < 1e-12;
  m.degree_ = static_cast<int>(Binomial(mb, fl)) * (integral ? 1 : mb - fl);
  m.eigen_bound_ = p * base.eigen_bound();
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::DeltaReg(const GardingOperator& base,
                                          double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("DeltaReg: need delta >= 0");
  GardingOperator m(GardingKind::kDeltaReg, base.dim());
  m.base_ = std::make_shared<const GardingOperator>(base);
  m.param_ = delta;
  m.degree_ = base.degree();
  m.eigen_bound_ = base.eigen_bound() * (1.0 + delta);
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::Lag(const ComplexStructure& s) {
  if (s.complex_dim() > 12) throw std::invalid_argument("Lag: m must be <= 12");
  GardingOperator m(GardingKind::kLag, s.dim());
  m.complex_ = s;
  m.degree_ = 1 << s.complex_dim();
  m.eigen_bound_ = 2.0 * s.complex_dim();
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::Iso(const ComplexStructure& s, int p) {
  const int cm = s.complex_dim();
  if (p < 1 || p > cm) throw std::invalid_argument("Iso: need 1 <= p <= m");
  if (cm > 12) throw std::invalid_argument("Iso: m must be <= 12");
  GardingOperator m(GardingKind::kIso, s.dim());
  m.complex_ = s;
  m.int_param_ = p;
  m.degree_ = static_cast<int>(Binomial(cm, p)) * (1 << p);
  m.eigen_bound_ = 2.0 * p;
  m.Finalize();
  return m;
}

GardingOperator GardingOperator::CorruptedDet(int n) {
  if (n < 2) throw std::invalid_argument("CorruptedDet: n must be >= 2");
  GardingOperator m(GardingKind::kCorruptedDet, n);
  m.degree_ = n;
  m.eigen_bound_ = 2.0;
  m.Finalize();
  return m;
}

void GardingOperator::Finalize() {
  const double at_identity = Evaluate(SymMatrix::Identity(n_));
  if (!(at_identity > 0.0)) {
    throw std::invalid_argument("GardingOperator: M(I) must be positive");
  }
  unit_scale_ = std::pow(at_identity, -1.0 / degree_);
}

std::string GardingOperator::name() const {
  switch (kind_) {
    case GardingKind::kDetReal: return "det_real";
    case GardingKind::kDetComplex: return "det_complex";
    case GardingKind::kDetQuaternionic: return "det_quaternionic";
    case GardingKind::kElementarySymmetric:
      return "sigma_" + std::to_string(int_param_) + "(" + base_->name() + ")";
    case GardingKind::kPConvexity: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g", param_);
      return std::string("sigma_p[") + buf + "](" + base_->name() + ")";
    }
    case GardingKind::kDeltaReg: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g", param_);
      return std::string("delta_reg[") + buf + "](" + base_->name() + ")";
    }
    case GardingKind::kLag: return "lag";
    case GardingKind::kIso: return "iso_" + std::to_string(int_param_);
    case GardingKind::kCorruptedDet: return "corrupted_det";
  }
  return "unknown";
}

Vector GardingOperator::BaseSpectrum(const SymMatrix& a) const {
  if (auto s = base_->StructuralSpectrum(a)) return *s;
  return GardingEigenvalues(*base_, a).eigenvalues;
}

Vector GardingOperator::FactorValues(const SymMatrix& a) const {
  std::vector<double> out;
  switch (kind_) {
    case GardingKind::kPConvexity: {
      const Vector lam = BaseSpectrum(a);
      const int mb = static_cast<int>(lam.size());
      const int fl = static_cast<int>(std::floor(param_ + 1e-12));
      const double frac = param_ - fl;
      const bool integral = frac < 1e-12;
      ForEachSubset(mb, fl, [&](unsigned mask) {
        double sum = 0.0;
        for (int i = 0; i < mb; ++i)
          if (mask & (1u << i)) sum += lam(i);
        if (integral) {
          out.push_back(sum);
        } else {
          for (int j = 0; j < mb; ++j)
            if (!(mask & (1u << j))) out.push_back(sum + frac * lam(j));
        }
      });
      break;
    }
    case GardingKind::kLag:
    case GardingKind::kIso: {
      const Vector lam = SkewHermitianEigenvaluePairs(a, *complex_);
      const int cm = static_cast<int>(lam.size());
      const int p = kind_ == GardingKind::kLag ? cm : int_param_;
      const double lead = a.trace() * p / (2.0 * cm);
      ForEachSubset(cm, p, [&](unsigned subset) {
        for (unsigned signs = 0; signs < (1u << p); ++signs) {
          double v = lead;
          int bit = 0;
          for (int i = 0; i < cm; ++i) {
            if (!(subset & (1u << i))) continue;
            v += (signs & (1u << bit)) ? -lam(i) : lam(i);
            ++bit;
          }
          out.push_back(v);
        }
      });
      break;
    }
    default:
      throw std::logic_error("FactorValues: operator has no factor form");
  }
  return SortedCopy(std::move(out));
}

double GardingOperator::Evaluate(const SymMatrix& a) const {
  if (a.dim() != n_) {
    throw std::invalid_argument("GardingOperator::Evaluate: dimension mismatch");
  }
  switch (kind_) {
    case GardingKind::kDetReal:
      return a.matrix().partialPivLu().determinant();
    case GardingKind::kDetComplex:
      return Product(ComplexEigenvalues(a, *complex_));
    case GardingKind::kDetQuaternionic:
      return Product(QuaternionicEigenvalues(a, *quaternion_));
    case GardingKind::kElementarySymmetric:
      return ElementarySymmetricValue(*base_, int_param_, a);
    case GardingKind::kPConvexity:
    case GardingKind::kLag:
    case GardingKind::kIso:
      return Product(FactorValues(a));
    case GardingKind::kDeltaReg:
      return base_->Evaluate(a + SymMatrix::Identity(n_) *
                                     (param_ / n_ * a.trace()));
    case GardingKind::kCorruptedDet: {
      const double off = a(0, 1);
      return a.matrix().partialPivLu().determinant() + 0.5 * off * off * off;
    }
  }
  throw std::logic_error("GardingOperator::Evaluate: unknown kind");
}

std::optional<Vector> GardingOperator::StructuralSpectrum(
    const SymMatrix& a) const {
  switch (kind_) {
    case GardingKind::kDetReal:
      return EigenvaluesSorted(a);
    case GardingKind::kDetComplex:
      return ComplexEigenvalues(a, *complex_);
    case GardingKind::kDetQuaternionic:
      return QuaternionicEigenvalues(a, *quaternion_);
    case GardingKind::kPConvexity:
    case GardingKind::kLag:
    case GardingKind::kIso:
      return FactorValues(a);
    case GardingKind::kDeltaReg:
      return BaseSpectrum(a + SymMatrix::Identity(n_) *
                                  (param_ / n_ * a.trace()));
    case GardingKind::kElementarySymmetric:
    case GardingKind::kCorruptedDet:
      return std::nullopt;
  }
  return std::nullopt;
}

Vector InterpolateMonomial(const std::function<double(double)>& f, int d,
                           double radius) {
  const int count = d + 1;
  Matrix v(count, count);
  Vector y(count);
  for (int k = 0; k < count; ++k) {
    const double x = std::cos(M_PI * (k + 0.5) / count);
    double power = 1.0;
    for (int j = 0; j < count; ++j) {
      v(k, j) = power;
      power *= x;
    }
    y(k) = f(radius * x);
  }
  Vector c = v.colPivHouseholderQr().solve(y);
  double scale = 1.0;
  for (int j = 0; j < count; ++j) {
    c(j) /= scale;
    scale *= radius;
  }
  return c;
}

GardingSpectrum GardingEigenvalues(const GardingOperator& m,
                                   const SymMatrix& a, double tol) {
  const int d = m.degree();
  const double norm = a.norm();
  const double radius = m.eigen_bound() * norm + 1.0;
  const double c = m.unit_scale();
  const SymMatrix id = SymMatrix::Identity(a.dim());

  // Chebyshev coefficients of x -> M(R x e + A) / R^d on [-1, 1].
  const int count = d + 1;
  Vector values(count);
  const double rd = std::pow(radius, d);
  for (int k = 0; k < count; ++k) {
    const double x = std::cos(M_PI * (k + 0.5) / count);
    values(k) = m.Evaluate(a + id * (radius * x * c)) / rd;
  }
  Vector cheb(count);
  for (int j = 0; j < count; ++j) {
    double s = 0.0;
    for (int k = 0; k < count; ++k)
      s += values(k) * std::cos(M_PI * j * (k + 0.5) / count);
    cheb(j) = 2.0 * s / count;
  }
  cheb(0) *= 0.5;

  std::vector<std::complex<double>> roots;
  if (d == 1) {
    roots.push_back(-cheb(0) / cheb(1));
  } else {
    Matrix colleague = Matrix::Zero(d, d);
    colleague(0, 1) = 1.0;
    for (int i = 1; i < d - 1; ++i) {
      colleague(i, i - 1) = 0.5;
      colleague(i, i + 1) = 0.5;
    }
    colleague(d - 1, d - 2) = 0.5;
    for (int j = 0; j < d; ++j) colleague(d - 1, j) -= cheb(j) / (2.0 * cheb(d));
    Eigen::EigenSolver<Matrix> es(colleague, false);
    if (es.info() != Eigen::Success) {
      throw HyperbolicityViolation("GardingEigenvalues: eigensolver failed", a,
                                   std::numeric_limits<double>::infinity());
    }
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  }
  for (auto& z : roots) z *= radius;

  GardingSpectrum out;
  const double flat = tol * (1.0 + norm);
  std::vector<bool> used(d, false);
  std::vector<double> real_roots;
  for (int i = 0; i < d; ++i) {
    if (used[i] || std::abs(roots[i].imag()) <= flat) continue;
    std::vector<int> order;
    for (int j = 0; j < d; ++j)
      if (!used[j]) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int p, int q) {
      return std::abs(roots[p] - roots[i]) < std::abs(roots[q] - roots[i]);
    });
    bool accepted = false;
    for (std::size_t k = 2; k <= order.size() && !accepted; ++k) {
      std::complex<double> centroid = 0.0;
      for (std::size_t t = 0; t < k; ++t) centroid += roots[order[t]];
      centroid /= static_cast<double>(k);
      double spread = 0.0;
      for (std::size_t t = 0; t < k; ++t)
        spread = std::max(spread, std::abs(roots[order[t]] - centroid));
      const double allowed =
          4.0 * std::pow(kClusterEta, 1.0 / static_cast<double>(k)) * radius;
      if (std::abs(centroid.imag()) <= flat && spread <= allowed) {
        for (std::size_t t = 0; t < k; ++t) {
          used[order[t]] = true;
          real_roots.push_back(centroid.real());
        }
        out.cluster_spread = std::max(out.cluster_spread, spread);
        accepted = true;
      }
    }
    if (!accepted) {
      throw HyperbolicityViolation(
          "GardingEigenvalues: non-real root for " + m.name(), a,
          std::abs(roots[i].imag()));
    }
  }
  for (int i = 0; i < d; ++i) {
    if (used[i]) continue;
    out.residual = std::max(out.residual, std::abs(roots[i].imag()));
    real_roots.push_back(roots[i].real());
  }
  out.eigenvalues.resize(d);
  for (int i = 0; i < d; ++i) out.eigenvalues(i) = -real_roots[i];
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

double ElementarySymmetricValue(const GardingOperator& base, int k,
                                const SymMatrix& a) {
  const int mb = base.degree();
  if (k < 1 || k > mb) {
    throw std::invalid_argument("ElementarySymmetricValue: need 1 <= k <= m");
  }
  const double c = base.unit_scale();
  const SymMatrix id = SymMatrix::Identity(a.dim());
  const double radius = base.eigen_bound() * a.norm() + 1.0;
  const Vector coeffs = InterpolateMonomial(
      [&](double t) { return base.Evaluate(a + id * (t * c)); }, mb, radius);
  return coeffs(mb - k);
}

BranchResult BranchMember(const GardingOperator& m, int k, const SymMatrix& a) {
  if (k < 1 || k > m.degree()) {
    throw std::invalid_argument("BranchMember: need 1 <= k <= m");
  }
  const double margin = GardingEigenvalues(m, a).eigenvalues(k - 1);
  return {margin >= 0.0, margin};
}

double MLagValue(const SymMatrix& a, const ComplexStructure& s) {
  if (s.complex_dim() > 12) {
    throw std::invalid_argument("MLagValue: m must be <= 12");
  }
  const Vector lam = SkewHermitianEigenvaluePairs(a, s);
  const int cm = static_cast<int>(lam.size());
  double prod = 1.0;
  for (unsigned signs = 0; signs < (1u << cm); ++signs) {
    double v = 0.5 * a.trace();
    for (int i = 0; i < cm; ++i) v += (signs & (1u << i)) ? -lam(i) : lam(i);
    prod *= v;
  }
  return prod;
}

bool CertificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CertificationCheck& c) { return c.failures == 0; });
}

namespace {

void RecordFailure(CertificationCheck& check, Counterexample ce) {
  ++check.failures;
  if (!check.first_failure) check.first_failure = std::move(ce);
}

}  // namespace

CertificationReport CertifyGarding(const GardingOperator& m, int trials,
                                   std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("CertifyGarding: trials >= 1");
  CertificationReport report;
  report.operator_name = m.name();
  report.trials = trials;
  report.seed = seed;
  CertificationCheck roots, convex, positive, monotone;
  roots.name = "real_roots";
  convex.name = "convexity";
  positive.name = "positivity";
  monotone.name = "monotonicity";
  const int n = m.dim();
  const double c = m.unit_scale();
  const SymMatrix id = SymMatrix::Identity(n);

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = MakeRng(seed, "certify", static_cast<std::uint64_t>(trial));
    const SymMatrix x = RandomSymmetric(rng, n);
    const SymMatrix y = RandomSymmetric(rng, n);
    const SymMatrix z = RandomSymmetric(rng, n);
    const SymMatrix psd = RandomPsd(rng, n, n);
    const double u1 = std::abs(Gaussian(rng)) + 1e-3;
    const double u2 = std::abs(Gaussian(rng)) + 1e-3;
    const double u3 = std::abs(Gaussian(rng));
    const double t = Uniform(rng);

    Vector lx, ly, lz;
    ++roots.trials;
    try {
      lx = GardingEigenvalues(m, x).eigenvalues;
      ly = GardingEigenvalues(m, y).eigenvalues;
      lz = GardingEigenvalues(m, z).eigenvalues;
    } catch (const HyperbolicityViolation& e) {
      RecordFailure(roots, {"real_roots", trial, {e.matrix()}, e.residual(),
                            e.what()});
      continue;
    }
    // Translation covariance places A, B in the open cone and C on its
    // boundary: lambda_1(X + s e) = lambda_1(X) + s.
    const SymMatrix a = x + id * ((u1 - lx(0)) * c);
    const SymMatrix b = y + id * ((u2 - ly(0)) * c);
    const SymMatrix bnd = z + id * ((u3 - lz(0)) * c);
    const double scale =
        1e-8 * (1.0 + a.norm() + b.norm() + psd.norm() + bnd.norm()) *
        m.eigen_bound();
    try {
      ++convex.trials;
      const SymMatrix mix = a * t + b * (1.0 - t);
      const double l1 = GardingEigenvalues(m, mix).eigenvalues(0);
      convex.worst = std::min(convex.worst, l1);
      if (l1 < -scale) {
        RecordFailure(convex, {"convexity", trial, {a, b}, l1,
                               "lambda_1(tA + (1-t)B) < 0"});
      }
      ++positive.trials;
      const double l2 = GardingEigenvalues(m, a + psd).eigenvalues(0);
      positive.worst = std::min(positive.worst, l2);
      if (l2 < -scale) {
        RecordFailure(positive, {"positivity", trial, {a, psd}, l2,
                                 "lambda_1(A + P) < 0"});
      }
      ++monotone.trials;
      const Vector before = lx;
      const Vector after = GardingEigenvalues(m, x + bnd).eigenvalues;
      const double slack = (after - before).minCoeff();
      monotone.worst = std::min(monotone.worst, slack);
      if (slack < -scale) {
        RecordFailure(monotone, {"monotonicity", trial, {x, bnd}, slack,
                                 "lambda_k(A + B) < lambda_k(A)"});
      }
    } catch (const HyperbolicityViolation& e) {
      RecordFailure(roots, {"real_roots", trial, {e.matrix()}, e.residual(),
                            e.what()});
    }
  }
  report.checks = {roots, convex, positive, monotone};
  return report;
}

}  // namespace riesz
