// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/experiment.h"
#include "riesz/field.h"
#include "riesz/flow.h"
#include "riesz/garding.h"
#include "riesz/grassmann.h"
#include "riesz/rng.h"
#include "riesz/sphjet.h"
#include "riesz/subeq.h"

namespace riesz {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

constexpr double kBisectTol = 1e-9;

double Increasing(const Subequation& f) {
  return RieszIncreasing(f, 1e3, kBisectTol).value.value;
}

void RieszClosedForms(Outcome& o) {
  double worst = 0.0;
  auto check = [&](double got, double want, const std::string& what) {
    worst = std::max(worst, std::abs(got - want));
    o.Require(std::abs(got - want) <= 1e-6, what);
  };
  for (int n = 3; n <= 5; ++n) {
    check(Increasing(Subequation::Trace(n)), n, "trace");
    check(Increasing(Subequation::Orphant(n)), 1.0, "orphant");
    for (double p : {1.5, 2.0, 3.0}) {
      const Subequation mm = Subequation::MinMax(n, p);
      const double pf = Increasing(mm);
      const double qf = RieszDecreasing(mm, 1e3, kBisectTol).value.value;
      check(pf, p, "minmax");
      check(RieszIncreasing(Subequation::Dual(mm), 1e3, kBisectTol).value.value, qf,
            "dual of minmax");
      check((pf - 1.0) * (qf - 1.0), 1.0, "(p-1)(q-1)");
      check(Increasing(Subequation::PConvex(n, p)), p, "pconvex");
    }
  }
  o.detail << "max error " << worst;
}

void ExpansionFormula(Outcome& o) {
  double worst = 0.0;
  for (int n = 3; n <= 5; ++n) {
    std::vector<std::pair<Subequation, double>> fams = {
        {Subequation::Orphant(n), 1.0}, {Subequation::Trace(n), n}};
    for (double p : {1.5, 2.0, 3.0}) {
      fams.emplace_back(Subequation::PConvex(n, p), p);
      fams.emplace_back(Subequation::MinMax(n, p), p);
    }
    for (const auto& [f, p] : fams) {
      for (double delta : {0.0, 0.5, 1.0, 2.0, 10.0}) {
        const double want = n * (1.0 + delta) * p / (n + delta * p);
        const double err = std::abs(Increasing(Expand(f, delta)) - want);
        worst = std::max(worst, err);
        o.Require(err <= 2e-6, f.name());
      }
    }
    for (double p : {1.5, 2.0}) {
      if (p >= n) continue;
      const double delta = (p - 1.0) * n / (n - p);
      o.Require(std::abs(Increasing(Expand(Subequation::Orphant(n), delta)) - p) <= 1e-6,
                "lemma delta");
    }
  }
  o.detail << "max error " << worst;
}

double BruteSigma(const Vector& lam, int k) {
  const int m = static_cast<int>(lam.size());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double prod = 1.0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) prod *= lam(i);
    total += prod;
  }
  return total;
}

void GardingOracles(Outcome& o) {
  Rng rng = MakeRng(2024, "acceptance-garding");
  double eig_err = 0.0, sigma_err = 0.0, delta_err = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const GardingOperator det = GardingOperator::DetReal(n);
    for (int t = 0; t < 100; ++t) {
      const SymMatrix a = RandomSymmetric(rng, n);
      const Vector lam = EigenvaluesSorted(a);
      eig_err = std::max(eig_err,
                         (GardingEigenvalues(det, a).eigenvalues - lam).cwiseAbs().maxCoeff());
      if (t < 10) {
        for (int k = 1; k <= n; ++k) {
          const double want = BruteSigma(lam, k);
          sigma_err = std::max(sigma_err, std::abs(ElementarySymmetricValue(det, k, a) - want) /
                                              std::max(1.0, std::abs(want)));
        }
        const double delta = 0.7;
        const Vector shifted = lam.array() + delta / n * a.trace();
        delta_err = std::max(
            delta_err, (GardingEigenvalues(GardingOperator::DeltaReg(det, delta), a).eigenvalues -
                        shifted).cwiseAbs().maxCoeff());
      }
    }
  }
  o.Require(eig_err <= 1e-8, "det_real eigenvalues");
  o.Require(sigma_err <= 1e-6, "sigma_k");
  o.Require(delta_err <= 1e-8, "M^delta spectrum");

  const ComplexStructure cs = ComplexStructure::Standard(2);
  const QuaternionStructure qs = QuaternionStructure::Standard(1);
  const std::vector<GardingOperator> bases = {GardingOperator::DetReal(3),
                                              GardingOperator::DetComplex(cs),
                                              GardingOperator::DetQuaternionic(qs)};
  int certified = 0, counterexamples = 0;
  for (const GardingOperator& b : bases) {
    std::vector<GardingOperator> ops = {b, GardingOperator::DeltaReg(b, 1.0)};
    for (int k = 1; k <= b.degree(); ++k) {
      ops.push_back(GardingOperator::ElementarySymmetric(b, k));
      ops.push_back(GardingOperator::PConvexity(b, k));
    }
    for (const GardingOperator& m : ops) {
      const CertificationReport r = CertifyGarding(m, 1000, 7);
      for (const CertificationCheck& c : r.checks) counterexamples += c.failures;
      o.Require(r.passed(), "certify " + m.name());
      ++certified;
    }
  }
  const bool flagged = !CertifyGarding(GardingOperator::CorruptedDet(3), 1000, 7).passed();
  o.Require(flagged, "corrupted operator not flagged");
  o.detail << "eig " << eig_err << ", sigma rel " << sigma_err << ", delta " << delta_err
           << ", " << certified << " operators certified with " << counterexamples
           << " counterexamples, corrupted flagged=" << flagged;
}

void JetMap(Outcome& o) {
  Rng rng = MakeRng(2024, "acceptance-jet");
  double trace_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 3 + t % 4;
    const double p = Uniform(rng, 1.0, 5.0);
    const UnitVector s = RandomUnitVector(rng, n);
    const SphericalJet jet(s, TangentFrame(s), Gaussian(rng), GaussianVector(rng, n - 1),
                           RandomSymmetric(rng, n - 1));
    const PhiTrace tr = TraceOfPhi(jet, p);
    trace_err = std::max(trace_err, std::abs(tr.trace - tr.operator_value) /
                                        (1.0 + std::abs(tr.operator_value)));
  }
  o.Require(trace_err <= 1e-12, "trace identity");

  double fd = 0.0;
  for (int n : {3, 4}) {
    for (double p : {1.0, 2.0, 3.0, 4.0}) {
      const Vector a = GaussianVector(rng, n);
      Matrix m = RandomSymmetric(rng, n).matrix();
      m -= (m.trace() / n) * Matrix::Identity(n, n);
      const std::vector<PointFunction> gs = {
          [](const Vector&) { return -1.0; }, [](const Vector&) { return 2.5; },
          [a](const Vector& x) { return a.dot(x); },
          [m](const Vector& x) { return x.dot(m * x); }};
      for (const PointFunction& g : gs) {
        fd = std::max(fd, FdCrossCheck(g, RandomUnitVector(rng, n), p, 1e-4).residual);
      }
    }
  }
  o.Require(fd <= 1e-5, "fd cross-check");

  double boundary = 0.0;
  int families = 0;
  auto on_boundary = [&](const Subequation& f, double p) {
    const int n = f.dim();
    const double g = p < 2.0 ? 1.0 : -1.0;
    for (int k = 0; k < 5; ++k) {
      const UnitVector s = RandomUnitVector(rng, n);
      const SphericalJet jet(s, TangentFrame(s), g, Vector::Zero(n - 1),
                             SymMatrix::Zero(n - 1));
      boundary = std::max(boundary, std::abs(SphereSubeqMember(f, jet, p).margin));
    }
    ++families;
  };
  for (int n : {3, 4}) {
    for (double p : {1.5, 2.0, 3.0}) {
      on_boundary(Subequation::MinMax(n, p), p);
      on_boundary(Subequation::Min2(n, p), p);
      on_boundary(Subequation::PConvex(n, p), p);
    }
    on_boundary(Subequation::Trace(n), n);
    on_boundary(Expand(Subequation::Orphant(n), 0.5 * n / (n - 1.5)), 1.5);
  }
  on_boundary(Subequation::ComplexLift(Subequation::Orphant(2), ComplexStructure::Standard(2)),
              2.0);
  on_boundary(Subequation::QuaternionLift(Subequation::Orphant(2),
                                          QuaternionStructure::Standard(2)),
              4.0);
  o.Require(boundary <= 1e-9, "kernel jet on boundary");
  o.detail << "trace rel " << trace_err << ", fd residual " << fd << ", boundary margin "
           << boundary << " over " << families << " families";
}

FlowSchedule Dyadic(double p, std::uint64_t seed) {
  FlowSchedule s;
  s.p = p;
  s.radii = FlowSchedule::Dyadic(0, 10);
  s.seed = seed;
  return s;
}

void TangentWitnesses(Outcome& o) {
  // (a) K_p + |x|^2 for p in {1.5, 2, 3, 4}.
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const ScalarField u = CatalogField("kernel_plus_quadratic", 3, p);
    const DensityReport d = Density(u, Dyadic(p, 1));
    const ConvergenceReport c = TangentConvergence(u, Dyadic(p, 1), CatalogField("kernel", 3, p), 1e-3);
    o.Require(d.theta && std::abs(*d.theta - 1.0) <= 1e-2, "density of K_p + |x|^2");
    o.Require(c.converged, "K_p + |x|^2 tangent");
    o.detail << "p=" << p << ": theta " << d.theta.value_or(NAN) << " dist "
             << c.distances.back() << "; ";
  }
  {
    const ScalarField u = CatalogField("kernel_plus_quadratic", 3, 1.0);
    const ConvergenceReport c = TangentConvergence(u, Dyadic(1.0, 1), CatalogField("kernel", 3, 1.0), 1e-3);
    o.detail << "(note p=1 dist " << c.distances.back() << ", decays only like r) ";
  }
  // (b), (c): line fields are fixed points but not radial.
  struct Line {
    const char* id;
    int n;
    double p;
    ScalarField radial;
  };
  const std::vector<Line> lines = {{"log_z1", 4, 2.0, FieldFromExpression("log(r)", 4)},
                                   {"quat_q1", 8, 4.0, CatalogField("kernel", 8, 4.0)}};
  for (const Line& l : lines) {
    const ScalarField u = CatalogField(l.id, l.n);
    const ConvergenceReport self = TangentConvergence(u, Dyadic(l.p, 1), u, 1e-3);
    o.Require(self.distances.back() <= self.noise_floor, std::string(l.id) + " fixed point");
    std::vector<double> d;
    for (std::uint64_t seed : {1, 2, 3}) {
      d.push_back(TangentConvergence(u, Dyadic(l.p, seed), l.radial, 1e-3).distances.back());
    }
    const double lo = *std::min_element(d.begin(), d.end());
    const double hi = *std::max_element(d.begin(), d.end());
    o.Require(lo > 10 * self.noise_floor, std::string(l.id) + " separated from radial");
    o.Require(hi - lo <= 0.05 * lo, std::string(l.id) + " stable across seeds");
    o.detail << l.id << ": self " << self.distances.back() << " radial " << lo << ".." << hi
             << "; ";
  }
}

void Monotonicity(Outcome& o) {
  int total = 0;
  for (const std::string& id : CatalogIds()) {
    const int n = id == "quat_q1" ? 8 : 4;
    const ScalarField u = CatalogField(id, n, 3.0);
    const DensityReport r = Density(u, Dyadic(*u.natural_p, 3));
    total += static_cast<int>(r.violations.size());
    o.Require(r.violations.empty(), id);
  }
  o.detail << CatalogIds().size() << " fields, " << total << " violations";
}

void Restrictions(Outcome& o) {
  const ScalarField u = CatalogField("log_z1", 4);
  const DensityReport a = PlaneRestrictionDensity(u, Frame::CoordinatePlane(4, {0, 2}), Dyadic(2.0, 5));
  const DensityReport b = PlaneRestrictionDensity(u, Frame::CoordinatePlane(4, {1, 3}), Dyadic(2.0, 5));
  o.Require(!a.polar && a.theta && std::abs(*a.theta - 1.0) <= 2e-2, "z1 line density");
  o.Require(b.polar, "z2 line polar");
  o.detail << "Theta(z1 line) " << a.theta.value_or(NAN) << ", z2 line polar=" << b.polar << "; ";

  struct Plane {
    const char* id;
    int n;
    double p;
    Frame w;
  };
  const std::vector<Plane> planes = {
      {"quat_q1", 8, 4.0, Frame::CoordinatePlane(8, {0, 1, 2, 3})},
      {"kernel", 3, 3.0, Frame::CoordinatePlane(3, {0, 1, 2})},
      {"kernel_scaled", 4, 4.0, Frame::CoordinatePlane(4, {0, 1, 2, 3})},
      {"log_z1", 4, 2.0, Frame::CoordinatePlane(4, {0, 2})},
      {"max_log", 4, 2.0, Frame::CoordinatePlane(4, {1, 3})}};
  for (const Plane& pl : planes) {
    const ScalarField f = CatalogField(pl.id, pl.n, pl.p);
    const DensityReport d = PlaneRestrictionDensity(f, pl.w, Dyadic(pl.p, 5));
    const PlaneSphereStats s = StatsOnPlaneSphere(f, pl.w, 2000, 5);
    // On the unit sphere of W: -Theta(W) for p > 2, the constant sup g = 0 for p = 2.
    const double expected = pl.p > 2.0 ? -d.theta.value_or(NAN) : 0.0;
    o.Require(s.max - s.min <= 1e-2, std::string(pl.id) + " constant on W sphere");
    o.Require(std::abs(s.mean - expected) <= 1e-2, std::string(pl.id) + " value on W sphere");
    o.detail << pl.id << " " << s.mean << " vs " << expected << "; ";
  }
}

int ChainCount(const PlaneFamily& f, int n, int max_len, int* histogram_nonzero) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = MakeRng(seed, "acceptance-endpoints");
    const UnitVector x = RandomUnitVector(rng, n), y = RandomUnitVector(rng, n);
    const TransitivityReport r = TransitivityCheck(f, x, y, 1000, seed);
    for (const auto& [dim, count] : r.intersection_histogram) {
      if (dim != 0 && count > 0 && histogram_nonzero) ++*histogram_nonzero;
    }
    if (r.chain_found && (max_len == 0 || static_cast<int>(r.chain.size()) <= max_len)) ++ok;
  }
  return ok;
}

void Transitivity(Outcome& o) {
  const ComplexStructure c2 = ComplexStructure::Standard(2);
  const int real = ChainCount(PlaneFamily::FullReal(3, 2), 3, 2, nullptr);
  int nonzero = 0;
  const int lines = ChainCount(PlaneFamily::ComplexPlanes(1, c2), 4, 0, &nonzero);
  const int lag = ChainCount(PlaneFamily::Lagrangian(c2), 4, 0, nullptr);
  const int kahler =
      ChainCount(PlaneFamily::KahlerOrbit(0.5, ComplexStructure::Standard(3)), 6, 0, nullptr);
  o.Require(real == 100, "real 2-planes");
  o.Require(lines == 0 && nonzero == 0, "complex lines");
  o.Require(lag >= 95, "lagrangian");
  o.Require(kahler >= 95, "kahler orbit");
  o.detail << "R^3 " << real << "/100, complex lines chains " << lines
           << " (nonzero histogram entries " << nonzero << "), lagrangian " << lag
           << "/100, kahler " << kahler << "/100";
}

void ConvexFacts(Outcome& o) {
  FlowSchedule s = Dyadic(1.0, 9);
  s.ns = 2000;
  s.nb = 2000;
  int violations = 0;
  for (const std::string id :
       {"abs_x1", "norm_sq", "euclid_norm", "max_affine", "halfspace", "smooth_linear"}) {
    const ConvexTangentReport r = ConvexTangent(CatalogField(id, 4), s);
    violations += r.monotonicity_violations;
    if (id == "max_affine") {
      o.Require(r.support_error && *r.support_error <= 1e-6, "max_affine support");
      o.detail << "max_affine support error " << r.support_error.value_or(NAN) << "; ";
    }
    if (id == "norm_sq" || id == "smooth_linear") {
      o.Require(r.theta_s == 0.0, id + " theta_s");
    }
    if (id == "abs_x1") {
      o.Require(r.theta_s > 0.0, "abs_x1 theta_s");
      o.detail << "abs_x1 theta_s " << r.theta_s << "; ";
    }
  }
  o.Require(violations == 0, "monotone decrease");
  o.detail << violations << " monotonicity violations";
}

void Determinism(Outcome& o) {
  const std::vector<std::vector<std::string>> cases = {
      {"subeq", "riesz", "n = 4\nkind = minmax\np = 3\n"},
      {"subeq", "expand", "n = 4\nkind = trace\ndelta = 2\n"},
      {"garding", "certify", "kind = garding:det_quaternionic\nn = 8\ntrials = 100\n"},
      {"grass", "transitivity", "family = lagrangian\nn = 4\nbudget = 500\n"},
      {"grass", "invariant", "family = quat_orbit\nn = 8\ninvariant = 0.3\ncount = 10\n"},
      {"flow", "density", "n = 4\ncatalog = max_log\np = 2\n"},
      {"flow", "tangent", "n = 8\ncatalog = quat_q1\np = 4\ncandidate_catalog = kernel\n"},
      {"flow", "convex", "n = 4\ncatalog = max_affine\nns = 1000\nnb = 1000\n"},
      {"flow", "restrict", "n = 4\ncatalog = log_z1\np = 2\nplane = 2, 4\n"},
      {"sphere", "fdcheck", "n = 3\ng = x1*x2\np = 3\n"},
      {"sphere", "member", "n = 4\nkind = pconvex\np = 3\ng = -1\n"},
  };
  int identical = 0;
  for (const auto& c : cases) {
    const RunReport a = Run(ParseConfig(c[0], c[1], c[2], 99));
    const RunReport b = Run(ParseConfig(c[0], c[1], c[2], 99));
    bool same = SerializeJson(a) == SerializeJson(b) && a.exit_code != kExitConfig;
    if (a.table && b.table) same = same && SerializeCsv(*a.table) == SerializeCsv(*b.table);
    o.Require(same, c[0] + " " + c[1]);
    identical += same;
  }
  o.detail << identical << "/" << cases.size() << " reports byte-identical";
}

}  // namespace
}  // namespace riesz

int main() {
  using namespace riesz;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Riesz characteristic closed forms", RieszClosedForms},
      {"expansion formula", ExpansionFormula},
      {"Garding oracle equivalence", GardingOracles},
      {"jet map correctness", JetMap},
      {"tangent-flow uniqueness witnesses", TangentWitnesses},
      {"density monotonicity", Monotonicity},
      {"restriction densities and homogeneity", Restrictions},
      {"transitivity verdicts", Transitivity},
      {"convex classical facts", ConvexFacts},
      {"determinism", Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str(), secs);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
