#include "riesz/experiment.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>

#include "riesz/field.h"
#include "riesz/flow.h"
#include "riesz/garding.h"
#include "riesz/grassmann.h"
#include "riesz/linalg.h"
#include "riesz/rng.h"
#include "riesz/spec_file.h"
#include "riesz/sphjet.h"
#include "riesz/subeq.h"

namespace riesz {

namespace {

using nlohmann::json;

json Num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json ToJson(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(Num(v(i)));
  return a;
}

json ToJson(const Matrix& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(ToJson(Vector(m.row(i).transpose())));
  return a;
}

json ToJson(const SymMatrix& m) { return ToJson(m.matrix()); }

json ToJson(const ExtendedReal& v) {
  return v.infinite ? json("inf") : json(v.value);
}

json ToJson(const RieszCharacteristic& r) {
  return {{"value", ToJson(r.value)},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"evaluations", r.evaluations}};
}

std::string FormatReal(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---------------------------------------------------------------- builders

ComplexStructure MakeComplex(ParamReader& pr, int n) {
  if (n % 2 != 0) throw ConfigError("complex structure needs even n");
  const std::string s = pr.String("structure", "standard");
  if (s == "standard") return ComplexStructure::Standard(n / 2);
  if (s == "paired") return ComplexStructure::Paired(n / 2);
  throw ConfigError("structure must be standard or paired");
}

QuaternionStructure MakeQuaternion(int n) {
  if (n % 4 != 0) throw ConfigError("quaternionic structure needs n = 4m");
  return QuaternionStructure::Standard(n / 4);
}

Subequation MakeEigenFamily(const std::string& family, int n, ParamReader& pr) {
  if (family == "orphant") return Subequation::Orphant(n);
  if (family == "trace") return Subequation::Trace(n);
  if (family == "minmax" || family == "min2" || family == "pconvex") {
    const double p = pr.RequireReal("p");
    if (!(p >= 1.0)) throw ConfigError(family + " requires p >= 1");
    if (family == "pconvex" && p > n) {
      throw ConfigError("pconvex requires 1 <= p <= n (p = " + FormatReal(p) +
                        ", n = " + std::to_string(n) + ")");
    }
    if (family == "minmax") return Subequation::MinMax(n, p);
    if (family == "min2") return Subequation::Min2(n, p);
    return Subequation::PConvex(n, p);
  }
  throw ConfigError("unknown eigenvalue family '" + family + "'");
}

PlaneFamily MakePlaneFamily(ParamReader& pr, const std::string& key, int n) {
  const std::string family = pr.RequireString(key);
  if (family == "full_real") {
    const int p = pr.RequireInt("p");
    if (p < 1 || p > n) throw ConfigError("full_real needs 1 <= p <= n");
    return PlaneFamily::FullReal(n, p);
  }
  if (family == "complex") {
    const int k = pr.Int("k", 1);
    return PlaneFamily::ComplexPlanes(k, MakeComplex(pr, n));
  }
  if (family == "quaternionic") {
    const int k = pr.Int("k", 1);
    return PlaneFamily::QuaternionicPlanes(k, MakeQuaternion(n));
  }
  if (family == "lagrangian") return PlaneFamily::Lagrangian(MakeComplex(pr, n));
  if (family == "isotropic") {
    const int p = pr.RequireInt("p");
    if (p < 1 || p > n / 2) throw ConfigError("isotropic needs 1 <= p <= n/2");
    return PlaneFamily::Isotropic(p, MakeComplex(pr, n));
  }
  if (family == "kahler") {
    const double c = pr.RequireReal("costheta");
    if (c < 0.0 || c > 1.0) throw ConfigError("costheta must lie in [0, 1]");
    return PlaneFamily::KahlerOrbit(c, MakeComplex(pr, n));
  }
  if (family == "quat_orbit") {
    const double s = pr.RequireReal("invariant");
    if (s < 0.0 || s > 1.0) throw ConfigError("invariant must lie in [0, 1]");
    return PlaneFamily::QuatOrbit(s, MakeQuaternion(n));
  }
  throw ConfigError("unknown plane family '" + family + "'");
}

GardingOperator MakeDet(const std::string& kind, int n, ParamReader& pr) {
  if (kind == "det_real") return GardingOperator::DetReal(n);
  if (kind == "det_complex") return GardingOperator::DetComplex(MakeComplex(pr, n));
  if (kind == "det_quaternionic") {
    return GardingOperator::DetQuaternionic(MakeQuaternion(n));
  }
  throw ConfigError("base must be det_real, det_complex or det_quaternionic");
}

GardingOperator MakeGarding(const std::string& kind, ParamReader& pr, int n) {
  const std::string op = kind.rfind("garding:", 0) == 0 ? kind.substr(8) : kind;
  if (op == "det_real" || op == "det_complex" || op == "det_quaternionic") {
    return MakeDet(op, n, pr);
  }
  if (op == "sigma" || op == "pconv" || op == "delta") {
    const GardingOperator base = MakeDet(pr.String("base", "det_real"), n, pr);
    const int m = base.degree();
    if (op == "sigma") {
      const int k = pr.RequireInt("k");
      if (k < 1 || k > m) throw ConfigError("sigma requires 1 <= k <= degree");
      return GardingOperator::ElementarySymmetric(base, k);
    }
    if (op == "pconv") {
      const double p = pr.RequireReal("p");
      if (!(p >= 1.0) || p > m) throw ConfigError("pconv requires 1 <= p <= degree");
      return GardingOperator::PConvexity(base, p);
    }
    const double delta = pr.RequireReal("delta");
    if (delta < 0.0) throw ConfigError("delta must be >= 0");
    return GardingOperator::DeltaReg(base, delta);
  }
  if (op == "lag") return GardingOperator::Lag(MakeComplex(pr, n));
  if (op == "iso") {
    const int p = pr.RequireInt("p");
    if (p < 1 || p > n / 2) throw ConfigError("iso requires 1 <= p <= n/2");
    return GardingOperator::Iso(MakeComplex(pr, n), p);
  }
  if (op == "corrupted") return GardingOperator::CorruptedDet(n);
  throw ConfigError("unknown operator '" + op + "'");
}

Subequation MakeSubequation(ParamReader& pr, int n, std::uint64_t seed,
                            std::optional<int> budget_flag) {
  const std::string family = pr.RequireString("kind");
  if (family.rfind("garding:", 0) == 0) {
    const GardingOperator m = MakeGarding(family.substr(8), pr, n);
    const int k = pr.Int("branch", 1);
    if (k < 1 || k > m.degree()) throw ConfigError("branch must lie in [1, degree]");
    return Subequation::GardingBranch(m, k);
  }
  if (family == "complex_lift" || family == "quaternion_lift") {
    const std::string base = pr.String("base", "orphant");
    if (family == "complex_lift") {
      const ComplexStructure s = MakeComplex(pr, n);
      return Subequation::ComplexLift(
          MakeEigenFamily(base, s.complex_dim(), pr), s);
    }
    const QuaternionStructure s = MakeQuaternion(n);
    return Subequation::QuaternionLift(
        MakeEigenFamily(base, s.quaternionic_dim(), pr), s);
  }
  if (family == "lagrangian") return Subequation::Lagrangian(MakeComplex(pr, n));
  if (family == "isotropic" || family == "isotropic_dual") {
    const int p = pr.RequireInt("p");
    if (p < 1 || p > n / 2) throw ConfigError(family + " requires 1 <= p <= n/2");
    const ComplexStructure s = MakeComplex(pr, n);
    return family == "isotropic" ? Subequation::Isotropic(s, p)
                                 : Subequation::IsotropicDual(s, p);
  }
  if (family == "geometric") {
    const PlaneFamily planes = MakePlaneFamily(pr, "planes", n);
    int budget = budget_flag ? *budget_flag : pr.Int("budget", 1000);
    if (budget_flag) pr.Echo("budget", budget);
    if (budget < 1) throw ConfigError("budget must be >= 1");
    return Subequation::Geometric(planes, budget, seed);
  }
  return MakeEigenFamily(family, n, pr);
}

SymMatrix ReadMatrix(ParamReader& pr, int n) {
  const auto m = pr.OptionalMatrix("matrix");
  const auto d = pr.OptionalReals("diag");
  if (m && d) throw ConfigError("give either matrix or diag, not both");
  if (!m && !d) throw ConfigError("missing required key 'matrix' (or 'diag')");
  Matrix a;
  if (m) {
    a = *m;
  } else {
    a = Matrix::Zero(d->size(), d->size());
    for (std::size_t i = 0; i < d->size(); ++i) a(i, i) = (*d)[i];
  }
  if (a.rows() != n || a.cols() != n) {
    throw ConfigError("matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  }
  try {
    return SymMatrix(a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int ReadDim(ParamReader& pr) {
  const int n = pr.RequireInt("n");
  if (n < 1 || n > 64) throw ConfigError("n must lie in [1, 64]");
  return n;
}

double ResolveTol(ParamReader& pr, const ExperimentConfig& c, double def) {
  if (c.tol) {
    pr.Echo("tol", *c.tol);
    return *c.tol;
  }
  const double t = pr.Real("tol", def);
  if (!(t > 0.0)) throw ConfigError("tol must be > 0");
  return t;
}

// ---------------------------------------------------------------- subeq

void RunSubeq(const ExperimentConfig& c, ParamReader& pr, RunReport& rep) {
  const int n = ReadDim(pr);
  const Subequation f = MakeSubequation(pr, n, c.seed, c.budget);
  json& r = rep.results;
  r["family"] = f.name();
  if (c.action == "member") {
    const SymMatrix a = ReadMatrix(pr, n);
    const double tol = ResolveTol(pr, c, 1e-9);
    pr.Finish();
    const MemberResult m = Member(f, a, tol);
    r["eigenvalues"] = ToJson(EigenvaluesSorted(a));
    r["margin"] = Num(m.margin);
    r["member"] = m.member;
  } else if (c.action == "riesz") {
    const double p_max = pr.Real("p_max", 1000.0);
    const double tol = ResolveTol(pr, c, 1e-9);
    pr.Finish();
    if (!(p_max > 1.0)) throw ConfigError("p_max must be > 1");
    const RieszCharacteristic inc = RieszIncreasing(f, p_max, tol);
    const RieszCharacteristic dec = RieszDecreasing(f, p_max, tol);
    r["increasing"] = ToJson(inc);
    r["decreasing"] = ToJson(dec);
    if (!inc.value.infinite && !dec.value.infinite) {
      r["product_p_minus_1_q_minus_1"] =
          Num((inc.value.value - 1.0) * (dec.value.value - 1.0));
    }
  } else if (c.action == "dual") {
    const SymMatrix a = ReadMatrix(pr, n);
    const double eps = pr.Real("eps", 1e-9);
    pr.Finish();
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    r["dual_member"] = DualMember(f, a, eps);
    r["margin_of_negative"] =
        Num(f.Margin(-a - eps * SymMatrix::Identity(n)));
  } else if (c.action == "expand") {
    const double delta = pr.RequireReal("delta");
    const double p_max = pr.Real("p_max", 1000.0);
    const double tol = ResolveTol(pr, c, 1e-9);
    pr.Finish();
    if (delta < 0.0) throw ConfigError("delta must be >= 0");
    const RieszCharacteristic p0 = RieszIncreasing(f, p_max, tol);
    const RieszCharacteristic q0 = RieszDecreasing(f, p_max, tol);
    const Subequation g = Expand(f, delta);
    const RieszCharacteristic p1 = RieszIncreasing(g, p_max, tol);
    const RieszCharacteristic q1 = RieszDecreasing(g, p_max, tol);
    r["expanded"] = g.name();
    r["base_increasing"] = ToJson(p0);
    r["base_decreasing"] = ToJson(q0);
    r["increasing"] = ToJson(p1);
    r["decreasing"] = ToJson(q1);
    r["predicted_increasing"] =
        ToJson(PredictedExpansionCharacteristic(p0.value, delta, n));
    r["predicted_decreasing"] =
        ToJson(PredictedExpansionCharacteristic(q0.value, delta, n));
  } else {
    throw ConfigError("unknown subeq action '" + c.action + "'");
  }
}

// ---------------------------------------------------------------- garding


json ToJson(const Counterexample& c) {
  json m = json::array();
  for (const SymMatrix& a : c.matrices) m.push_back(ToJson(a));
  return {{"check", c.check}, {"trial", c.trial}, {"matrices", m},
          {"value", Num(c.value)}, {"detail", c.detail}};
}

void RunGarding(const ExperimentConfig& c, ParamReader& pr, RunReport& rep) {
  const int n = ReadDim(pr);
  const GardingOperator m = MakeGarding(pr.RequireString("kind"), pr, n);
  json& r = rep.results;
  r["operator"] = m.name();
  r["degree"] = m.degree();
  if (c.action == "eig" || c.action == "branch") {
    const SymMatrix a = ReadMatrix(pr, n);
    const int k = c.action == "branch" ? pr.RequireInt("branch") : 0;
    const double tol = ResolveTol(pr, c, 1e-6);
    pr.Finish();
    if (c.action == "branch" && (k < 1 || k > m.degree())) {
      throw ConfigError("branch requires 1 <= k <= degree");
    }
    try {
      const GardingSpectrum s = GardingEigenvalues(m, a, tol);
      r["eigenvalues"] = ToJson(s.eigenvalues);
      r["root_residual"] = Num(s.residual);
      r["cluster_spread"] = Num(s.cluster_spread);
      if (const auto st = m.StructuralSpectrum(a)) r["structural"] = ToJson(*st);
      if (c.action == "branch") {
        const BranchResult b = BranchMember(m, k, a);
        r["branch"] = k;
        r["member"] = b.member;
        r["margin"] = Num(b.margin);
      }
    } catch (const HyperbolicityViolation& e) {
      r["hyperbolicity_violation"] = {{"matrix", ToJson(e.matrix())},
                                      {"residual", Num(e.residual())},
                                      {"message", e.what()}};
      rep.exit_code = kExitCheckFailed;
    }
  } else if (c.action == "certify") {
    const int trials = pr.Int("trials", 1000);
    pr.Finish();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const CertificationReport cr = CertifyGarding(m, trials, c.seed);
    json checks = json::array();
    for (const CertificationCheck& ch : cr.checks) {
      json j = {{"name", ch.name}, {"trials", ch.trials},
                {"failures", ch.failures}, {"worst", Num(ch.worst)}};
      if (ch.first_failure) j["counterexample"] = ToJson(*ch.first_failure);
      checks.push_back(j);
    }
    r["checks"] = checks;
    r["passed"] = cr.passed();
    if (!cr.passed()) rep.exit_code = kExitCheckFailed;
  } else if (c.action == "sigma") {
    const SymMatrix a = ReadMatrix(pr, n);
    const int k = pr.RequireInt("sigma_k");
    pr.Finish();
    if (k < 0 || k > m.degree()) throw ConfigError("sigma_k must lie in [0, degree]");
    r["sigma_k"] = k;
    r["value"] = Num(ElementarySymmetricValue(m, k, a));
  } else {
    throw ConfigError("unknown garding action '" + c.action + "'");
  }
}

// ---------------------------------------------------------------- grass

void RunGrass(const ExperimentConfig& c, ParamReader& pr, RunReport& rep) {
  const int n = ReadDim(pr);
  const PlaneFamily family = MakePlaneFamily(pr, "family", n);
  json& r = rep.results;
  r["family"] = family.name();
  r["plane_dim"] = family.plane_dim();
  std::optional<ComplexStructure> cs;
  std::optional<QuaternionStructure> qs;
  if (n % 2 == 0) cs = ComplexStructure::Standard(n / 2);
  if (n % 4 == 0) qs = QuaternionStructure::Standard(n / 4);
  if (c.action == "invariant") {
    const int count = pr.Int("count", 5);
    pr.Finish();
    if (count < 1) throw ConfigError("count must be >= 1");
    json planes = json::array();
    for (int i = 0; i < count; ++i) {
      Rng rng = MakeRng(c.seed, "grass-invariant", i);
      const Frame w = family.Sample(rng);
      json j = {{"frame", ToJson(w.basis())},
                {"violation", Num(family.Violation(w))}};
      if (w.rank() == 2 && cs) j["kahler_invariant"] = Num(KahlerAngleInvariant(w, *cs));
      if (w.rank() == 2 && qs) j["quaternionic_invariant"] = Num(QuaternionicInvariant(w, *qs));
      if (cs && 2 * w.rank() <= n) {
        const IsotropyResult iso = IsotropyCheck(w, *cs);
        j["isotropic"] = iso.isotropic;
        j["isotropy_violation"] = Num(iso.max_violation);
      }
      planes.push_back(j);
    }
    r["planes"] = planes;
  } else if (c.action == "transitivity") {
    const int budget = c.budget ? *c.budget : pr.Int("budget", 1000);
    if (c.budget) pr.Echo("budget", budget);
    const auto xs = pr.OptionalReals("x");
    const auto ys = pr.OptionalReals("y");
    pr.Finish();
    if (budget < 1) throw ConfigError("budget must be >= 1");
    auto endpoint = [&](const std::optional<std::vector<double>>& v,
                        const char* tag) {
      if (!v) {
        Rng rng = MakeRng(c.seed, tag);
        return RandomUnitVector(rng, n);
      }
      if (static_cast<int>(v->size()) != n) {
        throw ConfigError(std::string(tag) + " must have n entries");
      }
      return UnitVector::Normalized(Eigen::Map<const Vector>(v->data(), n));
    };
    const UnitVector x = endpoint(xs, "x");
    const UnitVector y = endpoint(ys, "y");
    const TransitivityReport t = TransitivityCheck(family, x, y, budget, c.seed);
    r["x"] = ToJson(x.vector());
    r["y"] = ToJson(y.vector());
    r["verdict"] = t.chain_found ? "chain-found" : "no-chain-at-budget";
    r["chain_length"] = static_cast<int>(t.chain.size());
    json chain = json::array();
    for (const Frame& w : t.chain) chain.push_back(ToJson(w.basis()));
    r["chain"] = chain;
    r["chain_intersections"] = t.chain_intersections;
    r["samples_used"] = t.samples_used;
    r["distinct_planes"] = t.distinct_planes;
    json hist = json::object();
    for (const auto& [dim, count] : t.intersection_histogram) {
      hist[std::to_string(dim)] = count;
    }
    r["intersection_histogram"] = hist;
  } else {
    throw ConfigError("unknown grass action '" + c.action + "'");
  }
}

// ---------------------------------------------------------------- flow

ScalarField ReadField(ParamReader& pr, int n, const std::string& field_key,
                      const std::string& catalog_key, double p) {
  const auto expr = pr.OptionalString(field_key);
  const auto cat = pr.OptionalString(catalog_key);
  if (expr && cat) {
    throw ConfigError("give either " + field_key + " or " + catalog_key);
  }
  if (!expr && !cat) {
    throw ConfigError("missing " + field_key + " (expression) or " +
                      catalog_key + " (catalog id)");
  }
  try {
    return expr ? FieldFromExpression(*expr, n) : CatalogField(*cat, n, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> ReadRadii(ParamReader& pr) {
  const std::string spec = pr.String("radii", "dyadic:0:10");
  if (spec.rfind("dyadic:", 0) == 0) {
    const auto colon = spec.find(':', 7);
    if (colon == std::string::npos) throw ConfigError("radii: use dyadic:j0:j1");
    const int j0 = static_cast<int>(ParseInt(spec.substr(7, colon - 7), "radii"));
    const int j1 = static_cast<int>(ParseInt(spec.substr(colon + 1), "radii"));
    if (j1 <= j0) throw ConfigError("radii: need j0 < j1");
    return FlowSchedule::Dyadic(j0, j1);
  }
  return ParseReals(spec, "radii");
}

json ToJson(const DensityReport& d) {
  json table = json::array();
  for (const QuotientEntry& q : d.table) {
    table.push_back({{"i", q.i}, {"j", q.j}, {"r", q.r}, {"s", q.s},
                     {"quotient", Num(q.quotient)}});
  }
  json viol = json::array();
  for (const MonotonicityViolation& v : d.violations) {
    viol.push_back({{"i", v.i}, {"j", v.j}, {"direction", v.direction},
                    {"increase", Num(v.increase)}, {"allowed", Num(v.allowed)}});
  }
  auto vec = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(Num(x));
    return a;
  };
  json j = {{"p", d.p},
            {"dim", d.dim},
            {"radii", vec(d.radii)},
            {"sup", vec(d.sup)},
            {"sup_half", vec(d.sup_half)},
            {"area_average", vec(d.area_average)},
            {"volume_average", vec(d.volume_average)},
            {"table", table},
            {"noise_floor", Num(d.noise_floor)},
            {"violations", viol},
            {"saturation", Num(d.saturation)},
            {"polar", d.polar}};
  j["theta"] = d.theta ? Num(*d.theta) : json("inf");
  j["theta_extrapolated"] =
      d.theta_extrapolated ? Num(*d.theta_extrapolated) : json(nullptr);
  return j;
}

CsvTable DensityTable(const DensityReport& d) {
  CsvTable t;
  t.header = {"i", "j", "r", "s", "sup_r", "sup_s", "quotient"};
  for (const QuotientEntry& q : d.table) {
    t.rows.push_back({std::to_string(q.i), std::to_string(q.j), FormatReal(q.r),
                      FormatReal(q.s), FormatReal(d.sup[q.i]),
                      FormatReal(d.sup[q.j]), FormatReal(q.quotient)});
  }
  return t;
}

void RunFlow(const ExperimentConfig& c, ParamReader& pr, RunReport& rep) {
  const int n = ReadDim(pr);
  // The catalog needs p for the radial kernels; read it first.
  const auto p_in = pr.OptionalReal("p");
  ScalarField u = ReadField(pr, n, "field", "catalog", p_in.value_or(3.0));
  double p = 0.0;
  if (p_in) {
    p = *p_in;
  } else if (c.action == "convex") {
    p = 1.0;
    pr.Echo("p", p);
  } else if (u.natural_p) {
    p = *u.natural_p;
    pr.Echo("p", p);
  } else {
    throw ConfigError("missing required key 'p'");
  }
  FlowSchedule s;
  s.p = p;
  s.radii = ReadRadii(pr);
  s.ns = pr.Int("ns", 10000);
  s.nb = pr.Int("nb", 10000);
  const std::vector<double> ann = pr.Reals("annulus", {0.5, 1.0});
  if (ann.size() != 2) throw ConfigError("annulus must be 'a,b'");
  s.annulus_a = ann[0];
  s.annulus_b = ann[1];
  s.seed = c.seed;
  try {
    s.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  json& r = rep.results;
  r["field"] = u.id;
  if (c.action == "density") {
    pr.Finish();
    const DensityReport d = Density(u, s);
    r["density"] = ToJson(d);
    rep.table = DensityTable(d);
    if (!d.violations.empty()) rep.exit_code = kExitCheckFailed;
  } else if (c.action == "tangent") {
    const ScalarField cand =
        ReadField(pr, n, "candidate", "candidate_catalog", p);
    const double tol = ResolveTol(pr, c, 1e-3);
    pr.Finish();
    const ConvergenceReport cr = TangentConvergence(u, s, cand, tol);
    json dist = json::array(), se = json::array();
    CsvTable t;
    t.header = {"radius", "distance", "stderr"};
    for (std::size_t k = 0; k < cr.radii.size(); ++k) {
      dist.push_back(Num(cr.distances[k]));
      se.push_back(Num(cr.stderrs[k]));
      t.rows.push_back({FormatReal(cr.radii[k]), FormatReal(cr.distances[k]),
                        FormatReal(cr.stderrs[k])});
    }
    r["candidate"] = cand.id;
    r["radii"] = cr.radii;
    r["distances"] = dist;
    r["stderrs"] = se;
    r["noise_floor"] = Num(cr.noise_floor);
    r["tolerance"] = cr.tolerance;
    r["converged"] = cr.converged;
    r["saturation"] = Num(cr.saturation);
    rep.table = t;
  } else if (c.action == "convex") {
    pr.Finish();
    const ConvexTangentReport cr = ConvexTangent(u, s);
    r["grid_points"] = cr.grid_points;
    r["monotonicity_violations"] = cr.monotonicity_violations;
    r["worst_increase"] = Num(cr.worst_increase);
    r["support_error"] = cr.support_error ? Num(*cr.support_error) : json(nullptr);
    r["theta_s"] = Num(cr.theta_s);
    r["homogeneity_residual"] = Num(cr.homogeneity_residual);
    r["subadditivity_violation"] = Num(cr.subadditivity_violation);
    if (cr.monotonicity_violations > 0) rep.exit_code = kExitCheckFailed;
  } else if (c.action == "restrict") {
    const std::vector<double> axes = pr.Reals("plane", {});
    pr.Finish();
    if (axes.empty()) throw ConfigError("missing required key 'plane'");
    Matrix w = Matrix::Zero(n, axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const int a = static_cast<int>(axes[i]);
      if (a != axes[i] || a < 1 || a > n) {
        throw ConfigError("plane: axes are coordinate indices 1..n");
      }
      w(a - 1, i) = 1.0;
    }
    std::optional<Frame> built;
    try {
      built.emplace(w);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("plane: ") + e.what());
    }
    const Frame& frame = *built;
    if (frame.rank() != p) {
      throw ConfigError("restrict requires p equal to the plane dimension");
    }
    const DensityReport d = PlaneRestrictionDensity(u, frame, s);
    r["density"] = ToJson(d);
    if (!d.polar) rep.table = DensityTable(d);
  } else {
    throw ConfigError("unknown flow action '" + c.action + "'");
  }
}

// ---------------------------------------------------------------- sphere

void RunSphere(const ExperimentConfig& c, ParamReader& pr, RunReport& rep) {
  const int n = ReadDim(pr);
  if (n < 2) throw ConfigError("sphere commands need n >= 2");
  const std::string g_text = pr.String("g", "-1");
  ScalarField g;
  try {
    g = FieldFromExpression(g_text, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const PointFunction gf = [g](const Vector& x) { return g.raw(x); };
  std::vector<double> sigma_def(n, 0.0);
  sigma_def[n - 1] = 1.0;
  const std::vector<double> sv = pr.Reals("sigma", sigma_def);
  if (static_cast<int>(sv.size()) != n) throw ConfigError("sigma must have n entries");
  const UnitVector sigma =
      UnitVector::Normalized(Eigen::Map<const Vector>(sv.data(), n));
  const double h = pr.Real("h", 1e-4);
  if (!(h >= 1e-6 && h <= 1e-2)) throw ConfigError("h must lie in [1e-6, 1e-2]");
  json& r = rep.results;
  r["sigma"] = ToJson(sigma.vector());
  if (c.action == "phi" || c.action == "fdcheck" || c.action == "member") {
    const double p = pr.RequireReal("p");
    if (!(p >= 1.0)) throw ConfigError("p must be >= 1");
    std::optional<Subequation> f;
    double tol = 0.0;
    if (c.action == "member") {
      f = MakeSubequation(pr, n, c.seed, c.budget);
      tol = ResolveTol(pr, c, 1e-9);
    } else if (c.action == "fdcheck") {
      tol = ResolveTol(pr, c, 1e-5);
    }
    pr.Finish();
    const SphericalJet jet = JetFromFunction(gf, sigma, h);
    r["jet"] = {{"g", Num(jet.g())},
                {"dg", ToJson(jet.dg())},
                {"hess", ToJson(jet.hess())},
                {"tangent_frame", ToJson(jet.tangent().basis())}};
    if (c.action == "phi") {
      const SymMatrix phi = AssemblePhi(jet, p);
      const PhiTrace tr = TraceOfPhi(jet, p);
      r["phi"] = ToJson(phi);
      r["phi_ambient"] = ToJson(AssemblePhiAmbient(jet, p));
      r["eigenvalues"] = ToJson(EigenvaluesSorted(phi));
      r["trace"] = Num(tr.trace);
      r["operator_value"] = Num(tr.operator_value);
    } else if (c.action == "fdcheck") {
      const FdCheckReport fd = FdCrossCheck(gf, sigma, p, h);
      r["residual"] = Num(fd.residual);
      r["constant"] = Num(fd.constant);
      r["fd_hessian"] = ToJson(fd.fd_hessian);
      r["phi_ambient"] = ToJson(fd.phi);
      r["passed"] = fd.residual <= tol;
      if (fd.residual > tol) rep.exit_code = kExitCheckFailed;
    } else {
      const MemberResult m = SphereSubeqMember(*f, jet, p, tol);
      r["family"] = f->name();
      r["member"] = m.member;
      r["margin"] = Num(m.margin);
    }
  } else if (c.action == "complex" || c.action == "quaternion") {
    LineBlockReport lb;
    if (c.action == "complex") {
      const double theta = pr.Real("theta", 0.0);
      const ComplexStructure cs = MakeComplex(pr, n);
      pr.Finish();
      lb = ComplexRadialStructureCheck(gf, theta, sigma, cs, h);
    } else {
      const QuaternionStructure qs = MakeQuaternion(n);
      pr.Finish();
      lb = QuaternionicBlockCheck(gf, sigma, qs, h);
    }
    r["line_block_norm"] = Num(lb.line_block_norm);
    r["horizontal_spectrum"] = ToJson(lb.horizontal_spectrum);
    r["min_eigenvalue"] = Num(lb.min_eigenvalue);
    r["line_constancy_defect"] = Num(lb.line_constancy_defect);
  } else {
    throw ConfigError("unknown sphere action '" + c.action + "'");
  }
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& command,
                             const std::string& action,
                             const std::string& spec_text,
                             std::optional<std::uint64_t> seed_flag,
                             std::optional<double> tol_flag,
                             std::optional<int> budget_flag) {
  ExperimentConfig c;
  c.command = command;
  c.action = action;
  c.entries = ParseSpecText(spec_text);
  std::optional<std::uint64_t> seed = seed_flag;
  const auto it = c.entries.find("seed");
  if (it != c.entries.end()) {
    const long long s = ParseInt(it->second, "seed");
    if (s < 0) throw ConfigError("seed must be nonnegative");
    if (seed && *seed != static_cast<std::uint64_t>(s)) {
      throw ConfigError("seed given twice with different values");
    }
    seed = static_cast<std::uint64_t>(s);
    c.entries.erase(it);
  }
  if (!seed) throw ConfigError("missing seed (spec key 'seed' or --seed)");
  c.seed = *seed;
  if (tol_flag && !(*tol_flag > 0.0)) throw ConfigError("--tol must be > 0");
  if (budget_flag && *budget_flag < 1) throw ConfigError("--budget must be >= 1");
  c.tol = tol_flag;
  c.budget = budget_flag;
  return c;
}

RunReport Run(const ExperimentConfig& c) {
  RunReport rep;
  rep.results = json::object();
  ParamReader pr(c.entries);
  try {
    if (c.command == "subeq") {
      RunSubeq(c, pr, rep);
    } else if (c.command == "garding") {
      RunGarding(c, pr, rep);
    } else if (c.command == "grass") {
      RunGrass(c, pr, rep);
    } else if (c.command == "flow") {
      RunFlow(c, pr, rep);
    } else if (c.command == "sphere") {
      RunSphere(c, pr, rep);
    } else {
      throw ConfigError("unknown command '" + c.command + "'");
    }
  } catch (const ConfigError& e) {
    rep.exit_code = kExitConfig;
    rep.error = e.what();
  } catch (const std::invalid_argument& e) {
    rep.exit_code = kExitConfig;
    rep.error = e.what();
  } catch (const HyperbolicityViolation& e) {
    rep.exit_code = kExitCheckFailed;
    rep.results["hyperbolicity_violation"] = {{"matrix", ToJson(e.matrix())},
                                              {"residual", Num(e.residual())},
                                              {"message", e.what()}};
  } catch (const std::domain_error& e) {
    rep.exit_code = kExitCheckFailed;
    rep.results["check_failure"] = e.what();
  }
  json cfg = pr.echo();
  cfg["command"] = c.command;
  cfg["action"] = c.action;
  cfg["seed"] = c.seed;
  rep.config = cfg;
  return rep;
}

std::string SerializeJson(const RunReport& report) {
  json doc = {{"config", report.config},
              {"results", report.results},
              {"exit_code", report.exit_code},
              {"version", {{"riesz", kVersion},
                           {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                         std::to_string(EIGEN_MAJOR_VERSION) +
                                         "." +
                                         std::to_string(EIGEN_MINOR_VERSION)}}}};
  if (!report.error.empty()) doc["error"] = report.error;
  return doc.dump(2) + "\n";
}

std::string SerializeCsv(const CsvTable& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> EmitTables(const RunReport& report,
                                    const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  const std::string stem = config.command + "-" + config.action + "-" +
                           std::to_string(config.seed);
  std::vector<std::string> paths;
  auto write = [&](const std::string& name, const std::string& body) {
    const fs::path path = fs::path(config.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    paths.push_back(path.string());
  };
  write(stem + ".json", SerializeJson(report));
  if (report.table) write(stem + ".csv", SerializeCsv(*report.table));
  return paths;
}

}  // namespace riesz
