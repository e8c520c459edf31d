#include "riesz/flow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "riesz/quasi_random.h"
#include "riesz/rng.h"

namespace riesz {

namespace {

constexpr int kRefineStarts = 4;
constexpr int kMaxSearchEvaluations = 4000;
constexpr double kSearchInitialStep = 0.1;
constexpr double kSearchFinalStep = 1e-9;
// Resolution of sup estimates that the half-sample comparison cannot see
// (pattern-search step), expressed relative to the annulus volume.
constexpr double kDistanceResolution = 1e-9;
constexpr double kMonotoneSlack = 1e-9;

int Count(int total, double fraction) {
  const int k = static_cast<int>(std::lround(total * fraction));
  return std::clamp(k, 1, total);
}

Vector ProjectToBall(Vector y, double r) {
  const double norm = y.norm();
  if (norm > r) y *= r / norm;
  return y;
}

// Coordinate pattern search maximizing u on the closed ball of radius r, or
// on the sphere of radius r when `on_sphere` is set. Deterministic.
double PatternSearch(const PointFunction& u, Vector x, double fx, double r,
                     bool on_sphere) {
  const int n = static_cast<int>(x.size());
  if (on_sphere) {
    const double norm = x.norm();
    if (!(norm > 0.0)) return fx;
    x *= r / norm;
    fx = u(x);
  }
  double step = kSearchInitialStep * r;
  int evaluations = 0;
  while (step > kSearchFinalStep * r && evaluations < kMaxSearchEvaluations) {
    bool improved = false;
    for (int i = 0; i < n && evaluations < kMaxSearchEvaluations; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector y = x;
        y(i) += sign * step;
        if (on_sphere) {
          const double norm = y.norm();
          if (!(norm > 0.0)) continue;
          y *= r / norm;
        } else {
          y = ProjectToBall(std::move(y), r);
        }
        const double fy = u(y);
        ++evaluations;
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return fx;
}

struct Candidate {
  double value;
  Vector point;
};

// Keeps the best k candidates, ties broken by insertion order.
void Offer(std::vector<Candidate>& best, double value, const Vector& point,
           int k) {
  if (static_cast<int>(best.size()) < k) {
    best.push_back({value, point});
  } else if (value > best.back().value) {
    best.back() = {value, point};
  } else {
    return;
  }
  std::stable_sort(best.begin(), best.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.value > b.value;
                   });
}

double MaxOverSamples(const PointFunction& u, const Matrix& ball, int kb,
                      const Matrix& sphere, int ks, double r, bool use_center) {
  const int n = static_cast<int>(ball.rows() > 0 ? ball.rows() : sphere.rows());
  std::vector<Candidate> best;
  if (use_center) {
    const Vector zero = Vector::Zero(n);
    Offer(best, u(zero), zero, kRefineStarts);
  }
  for (int i = 0; i < kb; ++i) {
    const Vector x = r * ball.col(i);
    Offer(best, u(x), x, kRefineStarts);
  }
  for (int i = 0; i < ks; ++i) {
    const Vector x = r * sphere.col(i);
    Offer(best, u(x), x, kRefineStarts);
  }
  if (best.empty()) {
    throw std::invalid_argument("sup estimate: no sample points");
  }
  double result = best.front().value;
  for (const Candidate& c : best) {
    if (use_center) {
      result = std::max(result, PatternSearch(u, c.point, c.value, r, false));
    }
    result = std::max(result, PatternSearch(u, c.point, c.value, r, true));
  }
  if (IsSaturated(result)) {
    throw std::domain_error("sup estimate: all samples are -infinity");
  }
  return result;
}

double Kernel(double p, double t) { return RieszKernel(p, t); }

struct SampleAverages {
  Averages avg;
  int saturated = 0;
  int total = 0;
};

SampleAverages ComputeAverages(const PointFunction& u, const Matrix& sphere,
                               const Matrix& ball, double r) {
  auto mean_and_stderr = [&](const Matrix& pts, int& saturated) {
    const int count = static_cast<int>(pts.cols());
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < count; ++i) {
      const double v = FloorValue(u(r * pts.col(i)));
      if (IsSaturated(v)) ++saturated;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / count;
    const double var =
        count > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1))
                  : 0.0;
    return std::make_pair(mean, std::sqrt(var / count));
  };
  SampleAverages out;
  auto [area, area_se] = mean_and_stderr(sphere, out.saturated);
  auto [vol, vol_se] = mean_and_stderr(ball, out.saturated);
  out.avg.area = area;
  out.avg.area_stderr = area_se;
  out.avg.volume = vol;
  out.avg.volume_stderr = vol_se;
  out.total = static_cast<int>(sphere.cols() + ball.cols());
  out.avg.saturation = static_cast<double>(out.saturated) / out.total;
  return out;
}

std::optional<double> Aitken(double q1, double q2, double q3) {
  const double d1 = q2 - q1;
  const double d2 = q3 - q2;
  const bool monotone = (d1 >= 0 && d2 >= 0) || (d1 <= 0 && d2 <= 0);
  if (!monotone) return std::nullopt;
  const double denom = d2 - d1;
  if (std::abs(denom) <= 1e-15 * (1.0 + std::abs(q3)) ||
      std::abs(d2) >= std::abs(d1)) {
    return q3;
  }
  return q3 - d2 * d2 / denom;
}

ScalarField Restrict(const ScalarField& u, const Frame& w) {
  if (w.dim() != u.dim) {
    throw std::invalid_argument("plane restriction: frame dimension mismatch");
  }
  ScalarField v;
  v.dim = w.rank();
  v.id = u.id + "|W";
  const Matrix basis = w.basis();
  PointFunction raw = u.raw;
  v.raw = [raw, basis](const Vector& t) { return raw(basis * t); };
  return v;
}

}  // namespace

void FlowSchedule::Validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("flow schedule: p must be >= 1");
  }
  if (radii.empty()) {
    throw std::invalid_argument("flow schedule: radii must be nonempty");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
      throw std::invalid_argument("flow schedule: radii must be positive");
    }
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw std::invalid_argument(
          "flow schedule: radii must be strictly decreasing");
    }
  }
  if (ns < 1 || nb < 1) {
    throw std::invalid_argument("flow schedule: sample counts must be >= 1");
  }
  if (!(annulus_a > 0.0) || !(annulus_a < annulus_b)) {
    throw std::invalid_argument("flow schedule: need 0 < a < b");
  }
}

std::vector<double> FlowSchedule::Dyadic(int j_min, int j_max) {
  if (j_max < j_min) {
    throw std::invalid_argument("FlowSchedule::Dyadic: empty range");
  }
  std::vector<double> r;
  for (int j = j_min; j <= j_max; ++j) r.push_back(std::ldexp(1.0, -j));
  return r;
}

SupEstimator::SupEstimator(int n, int nb, int ns, std::uint64_t seed)
    : n_(n),
      ball_(BallSamples(n, nb, SubSeed(seed, "sup-ball"))),
      sphere_(SphereSamples(n, ns, SubSeed(seed, "sup-sphere"))) {}

double SupEstimator::Estimate(const PointFunction& u, double r,
                              double fraction) const {
  if (!(r > 0.0)) throw std::invalid_argument("sup estimate: r must be > 0");
  return MaxOverSamples(u, ball_, Count(static_cast<int>(ball_.cols()), fraction),
                        sphere_, Count(static_cast<int>(sphere_.cols()), fraction),
                        r, true);
}

std::vector<double> SupEstimator::Profile(const PointFunction& u,
                                          const std::vector<double>& radii,
                                          double fraction) const {
  std::vector<std::size_t> order(radii.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return radii[a] < radii[b];
  });
  std::vector<double> out(radii.size());
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    running = std::max(running, Estimate(u, radii[idx], fraction));
    out[idx] = running;
  }
  return out;
}

double SupOnBall(const ScalarField& u, double r, int n_samples,
                 std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("SupOnBall: N must be >= 1");
  const SupEstimator est(u.dim, n_samples, n_samples, seed);
  return est.Estimate(u, r);
}

double SupOnSphere(const ScalarField& u, double r, int n_samples,
                   std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("SupOnSphere: N must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("SupOnSphere: r must be > 0");
  const Matrix sphere =
      SphereSamples(u.dim, n_samples, SubSeed(seed, "sup-sphere"));
  return MaxOverSamples(u, Matrix(u.dim, 0), 0, sphere, n_samples, r, false);
}

ScalarField FlowRescale(const ScalarField& u, double r, double p,
                        int n_samples, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("FlowRescale: r must be > 0");
  ScalarField v = u;
  PointFunction raw = u.raw;
  if (p == 2.0) {
    const double m = SupOnBall(u, r, n_samples, seed);
    v.raw = [raw, r, m](const Vector& x) { return raw(r * x) - m; };
  } else {
    const double scale = std::pow(r, p - 2.0);
    v.raw = [raw, r, scale](const Vector& x) { return scale * raw(r * x); };
  }
  v.support = nullptr;
  return v;
}

DensityReport Density(const ScalarField& u, const FlowSchedule& schedule) {
  schedule.Validate();
  const SupEstimator est(u.dim, schedule.nb, schedule.ns, schedule.seed);
  const PointFunction f = [&u](const Vector& x) { return u(x); };
  const auto& radii = schedule.radii;
  const int count = static_cast<int>(radii.size());

  DensityReport rep;
  rep.p = schedule.p;
  rep.dim = u.dim;
  rep.radii = radii;
  rep.sup = est.Profile(f, radii, 1.0);
  rep.sup_half = est.Profile(f, radii, 0.5);
  for (int i = 0; i < count; ++i) {
    rep.noise_floor =
        std::max(rep.noise_floor, std::abs(rep.sup[i] - rep.sup_half[i]));
    const SampleAverages avg =
        ComputeAverages(f, est.sphere(), est.ball(), radii[i]);
    rep.area_average.push_back(avg.avg.area);
    rep.volume_average.push_back(avg.avg.volume);
    rep.saturation = std::max(rep.saturation, avg.avg.saturation);
  }

  std::vector<std::vector<double>> q(count, std::vector<double>(count, 0.0));
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const double dk = Kernel(schedule.p, radii[i]) - Kernel(schedule.p, radii[j]);
      if (!(std::abs(dk) >= 1e-14)) {
        throw std::domain_error("density: degenerate kernel difference");
      }
      q[i][j] = (rep.sup[i] - rep.sup[j]) / dk;
      rep.table.push_back({i, j, radii[i], radii[j], q[i][j]});
    }
  }
  auto allowed = [&](int i, int j) {
    const double dk =
        std::abs(Kernel(schedule.p, radii[i]) - Kernel(schedule.p, radii[j]));
    return 3.0 * 2.0 * rep.noise_floor / dk +
           kMonotoneSlack * (1.0 + std::abs(q[i][j]));
  };
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      // Shrinking either radius must not increase the quotient.
      if (i + 1 < j) {
        const double inc = q[i + 1][j] - q[i][j];
        const double tol = std::max(allowed(i, j), allowed(i + 1, j));
        if (inc > tol) rep.violations.push_back({i, j, "outer", inc, tol});
      }
      if (j + 1 < count) {
        const double inc = q[i][j + 1] - q[i][j];
        const double tol = std::max(allowed(i, j), allowed(i, j + 1));
        if (inc > tol) rep.violations.push_back({i, j, "inner", inc, tol});
      }
    }
  }
  if (count >= 2) rep.theta = q[count - 2][count - 1];
  if (count >= 4) {
    rep.theta_extrapolated = Aitken(q[count - 4][count - 3],
                                    q[count - 3][count - 2],
                                    q[count - 2][count - 1]);
  }
  return rep;
}

Averages AreaVolumeAverages(const ScalarField& u, double r, int n_samples,
                            std::uint64_t seed) {
  if (n_samples < 1) {
    throw std::invalid_argument("AreaVolumeAverages: N must be >= 1");
  }
  if (!(r > 0.0)) throw std::invalid_argument("AreaVolumeAverages: r <= 0");
  const Matrix sphere = SphereSamples(u.dim, n_samples, SubSeed(seed, "area"));
  const Matrix ball = BallSamples(u.dim, n_samples, SubSeed(seed, "volume"));
  const PointFunction f = [&u](const Vector& x) { return u(x); };
  const SampleAverages out = ComputeAverages(f, sphere, ball, r);
  if (out.avg.saturation > 0.5) {
    throw std::domain_error("AreaVolumeAverages: -infinity saturation above 50%");
  }
  return out.avg;
}

ConvergenceReport TangentConvergence(const ScalarField& u,
                                     const FlowSchedule& schedule,
                                     const ScalarField& candidate,
                                     double tolerance) {
  schedule.Validate();
  if (candidate.dim != u.dim) {
    throw std::invalid_argument("TangentConvergence: dimension mismatch");
  }
  const int n = u.dim;
  const auto& radii = schedule.radii;
  const int count = static_cast<int>(radii.size());
  const double p = schedule.p;
  const double a = schedule.annulus_a, b = schedule.annulus_b;

  std::vector<double> sup(count, 0.0), sup_half(count, 0.0);
  if (p == 2.0) {
    const SupEstimator est(n, schedule.nb, schedule.ns, schedule.seed);
    const PointFunction f = [&u](const Vector& x) { return u(x); };
    sup = est.Profile(f, radii, 1.0);
    sup_half = est.Profile(f, radii, 0.5);
  }

  const Matrix pts =
      b * BallSamples(n, schedule.nb, SubSeed(schedule.seed, "annulus"));
  const int total = static_cast<int>(pts.cols());
  const int half = std::max(1, total / 2);
  const double vol_b = UnitBallVolume(n) * std::pow(b, n);
  const double vol_annulus = UnitBallVolume(n) * (std::pow(b, n) - std::pow(a, n));

  ConvergenceReport rep;
  rep.radii = radii;
  rep.tolerance = tolerance;
  int saturated = 0, evaluated = 0;
  for (int k = 0; k < count; ++k) {
    const double r = radii[k];
    const double scale = p == 2.0 ? 1.0 : std::pow(r, p - 2.0);
    double sum = 0.0, sum_sq = 0.0, sum_half = 0.0;
    for (int i = 0; i < total; ++i) {
      const Vector x = pts.col(i);
      const double norm = x.norm();
      double d = 0.0;
      if (norm >= a) {
        const double raw = u(r * x);
        if (IsSaturated(raw)) ++saturated;
        ++evaluated;
        const double ur = p == 2.0 ? raw - sup[k] : scale * raw;
        d = std::abs(ur - candidate(x));
      }
      sum += d;
      sum_sq += d * d;
      if (i < half) sum_half += d;
    }
    const double mean = sum / total;
    const double var =
        total > 1 ? std::max(0.0, (sum_sq - total * mean * mean) / (total - 1))
                  : 0.0;
    const double dist = vol_b * mean;
    const double dist_half = vol_b * sum_half / half;
    rep.distances.push_back(dist);
    rep.stderrs.push_back(vol_b * std::sqrt(var / total));
    double noise = std::abs(dist - dist_half);
    if (p == 2.0) noise = std::max(noise, vol_annulus * std::abs(sup[k] - sup_half[k]));
    rep.noise_floor = std::max(rep.noise_floor, noise);
  }
  rep.noise_floor += kDistanceResolution * vol_annulus;
  rep.saturation =
      evaluated > 0 ? static_cast<double>(saturated) / evaluated : 0.0;
  if (rep.saturation > 0.5) {
    throw std::domain_error("TangentConvergence: -infinity saturation above 50%");
  }
  const auto& d = rep.distances;
  bool trend = true;
  for (int k = std::max(1, count - 2); k < count; ++k) {
    if (d[k] > d[k - 1] + rep.noise_floor) trend = false;
  }
  rep.converged = !d.empty() && d.back() < tolerance && trend;
  return rep;
}

HomogeneityReport HomogeneityCheck(const ScalarField& u, double p,
                                   const std::vector<double>& scales,
                                   double tol, double theta, int n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("HomogeneityCheck: N < 1");
  const Matrix pts = BallSamples(u.dim, n_samples, SubSeed(seed, "homogeneity"));
  HomogeneityReport rep;
  rep.scales = scales;
  for (double tau : scales) {
    if (!(tau > 0.0)) {
      throw std::invalid_argument("HomogeneityCheck: scales must be positive");
    }
    double worst = 0.0;
    for (int i = 0; i < pts.cols(); ++i) {
      const Vector x = pts.col(i);
      if (x.norm() < 0.5) continue;
      const double ux = u(x);
      const double utx = u(tau * x);
      if (IsSaturated(ux) || IsSaturated(utx)) continue;
      const double expected =
          p == 2.0 ? theta * std::log(tau) + ux : std::pow(tau, 2.0 - p) * ux;
      worst = std::max(worst, std::abs(utx - expected));
    }
    rep.residuals.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
  }
  rep.passed = rep.max_residual <= tol;
  return rep;
}

DensityReport PlaneRestrictionDensity(const ScalarField& u, const Frame& w,
                                      const FlowSchedule& schedule) {
  schedule.Validate();
  if (static_cast<double>(w.rank()) != schedule.p) {
    throw std::invalid_argument(
        "PlaneRestrictionDensity: schedule p must equal the plane rank");
  }
  const ScalarField v = Restrict(u, w);
  const Matrix pts =
      BallSamples(v.dim, schedule.nb, SubSeed(schedule.seed, "polar-check"));
  int saturated = 0;
  for (int i = 0; i < pts.cols(); ++i) {
    if (IsSaturated(v(schedule.radii.front() * pts.col(i)))) ++saturated;
  }
  const double saturation = static_cast<double>(saturated) / pts.cols();
  if (saturation > 0.5) {
    DensityReport rep;
    rep.p = schedule.p;
    rep.dim = v.dim;
    rep.radii = schedule.radii;
    rep.saturation = saturation;
    rep.polar = true;
    return rep;
  }
  DensityReport rep = Density(v, schedule);
  rep.saturation = std::max(rep.saturation, saturation);
  return rep;
}

PlaneSphereStats StatsOnPlaneSphere(const ScalarField& u, const Frame& w,
                                    int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("StatsOnPlaneSphere: N < 1");
  const ScalarField v = Restrict(u, w);
  const Matrix pts = SphereSamples(v.dim, n_samples, SubSeed(seed, "plane-sphere"));
  PlaneSphereStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  std::vector<double> vals;
  vals.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double x = v(pts.col(i));
    vals.push_back(x);
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  double sum = 0.0;
  for (double x : vals) sum += x;
  s.mean = sum / n_samples;
  double ss = 0.0;
  for (double x : vals) ss += (x - s.mean) * (x - s.mean);
  s.variance = ss / n_samples;
  return s;
}

ConvexTangentReport ConvexTangent(const ScalarField& u,
                                  const FlowSchedule& schedule) {
  schedule.Validate();
  if (schedule.p != 1.0) {
    throw std::invalid_argument("ConvexTangent: the convex flow needs p = 1");
  }
  if (schedule.radii.size() < 2) {
    throw std::invalid_argument("ConvexTangent: need at least two radii");
  }
  const int n = u.dim;
  const auto& radii = schedule.radii;
  const int count = static_cast<int>(radii.size());
  const double u0 = u(Vector::Zero(n));
  if (IsSaturated(u0)) {
    throw std::domain_error("ConvexTangent: u(0) is -infinity");
  }
  auto flow = [&](double r, const Vector& x) { return (u(r * x) - u0) / r; };
  const double r1 = radii[count - 2], r2 = radii[count - 1];
  auto tangent = [&](const Vector& x) {
    return (r1 * flow(r2, x) - r2 * flow(r1, x)) / (r1 - r2);
  };

  const Matrix ball =
      BallSamples(n, schedule.nb, SubSeed(schedule.seed, "convex-grid"));
  const Matrix sphere =
      SphereSamples(n, schedule.ns, SubSeed(schedule.seed, "convex-sphere"));
  Matrix grid(n, ball.cols() + sphere.cols());
  grid << ball, sphere;

  ConvexTangentReport rep;
  rep.radii = radii;
  rep.grid_points = static_cast<int>(grid.cols());
  double support_err = 0.0;
  for (int i = 0; i < grid.cols(); ++i) {
    const Vector x = grid.col(i);
    double prev = flow(radii[0], x);
    for (int k = 1; k < count; ++k) {
      const double cur = flow(radii[k], x);
      const double inc = cur - prev;
      if (inc > 1e-9 * (1.0 + std::abs(prev))) {
        ++rep.monotonicity_violations;
        rep.worst_increase = std::max(rep.worst_increase, inc);
      }
      prev = cur;
    }
    const double ux = tangent(x);
    if (u.support) support_err = std::max(support_err, std::abs(ux - u.support(x)));
    for (double t : {0.5, 2.0}) {
      rep.homogeneity_residual = std::max(
          rep.homogeneity_residual, std::abs(tangent(t * x) - t * ux));
    }
    if (i + 1 < grid.cols()) {
      const Vector y = grid.col(i + 1);
      rep.subadditivity_violation =
          std::max(rep.subadditivity_violation,
                   tangent(x + y) - ux - tangent(y));
    }
  }
  if (u.support) rep.support_error = support_err;
  double sum = 0.0;
  for (int i = 0; i < sphere.cols(); ++i) {
    const Vector s = sphere.col(i);
    sum += 0.5 * (tangent(s) + tangent(-s));
  }
  const double theta = sum / sphere.cols();
  rep.theta_s = theta <= 1e-12 ? 0.0 : theta;
  return rep;
}

}  // namespace riesz
