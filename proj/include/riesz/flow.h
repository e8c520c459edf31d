#ifndef RIESZ_FLOW_H_
#define RIESZ_FLOW_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riesz/field.h"
#include "riesz/linalg.h"

namespace riesz {

struct FlowSchedule {
  double p = 2.0;
  std::vector<double> radii;  // strictly decreasing, positive
  int ns = 10000;             // sphere samples
  int nb = 10000;             // ball samples
  double annulus_a = 0.5;
  double annulus_b = 1.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on a malformed schedule.
  void Validate() const;
  // 2^{-j}, j = j_min, ..., j_max.
  static std::vector<double> Dyadic(int j_min, int j_max);
};

// Estimates of M(u, r) = sup_{|x| <= r} u from fixed low-discrepancy point
// sets (ball and sphere), improved by a deterministic pattern search started
// from the best candidates. Estimates never exceed the true supremum.
class SupEstimator {
 public:
  SupEstimator(int n, int nb, int ns, std::uint64_t seed);

  int dim() const { return n_; }
  const Matrix& ball() const { return ball_; }
  const Matrix& sphere() const { return sphere_; }
  // Uses the first `fraction` of each point set (1 = all).
  double Estimate(const PointFunction& u, double r, double fraction = 1.0) const;
  // Nested profile: value at radii[j] is the running maximum over all
  // radii[i] <= radii[j], hence nondecreasing in r by construction.
  std::vector<double> Profile(const PointFunction& u,
                              const std::vector<double>& radii,
                              double fraction = 1.0) const;

 private:
  int n_;
  Matrix ball_;
  Matrix sphere_;
};

double SupOnBall(const ScalarField& u, double r, int n_samples,
                 std::uint64_t seed);
// Supremum over the sphere of radius r (sphere samples + constrained search).
double SupOnSphere(const ScalarField& u, double r, int n_samples,
                   std::uint64_t seed);

// u_r(x) = r^{p-2} u(rx) for p != 2 and u(rx) - M(u, r) for p = 2, where
// M(u, r) is estimated with SupOnBall(u, r, n_samples, seed).
ScalarField FlowRescale(const ScalarField& u, double r, double p,
                        int n_samples = 4096, std::uint64_t seed = 0);

struct QuotientEntry {
  int i, j;  // radii indices, i < j (r_i > r_j)
  double r, s;
  double quotient;
};

struct MonotonicityViolation {
  int i, j;
  // "outer" when shrinking r_i increased the quotient, "inner" for r_j.
  std::string direction;
  double increase;
  double allowed;
};

struct DensityReport {
  double p = 0.0;
  int dim = 0;
  std::vector<double> radii;
  std::vector<double> sup;       // nested estimates of M(u, r)
  std::vector<double> sup_half;  // same from half of the samples
  std::vector<double> area_average;
  std::vector<double> volume_average;
  std::vector<QuotientEntry> table;
  double noise_floor = 0.0;  // max |sup - sup_half|
  // Quotient at the two smallest radii; empty for a polar restriction.
  std::optional<double> theta;
  // Aitken extrapolation of consecutive quotients when the last three are
  // monotone.
  std::optional<double> theta_extrapolated;
  std::vector<MonotonicityViolation> violations;
  double saturation = 0.0;  // fraction of floored samples
  bool polar = false;
};

DensityReport Density(const ScalarField& u, const FlowSchedule& schedule);

struct Averages {
  double area = 0.0, area_stderr = 0.0;
  double volume = 0.0, volume_stderr = 0.0;
  double saturation = 0.0;
};
// Throws std::domain_error when more than half of the samples are floored.
Averages AreaVolumeAverages(const ScalarField& u, double r, int n_samples,
                            std::uint64_t seed);

struct ConvergenceReport {
  std::vector<double> radii;
  std::vector<double> distances;  // L1 distance on the annulus
  std::vector<double> stderrs;
  double noise_floor = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  double saturation = 0.0;
};

// L1(a <= |x| <= b) distances between u_r and the candidate along the
// schedule. Converged when the last distance is below `tolerance` and the
// last three are nonincreasing within the noise floor.
ConvergenceReport TangentConvergence(const ScalarField& u,
                                     const FlowSchedule& schedule,
                                     const ScalarField& candidate,
                                     double tolerance);

struct HomogeneityReport {
  std::vector<double> scales;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool passed = false;
};

// p != 2: |U(tx) - t^{2-p} U(x)|; p = 2: |U(tx) - theta log t - U(x)|,
// maximized over annulus samples.
HomogeneityReport HomogeneityCheck(const ScalarField& u, double p,
                                   const std::vector<double>& scales,
                                   double tol, double theta = 1.0,
                                   int n_samples = 2000,
                                   std::uint64_t seed = 0);

// Density of t -> u(W t) on R^rank(W); the schedule's p must equal the rank.
DensityReport PlaneRestrictionDensity(const ScalarField& u, const Frame& w,
                                      const FlowSchedule& schedule);

struct PlaneSphereStats {
  double mean = 0.0, variance = 0.0, min = 0.0, max = 0.0;
};
// Statistics of u on the unit sphere of W.
PlaneSphereStats StatsOnPlaneSphere(const ScalarField& u, const Frame& w,
                                    int n_samples, std::uint64_t seed);

struct ConvexTangentReport {
  std::vector<double> radii;
  int grid_points = 0;
  int monotonicity_violations = 0;
  double worst_increase = 0.0;
  // max |U - support| on the grid, when a support function is known.
  std::optional<double> support_error;
  double theta_s = 0.0;
  double homogeneity_residual = 0.0;
  double subadditivity_violation = 0.0;
};

// Convex flow u_r(x) = (u(rx) - u(0)) / r; the limit U is extrapolated
// linearly in r from the last two radii.
ConvexTangentReport ConvexTangent(const ScalarField& u,
                                  const FlowSchedule& schedule);

}  // namespace riesz

#endif  // RIESZ_FLOW_H_
