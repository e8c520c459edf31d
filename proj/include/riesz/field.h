#ifndef RIESZ_FIELD_H_
#define RIESZ_FIELD_H_

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riesz/linalg.h"

namespace riesz {

// Values of -infinity (and NaN) are replaced by this floor.
inline constexpr double kMinusInfinityFloor = -1e12;

double FloorValue(double v);
bool IsSaturated(double v);

using PointFunction = std::function<double(const Vector&)>;

// An upper semicontinuous function near 0 in R^n with optional metadata.
struct ScalarField {
  int dim = 0;
  std::string id;
  PointFunction raw;
  // Flow parameter the field is naturally analysed with.
  std::optional<double> natural_p;
  std::optional<double> density;
  // Known tangent at 0 (for the natural flow).
  PointFunction tangent;
  // Support function of the subdifferential at 0 (convex fields).
  PointFunction support;
  std::set<std::string> tags;

  double operator()(const Vector& x) const { return FloorValue(raw(x)); }
  bool has_tag(const std::string& t) const { return tags.count(t) > 0; }
};

// Riesz kernel: t^{2-p} for p < 2, log t for p = 2, -t^{2-p} for p > 2.
double RieszKernel(double p, double t);

ScalarField FieldFromExpression(const std::string& text, int n);

// Built-in fields. `p` is used by the radial-kernel entries and ignored
// elsewhere. Throws std::invalid_argument for unknown ids or incompatible
// dimensions.
ScalarField CatalogField(const std::string& id, int n, double p = 3.0);
std::vector<std::string> CatalogIds();

}  // namespace riesz

#endif  // RIESZ_FIELD_H_
