#include "riesz/field.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riesz/expression.h"

namespace riesz {

double FloorValue(double v) {
  if (std::isnan(v)) return kMinusInfinityFloor;
  return std::max(v, kMinusInfinityFloor);
}

bool IsSaturated(double v) { return v <= 0.5 * kMinusInfinityFloor; }

double RieszKernel(double p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("RieszKernel: need t > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("RieszKernel: need p >= 1");
  if (p == 2.0) return std::log(t);
  if (p < 2.0) return std::pow(t, 2.0 - p);
  return -std::pow(t, 2.0 - p);
}

ScalarField FieldFromExpression(const std::string& text, int n) {
  const Expression e = Expression::Parse(text);
  if (e.max_coordinate() > n) {
    throw std::invalid_argument("field expression uses x" +
                                std::to_string(e.max_coordinate()) +
                                " but n = " + std::to_string(n));
  }
  ScalarField f;
  f.dim = n;
  f.id = "expr:" + text;
  f.raw = [e](const Vector& x) { return e.Evaluate(x); };
  return f;
}

namespace {

double KernelOrFloor(double p, double t) {
  if (t <= 0.0) {
    return p < 2.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return RieszKernel(p, t);
}

// |z_k| with z_k = x_k + i x_{m+k} (the standard complex structure).
double ComplexModulus(const Vector& x, int k) {
  const int m = static_cast<int>(x.size()) / 2;
  return std::hypot(x(k), x(m + k));
}

double QuaternionModulus(const Vector& x, int l) {
  return x.segment(4 * l, 4).norm();
}

Vector AffineSlopes(int n, int piece) {
  Vector a = Vector::Zero(n);
  switch (piece) {
    case 0: a(0) = 1.0; break;
    case 1: a(0) = -0.5; if (n > 1) a(1) = 1.0; break;
    case 2: a(0) = -0.2; if (n > 1) a(1) = -0.7; break;
    case 3: a(0) = 1.0; if (n > 1) a(1) = 1.0; break;
    default: a(0) = -1.0; break;
  }
  return a;
}

// Pieces 0-2 pass through the origin; 3 and 4 are inactive at 0.
constexpr double kAffineOffsets[] = {0.0, 0.0, 0.0, -0.5, -0.2};

Vector HalfspaceNormal(int n) {
  Vector a(n);
  for (int i = 0; i < n; ++i) a(i) = (i % 2 == 0 ? 1.0 : -0.5) / (1 + i);
  return a;
}

}  // namespace

std::vector<std::string> CatalogIds() {
  return {"kernel",        "kernel_plus_quadratic", "kernel_shift",
          "kernel_scaled", "log_z1",                "max_log",
          "quat_q1",       "abs_x1",                "norm_sq",
          "euclid_norm",   "max_affine",            "halfspace",
          "smooth_linear"};
}

ScalarField CatalogField(const std::string& id, int n, double p) {
  if (n < 1) throw std::invalid_argument("CatalogField: n must be >= 1");
  ScalarField f;
  f.dim = n;
  f.id = id;
  auto kernel = [p](const Vector& x) { return KernelOrFloor(p, x.norm()); };

  if (id == "kernel" || id == "kernel_plus_quadratic" ||
      id == "kernel_shift" || id == "kernel_scaled") {
    if (!(p >= 1.0)) throw std::invalid_argument("CatalogField: need p >= 1");
    f.natural_p = p;
    f.tags = {"radial", "F-subharmonic"};
    f.tangent = kernel;
    f.density = 1.0;
    if (id == "kernel") {
      f.raw = kernel;
      f.tags.insert("tangent-form");
    } else if (id == "kernel_plus_quadratic") {
      f.raw = [kernel](const Vector& x) { return kernel(x) + x.squaredNorm(); };
    } else if (id == "kernel_shift") {
      f.raw = [kernel](const Vector& x) { return kernel(x) + 1.0; };
    } else {
      f.raw = [kernel](const Vector& x) { return 2.0 * kernel(x); };
      f.tangent = f.raw;
      f.density = 2.0;
      f.tags.insert("tangent-form");
    }
    return f;
  }
  if (id == "log_z1" || id == "max_log") {
    if (n % 2 != 0) throw std::invalid_argument(id + " needs even n");
    const int m = n / 2;
    f.natural_p = 2.0;
    f.density = 1.0;
    f.tags = {"complex-psh", "tangent-form"};
    if (id == "log_z1") {
      f.raw = [](const Vector& x) {
        const double z = ComplexModulus(x, 0);
        return z > 0 ? std::log(z) : -std::numeric_limits<double>::infinity();
      };
    } else {
      f.raw = [m](const Vector& x) {
        double best = 0.0;
        for (int k = 0; k < m; ++k) best = std::max(best, ComplexModulus(x, k));
        return best > 0 ? std::log(best)
                        : -std::numeric_limits<double>::infinity();
      };
    }
    f.tangent = f.raw;
    return f;
  }
  if (id == "quat_q1") {
    if (n % 4 != 0) throw std::invalid_argument("quat_q1 needs n = 4m");
    f.natural_p = 4.0;
    f.density = 1.0;
    f.tags = {"quaternionic-psh", "tangent-form"};
    f.raw = [](const Vector& x) {
      const double q = QuaternionModulus(x, 0);
      return q > 0 ? -1.0 / (q * q) : -std::numeric_limits<double>::infinity();
    };
    f.tangent = f.raw;
    return f;
  }

  f.natural_p = 1.0;
  f.tags = {"convex"};
  if (id == "abs_x1") {
    f.raw = [](const Vector& x) { return std::abs(x(0)); };
    f.support = f.raw;
  } else if (id == "norm_sq") {
    f.raw = [](const Vector& x) { return x.squaredNorm(); };
    f.support = [](const Vector&) { return 0.0; };
  } else if (id == "euclid_norm") {
    f.raw = [](const Vector& x) { return x.norm(); };
    f.support = f.raw;
  } else if (id == "max_affine") {
    f.raw = [n](const Vector& x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 5; ++i)
        best = std::max(best, AffineSlopes(n, i).dot(x) + kAffineOffsets[i]);
      return best;
    };
    f.support = [n](const Vector& x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 3; ++i) best = std::max(best, AffineSlopes(n, i).dot(x));
      return best;
    };
  } else if (id == "halfspace") {
    const Vector a = HalfspaceNormal(n);
    f.raw = [a](const Vector& x) { return std::max(a.dot(x), 0.0); };
    f.support = f.raw;
  } else if (id == "smooth_linear") {
    f.raw = [](const Vector& x) { return x.squaredNorm() + x(0); };
    f.support = [](const Vector& x) { return x(0); };
  } else {
    throw std::invalid_argument("CatalogField: unknown id '" + id + "'");
  }
  f.tangent = f.support;
  return f;
}

}  // namespace riesz
