#include "riesz/quasi_random.h"

#include <cmath>
#include <stdexcept>

#include "riesz/rng.h"

namespace riesz {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
constexpr int kMaxDim = sizeof(kPrimes) / sizeof(kPrimes[0]);

double RadicalInverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Fills `out` with n Gaussian-like coordinates from 2*ceil(n/2) uniforms.
void BoxMuller(const Vector& u, int offset, int n, Vector& out) {
  for (int k = 0; 2 * k < n; ++k) {
    const double rad = std::sqrt(-2.0 * std::log(u(offset + 2 * k)));
    const double ang = 2.0 * M_PI * u(offset + 2 * k + 1);
    out(2 * k) = rad * std::cos(ang);
    if (2 * k + 1 < n) out(2 * k + 1) = rad * std::sin(ang);
  }
}

int GaussianDims(int n) { return 2 * ((n + 1) / 2); }

}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : shift_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("HaltonSequence: unsupported dimension");
  }
  Rng rng = MakeRng(seed, "halton-shift");
  for (int d = 0; d < dim; ++d) shift_(d) = Uniform(rng);
}

Vector HaltonSequence::Point(std::uint64_t index) const {
  Vector u(dim());
  for (int d = 0; d < dim(); ++d) {
    double v = RadicalInverse(index + 1, kPrimes[d]) + shift_(d);
    v -= std::floor(v);
    if (v <= 0.0) v = 0x1.0p-53;
    u(d) = v;
  }
  return u;
}

Matrix BallSamples(int n, int count, std::uint64_t seed) {
  const int g = GaussianDims(n);
  HaltonSequence seq(g + 1, seed);
  Matrix out(n, count);
  Vector dir(n);
  for (int i = 0; i < count; ++i) {
    const Vector u = seq.Point(static_cast<std::uint64_t>(i));
    BoxMuller(u, 0, n, dir);
    const double norm = dir.norm();
    const double radius = std::pow(u(g), 1.0 / n);
    out.col(i) = norm > 0 ? Vector(dir * (radius / norm)) : Vector::Zero(n);
  }
  return out;
}

Matrix SphereSamples(int n, int count, std::uint64_t seed) {
  HaltonSequence seq(GaussianDims(n), seed);
  Matrix out(n, count);
  Vector dir(n);
  for (int i = 0; i < count; ++i) {
    BoxMuller(seq.Point(static_cast<std::uint64_t>(i)), 0, n, dir);
    double norm = dir.norm();
    if (!(norm > 0)) {
      dir = Vector::Unit(n, 0);
      norm = 1.0;
    }
    out.col(i) = dir / norm;
  }
  return out;
}

double UnitBallVolume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace riesz
