#include "riesz/rng.h"

#include <Eigen/QR>

namespace riesz {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t SubSeed(std::uint64_t seed, std::string_view tag,
                      std::uint64_t index) {
  // FNV-1a over the tag, then mixed with the seed and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(seed ^ SplitMix64(h)) + index);
}

Rng MakeRng(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return Rng(SubSeed(seed, tag, index));
}

double Uniform(Rng& rng, double lo, double hi) {
  // 53 random bits; avoids implementation-defined distribution algorithms.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Gaussian(Rng& rng) {
  // Box-Muller with an explicit formula so that streams are portable.
  double u1 = Uniform(rng);
  while (u1 <= 0.0) u1 = Uniform(rng);
  const double u2 = Uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vector GaussianVector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Gaussian(rng);
  return v;
}

Matrix GaussianMatrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Gaussian(rng);
  return m;
}

UnitVector RandomUnitVector(Rng& rng, int n) {
  Vector v = GaussianVector(rng, n);
  while (v.norm() < 1e-8) v = GaussianVector(rng, n);
  return UnitVector::Normalized(v);
}

SymMatrix RandomSymmetric(Rng& rng, int n) {
  const Matrix g = GaussianMatrix(rng, n, n);
  return SymMatrix(0.5 * (g + g.transpose()));
}

SymMatrix RandomPsd(Rng& rng, int n, int k) {
  const Matrix g = GaussianMatrix(rng, n, k);
  return SymMatrix(g * g.transpose());
}

Matrix RandomOrthogonal(Rng& rng, int n) {
  const Matrix g = GaussianMatrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

}  // namespace riesz
