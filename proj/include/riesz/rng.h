#ifndef RIESZ_RNG_H_
#define RIESZ_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "riesz/linalg.h"

namespace riesz {

using Rng = std::mt19937_64;

std::uint64_t SplitMix64(std::uint64_t x);

// Hierarchical sub-seed derived from (seed, tag, index). Results that are
// indexed by `index` do not depend on how the work is partitioned.
std::uint64_t SubSeed(std::uint64_t seed, std::string_view tag,
                      std::uint64_t index = 0);

Rng MakeRng(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

double Uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
double Gaussian(Rng& rng);
Vector GaussianVector(Rng& rng, int n);
Matrix GaussianMatrix(Rng& rng, int rows, int cols);
UnitVector RandomUnitVector(Rng& rng, int n);
// GOE-type sample: (G + G^T) / 2 with standard normal G.
SymMatrix RandomSymmetric(Rng& rng, int n);
// G G^T for an n x k Gaussian G.
SymMatrix RandomPsd(Rng& rng, int n, int k);
// Haar-distributed orthogonal matrix.
Matrix RandomOrthogonal(Rng& rng, int n);

}  // namespace riesz

#endif  // RIESZ_RNG_H_
