#ifndef RIESZ_QUASI_RANDOM_H_
#define RIESZ_QUASI_RANDOM_H_

#include <cstdint>

#include "riesz/linalg.h"

namespace riesz {

// Halton sequence in [0,1)^dim with a Cranley-Patterson rotation drawn from
// the seed. Point(i) never returns an exact zero coordinate.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);

  int dim() const { return static_cast<int>(shift_.size()); }
  Vector Point(std::uint64_t index) const;

 private:
  Vector shift_;
};

// Low-discrepancy points in the closed unit ball of R^n (columns), obtained
// from a Halton sequence through Box-Muller directions and the radial map
// u -> u^{1/n}. The first k columns of BallSamples(n, N, s) equal
// BallSamples(n, k, s).
Matrix BallSamples(int n, int count, std::uint64_t seed);
// Same construction without the radial coordinate: points on S^{n-1}.
Matrix SphereSamples(int n, int count, std::uint64_t seed);

double UnitBallVolume(int n);

}  // namespace riesz

#endif  // RIESZ_QUASI_RANDOM_H_
