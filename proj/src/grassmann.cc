#include "riesz/grassmann.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace riesz {

namespace {

constexpr double kMemberTol = 1e-8;

// Incremental Gram-Schmidt (with one reorthogonalization pass).
class BasisBuilder {
 public:
  explicit BasisBuilder(int n) : n_(n), cols_(n, 0) {}

  bool Add(const Vector& v, double tol = 1e-9) {
    const double scale = v.norm();
    if (!(scale > 0)) return false;
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass) w -= cols_ * (cols_.transpose() * w);
    const double norm = w.norm();
    if (norm <= tol * scale) return false;
    cols_.conservativeResize(n_, cols_.cols() + 1);
    cols_.col(cols_.cols() - 1) = w / norm;
    return true;
  }

  int size() const { return static_cast<int>(cols_.cols()); }
  const Matrix& matrix() const { return cols_; }

 private:
  int n_;
  Matrix cols_;
};

void RequireOrthonormalColumns(const Matrix& v) {
  if (v.cols() == 0) return;
  const Matrix gram = v.transpose() * v;
  const int q = static_cast<int>(v.cols());
  if ((gram - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("PlaneFamily::Through: vectors not orthonormal");
  }
}

Vector RandomUnitOrthogonalTo(Rng& rng, const Matrix& span, int n) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector v = GaussianVector(rng, n);
    for (int pass = 0; pass < 2; ++pass) v -= span * (span.transpose() * v);
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  throw std::invalid_argument("no room for an orthogonal direction");
}

double ProjectorDistance(const Frame& a, const Frame& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) {
    return std::numeric_limits<double>::infinity();
  }
  return (a.basis() * a.basis().transpose() -
          b.basis() * b.basis().transpose())
      .cwiseAbs()
      .maxCoeff();
}

// Orthonormal basis of the quaternion line H x (x unit).
Matrix QuaternionLine(const Vector& x, const QuaternionStructure& s) {
  Matrix h(x.size(), 4);
  h << x, s.i() * x, s.j() * x, s.k() * x;
  return h;
}

Matrix CayleyOrthogonal(const Matrix& skew) {
  const int n = static_cast<int>(skew.rows());
  const Matrix id = Matrix::Identity(n, n);
  return (id - skew).partialPivLu().solve(id + skew);
}

Matrix RandomSkew(Rng& rng, int n) {
  const Matrix g = GaussianMatrix(rng, n, n);
  return 0.5 * (g - g.transpose());
}

}  // namespace

PlaneFamily PlaneFamily::FullReal(int n, int p) {
  if (n < 1 || p < 1 || p > n) {
    throw std::invalid_argument("FullReal: need 1 <= p <= n");
  }
  return PlaneFamily(FamilyKind::kFullReal, n, p, 0.0);
}

PlaneFamily PlaneFamily::ComplexPlanes(int k, const ComplexStructure& s) {
  if (k < 1 || k > s.complex_dim()) {
    throw std::invalid_argument("ComplexPlanes: need 1 <= k <= m");
  }
  PlaneFamily f(FamilyKind::kComplexPlanes, s.dim(), 2 * k, k);
  f.complex_ = s;
  return f;
}

PlaneFamily PlaneFamily::QuaternionicPlanes(int k,
                                            const QuaternionStructure& s) {
  if (k < 1 || k > s.quaternionic_dim()) {
    throw std::invalid_argument("QuaternionicPlanes: need 1 <= k <= m");
  }
  PlaneFamily f(FamilyKind::kQuaternionicPlanes, s.dim(), 4 * k, k);
  f.quaternion_ = s;
  return f;
}

PlaneFamily PlaneFamily::Lagrangian(const ComplexStructure& s) {
  PlaneFamily f(FamilyKind::kLagrangian, s.dim(), s.complex_dim(), 0.0);
  f.complex_ = s;
  return f;
}

PlaneFamily PlaneFamily::Isotropic(int p, const ComplexStructure& s) {
  if (p < 1 || p > s.complex_dim()) {
    throw std::invalid_argument("Isotropic: need 1 <= p <= m");
  }
  PlaneFamily f(FamilyKind::kIsotropic, s.dim(), p, p);
  f.complex_ = s;
  return f;
}

PlaneFamily PlaneFamily::KahlerOrbit(double cos_theta,
                                     const ComplexStructure& s) {
  if (!(cos_theta >= 0.0 && cos_theta <= 1.0)) {
    throw std::invalid_argument("KahlerOrbit: cos(theta) must lie in [0,1]");
  }
  if (cos_theta < 1.0 && s.complex_dim() < 2) {
    throw std::invalid_argument("KahlerOrbit: need m >= 2 unless cos = 1");
  }
  PlaneFamily f(FamilyKind::kKahlerOrbit, s.dim(), 2, cos_theta);
  f.complex_ = s;
  return f;
}

PlaneFamily PlaneFamily::QuatOrbit(double invariant,
                                   const QuaternionStructure& s) {
  if (!(invariant >= 0.0 && invariant <= 1.0)) {
    throw std::invalid_argument("QuatOrbit: invariant must lie in [0,1]");
  }
  if (invariant > 0.0 && s.quaternionic_dim() < 2) {
    throw std::invalid_argument("QuatOrbit: need m >= 2 for invariant > 0");
  }
  PlaneFamily f(FamilyKind::kQuatOrbit, s.dim(), 2, invariant);
  f.quaternion_ = s;
  return f;
}

PlaneFamily PlaneFamily::Explicit(std::vector<Frame> frames) {
  if (frames.empty()) {
    throw std::invalid_argument("Explicit: empty plane list");
  }
  const int n = frames.front().dim(), p = frames.front().rank();
  for (const Frame& f : frames) {
    if (f.dim() != n || f.rank() != p) {
      throw std::invalid_argument("Explicit: planes of mixed dimensions");
    }
  }
  PlaneFamily f(FamilyKind::kExplicit, n, p, 0.0);
  f.frames_ = std::move(frames);
  return f;
}

std::string PlaneFamily::name() const {
  switch (kind_) {
    case FamilyKind::kFullReal: return "full_real";
    case FamilyKind::kComplexPlanes: return "complex_planes";
    case FamilyKind::kQuaternionicPlanes: return "quaternionic_planes";
    case FamilyKind::kLagrangian: return "lagrangian";
    case FamilyKind::kIsotropic: return "isotropic";
    case FamilyKind::kKahlerOrbit: return "kahler_orbit";
    case FamilyKind::kQuatOrbit: return "quat_orbit";
    case FamilyKind::kExplicit: return "explicit";
  }
  return "unknown";
}

double PlaneFamily::Violation(const Frame& w) const {
  if (w.dim() != n_ || w.rank() != p_) {
    return std::numeric_limits<double>::infinity();
  }
  const Matrix& b = w.basis();
  auto closure = [&](const Matrix& op) {
    const Matrix image = op * b;
    return (image - b * (b.transpose() * image)).colwise().norm().maxCoeff();
  };
  switch (kind_) {
    case FamilyKind::kFullReal:
      return 0.0;
    case FamilyKind::kComplexPlanes:
      return closure(complex_->j());
    case FamilyKind::kQuaternionicPlanes:
      return std::max({closure(quaternion_->i()), closure(quaternion_->j()),
                       closure(quaternion_->k())});
    case FamilyKind::kLagrangian:
    case FamilyKind::kIsotropic:
      return IsotropyCheck(w, *complex_).max_violation;
    case FamilyKind::kKahlerOrbit:
      return std::abs(KahlerAngleInvariant(w, *complex_) - param_);
    case FamilyKind::kQuatOrbit:
      return std::abs(QuaternionicInvariant(w, *quaternion_) - param_);
    case FamilyKind::kExplicit: {
      double best = std::numeric_limits<double>::infinity();
      for (const Frame& f : frames_) best = std::min(best, ProjectorDistance(f, w));
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

Frame PlaneFamily::Sample(Rng& rng) const {
  return Through(Matrix(n_, 0), rng);
}

Frame PlaneFamily::Through(const Matrix& vectors, Rng& rng) const {
  const int q = static_cast<int>(vectors.cols());
  if (q > 0 && vectors.rows() != n_) {
    throw std::invalid_argument("PlaneFamily::Through: dimension mismatch");
  }
  if (q > p_) {
    throw std::invalid_argument("PlaneFamily::Through: too many vectors");
  }
  RequireOrthonormalColumns(vectors);

  switch (kind_) {
    case FamilyKind::kFullReal: {
      BasisBuilder b(n_);
      for (int c = 0; c < q; ++c) b.Add(vectors.col(c));
      while (b.size() < p_) b.Add(GaussianVector(rng, n_));
      return Frame(b.matrix());
    }
    case FamilyKind::kComplexPlanes:
    case FamilyKind::kQuaternionicPlanes: {
      std::vector<Matrix> ops;
      if (complex_) {
        ops = {complex_->j()};
      } else {
        ops = {quaternion_->i(), quaternion_->j(), quaternion_->k()};
      }
      BasisBuilder b(n_);
      auto add_closed = [&](const Vector& v) {
        b.Add(v);
        for (const Matrix& op : ops) b.Add(op * v);
      };
      for (int c = 0; c < q; ++c) add_closed(vectors.col(c));
      if (b.size() > p_) {
        throw std::invalid_argument(
            "PlaneFamily::Through: vectors span too large a subspace");
      }
      for (int attempt = 0; b.size() < p_ && attempt < 100; ++attempt) {
        add_closed(GaussianVector(rng, n_));
      }
      return Frame(b.matrix());
    }
    case FamilyKind::kLagrangian:
    case FamilyKind::kIsotropic: {
      const Matrix& j = complex_->j();
      if (q > 0 && IsotropyCheck(Frame(vectors), *complex_).max_violation >
                       kMemberTol) {
        throw std::invalid_argument(
            "PlaneFamily::Through: vectors are not isotropic");
      }
      BasisBuilder b(n_);
      for (int c = 0; c < q; ++c) b.Add(vectors.col(c));
      while (b.size() < p_) {
        Matrix span(n_, 2 * b.size());
        span << b.matrix(), j * b.matrix();
        b.Add(RandomUnitOrthogonalTo(rng, span, n_));
      }
      return Frame(b.matrix());
    }
    case FamilyKind::kKahlerOrbit:
    case FamilyKind::kQuatOrbit: {
      if (q == 2) {
        Frame f(vectors);
        if (!Contains(f)) {
          throw std::invalid_argument(
              "PlaneFamily::Through: pair lies in no orbit plane");
        }
        return f;
      }
      const Vector x =
          q == 1 ? Vector(vectors.col(0)) : RandomUnitVector(rng, n_).vector();
      Vector v;
      if (kind_ == FamilyKind::kKahlerOrbit) {
        const Vector jx = complex_->j() * x;
        Matrix line(n_, 2);
        line << x, jx;
        if (param_ >= 1.0) {
          v = jx;
        } else {
          v = param_ * jx + std::sqrt(1.0 - param_ * param_) *
                                RandomUnitOrthogonalTo(rng, line, n_);
        }
      } else {
        const Matrix h = QuaternionLine(x, *quaternion_);
        const Vector imag = RandomUnitVector(rng, 3).vector();
        const Vector w = h.rightCols(3) * imag;
        if (param_ <= 0.0) {
          v = w;
        } else {
          v = std::sqrt(1.0 - param_) * w +
              std::sqrt(param_) * RandomUnitOrthogonalTo(rng, h, n_);
        }
      }
      Matrix cols(n_, 2);
      cols << x, v / v.norm();
      return Frame(cols);
    }
    case FamilyKind::kExplicit: {
      if (q == 0) {
        std::uniform_int_distribution<std::size_t> pick(0, frames_.size() - 1);
        return frames_[pick(rng)];
      }
      for (const Frame& f : frames_) {
        bool ok = true;
        for (int c = 0; c < q && ok; ++c) {
          ok = f.DistanceTo(vectors.col(c)) <= kMemberTol;
        }
        if (ok) return f;
      }
      throw std::invalid_argument(
          "PlaneFamily::Through: no listed plane contains the vectors");
    }
  }
  throw std::logic_error("PlaneFamily::Through: unknown family");
}

double PlaneFamily::PairResidual(const Vector& a, const Vector& b) const {
  if (p_ < 2) return 1.0;
  Vector bh = b - a.dot(b) * a;
  const double norm = bh.norm();
  if (!(norm > 1e-12)) return 1.0;
  bh /= norm;
  switch (kind_) {
    case FamilyKind::kFullReal:
      return 0.0;
    case FamilyKind::kComplexPlanes:
      if (p_ >= 4) return 0.0;
      return std::abs((complex_->j() * a).dot(bh)) - 1.0;
    case FamilyKind::kQuaternionicPlanes: {
      if (p_ >= 8) return 0.0;
      const Matrix h = QuaternionLine(a, *quaternion_);
      return -(bh - h * (h.transpose() * bh)).squaredNorm();
    }
    case FamilyKind::kLagrangian:
    case FamilyKind::kIsotropic:
      return (complex_->j() * a).dot(bh);
    case FamilyKind::kKahlerOrbit:
      return std::abs((complex_->j() * a).dot(bh)) - param_;
    case FamilyKind::kQuatOrbit: {
      const Matrix h = QuaternionLine(a, *quaternion_);
      return (bh - h * (h.transpose() * bh)).squaredNorm() - param_;
    }
    case FamilyKind::kExplicit:
      return 1.0;
  }
  return 1.0;
}

int IntersectionDim(const Frame& w1, const Frame& w2, double tol) {
  if (w1.dim() != w2.dim()) {
    throw std::invalid_argument("IntersectionDim: ambient dimension mismatch");
  }
  Matrix both(w1.dim(), w1.rank() + w2.rank());
  both << w1.basis(), w2.basis();
  Eigen::JacobiSVD<Matrix> svd(both);
  const Vector& sv = svd.singularValues();
  const double cut = tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv(i) > cut ? 1 : 0;
  return w1.rank() + w2.rank() - rank;
}

double KahlerAngleInvariant(const Frame& w, const ComplexStructure& s) {
  if (w.rank() != 2 || w.dim() != s.dim()) {
    throw std::invalid_argument("KahlerAngleInvariant: need a 2-plane in R^2m");
  }
  return std::min(1.0, std::abs((s.j() * w.column(0)).dot(w.column(1))));
}

double QuaternionicInvariant(const Frame& w, const QuaternionStructure& s) {
  if (w.rank() != 2 || w.dim() != s.dim()) {
    throw std::invalid_argument(
        "QuaternionicInvariant: need a 2-plane in R^4m");
  }
  const Vector x = w.column(0), v = w.column(1);
  const double a = v.dot(x), b = v.dot(s.i() * x), c = v.dot(s.j() * x),
               d = v.dot(s.k() * x);
  return std::clamp(1.0 - a * a - b * b - c * c - d * d, 0.0, 1.0);
}

IsotropyResult IsotropyCheck(const Frame& w, const ComplexStructure& s) {
  if (w.dim() != s.dim()) {
    throw std::invalid_argument("IsotropyCheck: dimension mismatch");
  }
  const Matrix omega = w.basis().transpose() * s.j() * w.basis();
  const double v = omega.cwiseAbs().maxCoeff();
  return {v <= kMemberTol, v};
}

Matrix RandomUnitary(Rng& rng, const ComplexStructure& s) {
  const Matrix x = RandomSkew(rng, s.dim());
  const Matrix& j = s.j();
  return CayleyOrthogonal(0.5 * (x - j * x * j));
}

Matrix RandomSymplectic(Rng& rng, const QuaternionStructure& s) {
  const Matrix x = RandomSkew(rng, s.dim());
  return CayleyOrthogonal(0.25 * (x - s.i() * x * s.i() - s.j() * x * s.j() -
                                  s.k() * x * s.k()));
}

Matrix RandomSp1(Rng& rng, const QuaternionStructure& s) {
  const Vector q = RandomUnitVector(rng, 4).vector();
  const int n = s.dim();
  return q(0) * Matrix::Identity(n, n) + q(1) * s.i() + q(2) * s.j() +
         q(3) * s.k();
}

namespace {

constexpr int kGrid = 24;
constexpr int kHistogramPlanes = 64;

// Two orthonormal directions spanning a random 2-dimensional slice of w.
Matrix RandomPairIn(const Frame& w, Rng& rng) {
  if (w.rank() == 2) return w.basis();
  const Matrix q = RandomOrthogonal(rng, w.rank());
  return w.basis() * q.leftCols(2);
}

// A family plane meeting both wa and wb, found by scanning pairs
// a in wa, b in wb for zeros of the family's pair residual.
std::optional<Frame> LinkSearch(const PlaneFamily& family, const Frame& wa,
                                const Frame& wb, Rng& rng) {
  if (family.plane_dim() < 2 || family.kind() == FamilyKind::kExplicit) {
    return std::nullopt;
  }
  const Matrix ua = RandomPairIn(wa, rng), ub = RandomPairIn(wb, rng);
  auto point = [](const Matrix& u, double t) -> Vector {
    return std::cos(t) * u.col(0) + std::sin(t) * u.col(1);
  };
  auto try_pair = [&](const Vector& a, const Vector& b) -> std::optional<Frame> {
    Vector bh = b - a.dot(b) * a;
    if (bh.norm() < 1e-6) return std::nullopt;
    bh.normalize();
    Matrix cols(a.size(), 2);
    cols << a, bh;
    try {
      Frame link = family.Through(cols, rng);
      if (family.Contains(link) && IntersectionDim(link, wa) >= 1 &&
          IntersectionDim(link, wb) >= 1) {
        return link;
      }
    } catch (const std::invalid_argument&) {
    }
    return std::nullopt;
  };
  for (int i = 0; i < kGrid; ++i) {
    const Vector a = point(ua, M_PI * i / kGrid);
    double prev_t = 0.0, prev_r = 0.0;
    bool have_prev = false;
    for (int k = 0; k <= kGrid; ++k) {
      const double t = M_PI * k / kGrid;
      const Vector b = point(ub, t);
      if (std::abs(a.dot(b)) > 1.0 - 1e-9) {
        have_prev = false;
        continue;
      }
      const double r = family.PairResidual(a, b);
      if (std::abs(r) <= 1e-13) {
        if (auto link = try_pair(a, b)) return link;
      } else if (have_prev && (r > 0) != (prev_r > 0)) {
        double lo = prev_t, hi = t, rlo = prev_r;
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double rm = family.PairResidual(a, point(ub, mid));
          if ((rm > 0) == (rlo > 0)) {
            lo = mid;
            rlo = rm;
          } else {
            hi = mid;
          }
        }
        if (auto link = try_pair(a, point(ub, 0.5 * (lo + hi)))) return link;
      }
      prev_t = t;
      prev_r = r;
      have_prev = true;
    }
  }
  return std::nullopt;
}

struct Node {
  Frame frame;
  int side;    // 0: grown from x, 1: grown from y
  int parent;  // -1 for roots
};

std::vector<int> PathToRoot(const std::vector<Node>& nodes, int i) {
  std::vector<int> path;
  for (; i >= 0; i = nodes[i].parent) path.push_back(i);
  return path;
}

void Finish(TransitivityReport& report, const UnitVector& x,
            const UnitVector& y) {
  const auto& chain = report.chain;
  report.chain_intersections.clear();
  if (chain.empty()) return;
  if (chain.front().DistanceTo(x.vector()) > kMemberTol ||
      chain.back().DistanceTo(y.vector()) > kMemberTol) {
    throw std::logic_error("TransitivityCheck: chain endpoints not verified");
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const int d = IntersectionDim(chain[i], chain[i + 1]);
    if (d < 1) {
      throw std::logic_error("TransitivityCheck: chain link not verified");
    }
    report.chain_intersections.push_back(d);
  }
}

}  // namespace

TransitivityReport TransitivityCheck(const PlaneFamily& family,
                                     const UnitVector& x, const UnitVector& y,
                                     int budget, std::uint64_t seed) {
  if (budget < 2) {
    throw std::invalid_argument("TransitivityCheck: budget must be >= 2");
  }
  if (x.dim() != family.dim() || y.dim() != family.dim()) {
    throw std::invalid_argument("TransitivityCheck: dimension mismatch");
  }
  TransitivityReport report;
  report.seed = seed;
  Rng rng = MakeRng(seed, "transitivity");

  std::vector<Node> nodes;
  auto histogram = [&]() {
    report.distinct_planes = static_cast<int>(nodes.size());
    const int count = std::min<int>(kHistogramPlanes, nodes.size());
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j)
        ++report.intersection_histogram[IntersectionDim(nodes[i].frame,
                                                        nodes[j].frame)];
  };

  if (family.kind() == FamilyKind::kExplicit) {
    // Exhaustive breadth-first search over the listed planes.
    const auto& frames = family.frames();
    for (const Frame& f : frames) nodes.push_back({f, 0, -1});
    report.samples_used = static_cast<int>(frames.size());
    const int count = static_cast<int>(frames.size());
    std::vector<int> prev(count, -2);
    std::deque<int> queue;
    for (int i = 0; i < count; ++i) {
      if (frames[i].DistanceTo(x.vector()) <= kMemberTol) {
        prev[i] = -1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      if (frames[i].DistanceTo(y.vector()) <= kMemberTol) {
        for (int k = i; k >= 0; k = prev[k]) report.chain.push_back(frames[k]);
        std::reverse(report.chain.begin(), report.chain.end());
        report.chain_found = true;
        break;
      }
      for (int j = 0; j < count; ++j) {
        if (prev[j] == -2 && IntersectionDim(frames[i], frames[j]) >= 1) {
          prev[j] = i;
          queue.push_back(j);
        }
      }
    }
    histogram();
    Finish(report, x, y);
    return report;
  }

  Matrix xcol = x.vector(), ycol = y.vector();
  nodes.push_back({family.Through(xcol, rng), 0, -1});
  nodes.push_back({family.Through(ycol, rng), 1, -1});
  report.samples_used = 2;

  auto emit = [&](int a, int b, const std::optional<Frame>& link) {
    // a on the x side, b on the y side.
    std::vector<int> pa = PathToRoot(nodes, a), pb = PathToRoot(nodes, b);
    for (auto it = pa.rbegin(); it != pa.rend(); ++it)
      report.chain.push_back(nodes[*it].frame);
    if (link) report.chain.push_back(*link);
    for (int k : pb) report.chain.push_back(nodes[k].frame);
    report.chain_found = true;
  };

  auto connect = [&](int a, int b) -> bool {
    if (nodes[a].side == 1) std::swap(a, b);
    if (IntersectionDim(nodes[a].frame, nodes[b].frame) >= 1) {
      emit(a, b, std::nullopt);
      return true;
    }
    if (auto link = LinkSearch(family, nodes[a].frame, nodes[b].frame, rng)) {
      emit(a, b, link);
      return true;
    }
    return false;
  };

  if (nodes[0].frame.DistanceTo(y.vector()) <= kMemberTol) {
    report.chain.push_back(nodes[0].frame);
    report.chain_found = true;
  } else if (!connect(0, 1)) {
    std::vector<int> by_side[2] = {{0}, {1}};
    constexpr int kPartnersPerPlane = 3;
    for (int step = 0; report.samples_used < budget; ++step) {
      const int side = step % 2;
      const auto& own = by_side[side];
      std::uniform_int_distribution<std::size_t> pick_own(0, own.size() - 1);
      const int parent = own[pick_own(rng)];
      const Frame& pf = nodes[parent].frame;
      const Vector point =
          pf.basis() * RandomUnitVector(rng, pf.rank()).vector();
      Frame w = family.Through(Matrix(point), rng);
      ++report.samples_used;
      bool duplicate = false;
      for (const Node& node : nodes) {
        if (ProjectorDistance(node.frame, w) < 1e-8) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      nodes.push_back({w, side, parent});
      const int id = static_cast<int>(nodes.size()) - 1;
      by_side[side].push_back(id);

      const auto& other = by_side[1 - side];
      std::vector<int> partners = {other.front(), other.back()};
      std::uniform_int_distribution<std::size_t> pick_other(0, other.size() - 1);
      for (int k = 0; k < kPartnersPerPlane; ++k)
        partners.push_back(other[pick_other(rng)]);
      std::sort(partners.begin(), partners.end());
      partners.erase(std::unique(partners.begin(), partners.end()),
                     partners.end());
      bool done = false;
      for (int partner : partners) {
        if (connect(id, partner)) {
          done = true;
          break;
        }
      }
      if (done) break;
    }
  }
  histogram();
  Finish(report, x, y);
  return report;
}

}  // namespace riesz
