#include "gcb/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gcb/error.hpp"
#include "model.hpp"

namespace gcb {

double gromov_product(const Space& space, const Point& x, const Point& y, const Point& z) {
  return 0.5 * (space.distance(x, y) + space.distance(x, z) - space.distance(y, z));
}

double four_point_defect(double dxy, double dzw, double dxz, double dyw, double dxw, double dyz) {
  double s[3] = {dxy + dzw, dxz + dyw, dxw + dyz};
  std::sort(s, s + 3);
  return std::max(0.0, 0.5 * (s[2] - s[1]));
}

DeltaEstimate estimate_delta(const Space& space, std::span<const Point> sample, std::uint64_t seed) {
  const std::size_t n = sample.size();
  if (n < 4) throw Error(ErrorCode::InsufficientSample, "delta estimation needs at least 4 points");
  DeltaEstimate est;
  est.seed = seed;
  if (n <= kExhaustiveDeltaLimit) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = space.distance(sample[i], sample[j]);
    }
    double best = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double dab = d[a * n + b];
        for (std::size_t c = b + 1; c < n; ++c) {
          const double dac = d[a * n + c];
          const double dbc = d[b * n + c];
          for (std::size_t e = c + 1; e < n; ++e) {
            best = std::max(best, four_point_defect(dab, d[c * n + e], dac, d[b * n + e],
                                                    d[a * n + e], dbc));
            ++count;
          }
        }
      }
    }
    est.delta = best;
    est.quadruples = count;
    est.exhaustive = true;
    return est;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double best = 0.0;
  for (std::size_t k = 0; k < kDeltaQuadruples; ++k) {
    const Point& x = sample[pick(rng)];
    const Point& y = sample[pick(rng)];
    const Point& z = sample[pick(rng)];
    const Point& w = sample[pick(rng)];
    best = std::max(best, four_point_defect(space.distance(x, y), space.distance(z, w),
                                            space.distance(x, z), space.distance(y, w),
                                            space.distance(x, w), space.distance(y, z)));
  }
  est.delta = best;
  est.quadruples = kDeltaQuadruples;
  est.exhaustive = false;
  return est;
}

double resolve_delta(const Space& space) {
  if (space.kind() == ModelKind::RegularTree) return 0.0;
  if (auto hint = space.delta_hint()) return *hint;
  const auto pool = space.sample_region(Ball{space.basepoint(), 6.0}, 0.5);
  std::mt19937_64 rng(kDeltaSeed);
  std::vector<Point> pick;
  const std::size_t want = std::min<std::size_t>(200, pool.size());
  std::sample(pool.begin(), pool.end(), std::back_inserter(pick), want, rng);
  if (pick.size() < 4) return 0.0;
  return estimate_delta(space, pick).delta;
}

double boundary_gromov_product(const Space& space, const BoundaryPoint& z, const BoundaryPoint& z2,
                               const Point& x) {
  if (!space.supports_boundary()) {
    throw Error(ErrorCode::UnsupportedBoundary, space.name() + " has no usable boundary");
  }
  if (same_boundary_point(z, z2)) return kInfiniteProduct;
  if (space.kind() == ModelKind::RegularTree) {
    const GeodesicLine line = space.model().line_from_boundary_pair(z, z2, x);
    return space.distance_to_line(x, line);
  }
  const Point a = space.ray_point(x, z, kBoundaryRayTime);
  const Point b = space.ray_point(x, z2, kBoundaryRayTime);
  return std::max(0.0, gromov_product(space, x, a, b));
}

bool visual_ball_membership(const Space& space, const BoundaryPoint& z, double rho,
                            const BoundaryPoint& z2, const Point& x) {
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorCode::Domain, "visual radius must lie in (0, 1]");
  return boundary_gromov_product(space, z, z2, x) > std::log(1.0 / rho);
}

bool shadow_membership(const Space& space, const Shadow& shadow, const BoundaryPoint& z) {
  if (!(shadow.radius > 0.0)) throw Error(ErrorCode::Domain, "shadow radius must be positive");
  return space.distance_to_ray(shadow.caster, shadow.source, z) < shadow.radius;
}

ShadowBallReport verify_shadow_ball_lemma(const Space& space, const BoundaryPoint& z,
                                          const Point& x, double T, double r,
                                          std::span<const BoundaryPoint> probes, double delta) {
  const Point y = space.ray_point(x, z, T);
  const Shadow wide{x, y, std::max(7.0 * delta, r)};
  const Shadow narrow{x, y, r};
  ShadowBallReport rep;
  rep.probes = probes.size();
  for (const auto& p : probes) {
    const double prod = boundary_gromov_product(space, z, p, x);
    if (prod > T) {
      ++rep.in_ball;
      if (!shadow_membership(space, wide, p)) ++rep.ball_violations;
    }
    if (shadow_membership(space, narrow, p)) {
      ++rep.in_shadow;
      if (!(prod > T - r)) ++rep.shadow_violations;
    }
  }
  rep.holds = rep.ball_violations == 0 && rep.shadow_violations == 0;
  return rep;
}

}  // namespace gcb
