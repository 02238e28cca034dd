#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

#include "gcb/space.hpp"

namespace gcb {

inline constexpr double kInfiniteProduct = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kDeltaSeed = 0x9e3779b97f4a7c15ULL;
inline constexpr std::size_t kExhaustiveDeltaLimit = 300;
inline constexpr std::size_t kDeltaQuadruples = 200'000;

/// (y, z)_x.
double gromov_product(const Space& space, const Point& x, const Point& y, const Point& z);

struct DeltaEstimate {
  double delta = 0.0;
  std::size_t quadruples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = true;
};

/// Smallest delta for which the four-point condition holds on the sample
/// (every quadruple up to kExhaustiveDeltaLimit points, random ones above).
DeltaEstimate estimate_delta(const Space& space, std::span<const Point> sample,
                             std::uint64_t seed = kDeltaSeed);

/// Four-point defect of one quadruple: half the gap between the two largest
/// of d(x,y)+d(z,w), d(x,z)+d(y,w), d(x,w)+d(y,z).
double four_point_defect(double dxy, double dzw, double dxz, double dyw, double dxw, double dyz);

/// The delta used by constructions: 0 for trees, the hint if declared,
/// otherwise an estimate on a fixed sample of B(basepoint, 6).
double resolve_delta(const Space& space);

/// (z, z')_x for boundary points; kInfiniteProduct when they coincide.
double boundary_gromov_product(const Space& space, const BoundaryPoint& z, const BoundaryPoint& z2,
                               const Point& x);

/// Truncation time used for boundary products in the hyperbolic plane.
inline constexpr double kBoundaryRayTime = 64.0;

/// z' in B(z, rho), i.e. (z, z')_x > log(1 / rho).
bool visual_ball_membership(const Space& space, const BoundaryPoint& z, double rho,
                            const BoundaryPoint& z2, const Point& x);

struct Shadow {
  Point source;
  Point caster;
  double radius = 0.0;
};

/// The ray [source, z] meets the open ball B(caster, radius).
bool shadow_membership(const Space& space, const Shadow& shadow, const BoundaryPoint& z);

struct ShadowBallReport {
  std::size_t probes = 0;
  std::size_t in_ball = 0;           // z' in B(z, e^-T)
  std::size_t ball_violations = 0;   // ... but not in the shadow of radius max(7 delta, r)
  std::size_t in_shadow = 0;         // z' in the shadow of radius r
  std::size_t shadow_violations = 0; // ... but not in B(z, e^(r - T))
  bool holds = false;
};

ShadowBallReport verify_shadow_ball_lemma(const Space& space, const BoundaryPoint& z,
                                          const Point& x, double T, double r,
                                          std::span<const BoundaryPoint> probes, double delta);

}  // namespace gcb
