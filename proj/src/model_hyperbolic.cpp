#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "model.hpp"

namespace gcb::detail {

namespace {

constexpr const char* kName = "HyperbolicPlane";

using hyp::Vec3;

/// Projects a vector onto the tangent space at p and normalizes it.
Vec3 orthonormal_tangent(const Vec3& p, const Vec3& v) {
  const Vec3 u = v + hyp::minkowski(v, p) * p;
  return (1.0 / std::sqrt(std::max(1e-300, hyp::minkowski(u, u)))) * u;
}

class HyperbolicModel final : public Model {
 public:
  ModelKind kind() const override { return ModelKind::HyperbolicPlane; }
  std::string name() const override { return kName; }
  Point default_basepoint() const override { return HypPoint{hyp::kOrigin}; }

  double distance(const Point& x, const Point& y) const override {
    return hyp::distance(expect<HypPoint>(x, kName).coords, expect<HypPoint>(y, kName).coords);
  }

  Point bicombing(const Point& x, const Point& y, double t) const override {
    const Vec3& a = expect<HypPoint>(x, kName).coords;
    const Vec3& b = expect<HypPoint>(y, kName).coords;
    const double d = hyp::distance(a, b);
    if (d == 0.0) return x;
    // Positive weights, so no cancellation between far-out coordinates.
    const double s = std::sinh(d);
    return HypPoint{hyp::renormalize((std::sinh((1.0 - t) * d) / s) * a + (std::sinh(t * d) / s) * b)};
  }

  GeodesicLine extend_to_line(const Point& x, const Point& y) const override {
    const Vec3& a = expect<HypPoint>(x, kName).coords;
    const Vec3& b = expect<HypPoint>(y, kName).coords;
    return HypLine{a, hyp::tangent_toward(a, b)};
  }

  Point eval(const GeodesicLine& line, double t) const override {
    const auto& l = expect_line<HypLine>(line, kName);
    return HypPoint{hyp::geodesic_point(l.origin, l.tangent, t)};
  }

  GeodesicLine shifted(const GeodesicLine& line, double t) const override {
    const auto& l = expect_line<HypLine>(line, kName);
    const Vec3 p = hyp::geodesic_point(l.origin, l.tangent, t);
    const Vec3 v = std::sinh(t) * l.origin + std::cosh(t) * l.tangent;
    return HypLine{p, orthonormal_tangent(p, v)};
  }

  GeodesicLine line_from_boundary_pair(const BoundaryPoint& zminus, const BoundaryPoint& zplus,
                                       const Point& base) const override {
    const Vec3 nm = hyp::ideal(expect_boundary<IdealPoint>(zminus, kName).theta);
    const Vec3 np = hyp::ideal(expect_boundary<IdealPoint>(zplus, kName).theta);
    const Vec3& o = expect<HypPoint>(base, kName).coords;
    const double k = -1.0 / (2.0 * hyp::minkowski(np, nm));
    const double bp = -hyp::minkowski(o, np);
    const double bm = -hyp::minkowski(o, nm);
    const double alpha = std::sqrt(k * bm / bp);
    const double beta = std::sqrt(k * bp / bm);
    const Vec3 p = hyp::renormalize(alpha * np + beta * nm);
    return HypLine{p, orthonormal_tangent(p, alpha * np - beta * nm)};
  }

  std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GeodesicLine& line) const override {
    const auto& l = expect_line<HypLine>(line, kName);
    const Vec3 fwd = l.origin + l.tangent;
    const Vec3 bwd = l.origin - l.tangent;
    return {IdealPoint{hyp::wrap_angle(std::atan2(bwd.y, bwd.x))},
            IdealPoint{hyp::wrap_angle(std::atan2(fwd.y, fwd.x))}};
  }

  Point ray_point(const Point& x, const BoundaryPoint& z, double t) const override {
    const Vec3& a = expect<HypPoint>(x, kName).coords;
    const double theta = expect_boundary<IdealPoint>(z, kName).theta;
    return HypPoint{hyp::geodesic_point(a, hyp::tangent_toward_ideal(a, theta), t)};
  }

  double distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const override {
    const Vec3& a = expect<HypPoint>(x, kName).coords;
    const Vec3& b = expect<HypPoint>(y, kName).coords;
    const Vec3 v = hyp::tangent_toward_ideal(a, expect_boundary<IdealPoint>(z, kName).theta);
    const double t = std::max(0.0, hyp::closest_parameter(a, v, b));
    return hyp::distance(b, hyp::geodesic_point(a, v, t));
  }

  double distance_to_line(const Point& y, const GeodesicLine& line) const override {
    const auto& l = expect_line<HypLine>(line, kName);
    const Vec3& b = expect<HypPoint>(y, kName).coords;
    const double t = hyp::closest_parameter(l.origin, l.tangent, b);
    return hyp::distance(b, hyp::geodesic_point(l.origin, l.tangent, t));
  }

  std::vector<Point> sample_region(const Region& region, double mesh,
                                   std::size_t cap) const override {
    const Vec3& c = expect<HypPoint>(region_center(region), kName).coords;
    std::vector<double> radii;
    if (const auto* b = std::get_if<Ball>(&region)) {
      mesh_parameters(0.0, b->radius, mesh, radii);
    } else if (const auto* s = std::get_if<Sphere>(&region)) {
      radii.push_back(s->radius);
    } else {
      const auto& an = std::get<Annulus>(region);
      mesh_parameters(an.inner, an.outer, mesh, radii);
    }
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    auto ring_size = [&](double rho) -> std::size_t {
      if (rho == 0.0) return 1;
      return static_cast<std::size_t>(
          std::max(1.0, std::ceil(2.0 * std::numbers::pi * std::sinh(rho) / mesh)));
    };
    double total = 0.0;
    for (double rho : radii) total += static_cast<double>(ring_size(rho));
    if (total > static_cast<double>(cap)) throw_capacity(cap);

    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(total));
    for (double rho : radii) {
      const std::size_t n = ring_size(rho);
      for (std::size_t j = 0; j < n; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        out.push_back(HypPoint{hyp::renormalize(hyp::boost(c, hyp::from_polar(rho, theta)))});
      }
    }
    return out;
  }

  bool coordinate_less(const Point& a, const Point& b) const override {
    const Vec3& u = expect<HypPoint>(a, kName).coords;
    const Vec3& v = expect<HypPoint>(b, kName).coords;
    return std::tie(u.x, u.y, u.z) < std::tie(v.x, v.y, v.z);
  }

  double ball_measure(const Point& center, double radius) const override {
    expect<HypPoint>(center, kName);
    return 2.0 * std::numbers::pi * (std::cosh(radius) - 1.0);
  }
};

}  // namespace

std::shared_ptr<const Model> make_hyperbolic_model() { return std::make_shared<HyperbolicModel>(); }

}  // namespace gcb::detail
