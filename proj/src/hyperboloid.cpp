#include "gcb/hyperboloid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gcb::hyp {

Vec3 renormalize(const Vec3& p) {
  return {p.x, p.y, std::sqrt(1.0 + p.x * p.x + p.y * p.y)};
}

double distance(const Vec3& a, const Vec3& b) {
  const double q = -minkowski(a, b);
  if (q < 10.0) {
    // Chordal form is accurate for nearby points.
    const Vec3 d = a - b;
    const double n2 = std::max(0.0, minkowski(d, d));
    return 2.0 * std::asinh(std::sqrt(n2) / 2.0);
  }
  return std::acosh(q);
}

Vec3 from_polar(double rho, double theta) {
  const double s = std::sinh(rho);
  return renormalize({s * std::cos(theta), s * std::sin(theta), std::cosh(rho)});
}

double radius(const Vec3& p) { return std::asinh(std::hypot(p.x, p.y)); }

double angle(const Vec3& p) { return wrap_angle(std::atan2(p.y, p.x)); }

Vec3 boost(const Vec3& center, const Vec3& v) {
  const double sx = center.x;
  const double sy = center.y;
  const double dot = sx * v.x + sy * v.y;
  const double k = dot / (1.0 + center.z) + v.z;
  return {v.x + sx * k, v.y + sy * k, dot + center.z * v.z};
}

Vec3 unboost(const Vec3& center, const Vec3& v) {
  return boost({-center.x, -center.y, center.z}, v);
}

Vec3 ideal(double theta) { return {std::cos(theta), std::sin(theta), 1.0}; }

Vec3 tangent_toward_ideal(const Vec3& x, double theta) {
  const Vec3 n = ideal(theta);
  return (1.0 / -minkowski(x, n)) * n - x;
}

Vec3 tangent_toward(const Vec3& x, const Vec3& y) {
  const double c = -minkowski(x, y);
  const Vec3 u = y - c * x;
  const double len = std::sqrt(std::max(0.0, minkowski(u, u)));
  return (1.0 / len) * u;
}

Vec3 geodesic_point(const Vec3& x, const Vec3& v, double t) {
  return renormalize(std::cosh(t) * x + std::sinh(t) * v);
}

double closest_parameter(const Vec3& x, const Vec3& v, const Vec3& y) {
  const double a = -minkowski(y, x);
  const double b = -minkowski(y, v);
  return std::atanh(std::clamp(-b / a, -1.0 + 1e-16, 1.0 - 1e-16));
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

}  // namespace gcb::hyp
