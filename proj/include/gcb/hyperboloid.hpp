#pragma once

// Hyperboloid model of the hyperbolic plane: points x of R^{2,1} with
// <x, x> = -1 and z > 0, where <a, b> = a.x b.x + a.y b.y - a.z b.z.

namespace gcb::hyp {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }

inline double minkowski(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

inline constexpr Vec3 kOrigin{0.0, 0.0, 1.0};

/// Recomputes the time coordinate so the point lies exactly on the hyperboloid.
Vec3 renormalize(const Vec3& p);

double distance(const Vec3& a, const Vec3& b);

/// Point at hyperbolic distance rho from the origin in direction theta.
Vec3 from_polar(double rho, double theta);
double radius(const Vec3& p);
double angle(const Vec3& p);

/// Lorentz boost carrying the origin to `center`, applied to `v`. Acts on both
/// points and tangent vectors.
Vec3 boost(const Vec3& center, const Vec3& v);
Vec3 unboost(const Vec3& center, const Vec3& v);

/// Null vector representing the ideal point at angle theta.
Vec3 ideal(double theta);

/// Unit tangent at x pointing toward the ideal point at angle theta.
Vec3 tangent_toward_ideal(const Vec3& x, double theta);

/// Unit tangent at x pointing toward y (x != y).
Vec3 tangent_toward(const Vec3& x, const Vec3& y);

/// x cosh t + v sinh t, renormalized.
Vec3 geodesic_point(const Vec3& x, const Vec3& v, double t);

/// Parameter of the closest point to y on the geodesic t -> x cosh t + v sinh t.
double closest_parameter(const Vec3& x, const Vec3& v, const Vec3& y);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double theta);

}  // namespace gcb::hyp
