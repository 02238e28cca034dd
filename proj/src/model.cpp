#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcb::detail {

namespace {
constexpr double kSnap = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::optional<std::pair<double, double>> solve_range(const Piece& piece, double lo, double hi) {
  const double len = piece.t1 - piece.t0;
  const double slope = len > 0.0 ? (piece.d1 - piece.d0) / len : 0.0;
  if (len <= 0.0 || std::abs(slope) < 1e-15) {
    const double d = std::min(piece.d0, piece.d1);
    const double e = std::max(piece.d0, piece.d1);
    if (e < lo - kSnap || d > hi + kSnap) return std::nullopt;
    return std::make_pair(piece.t0, std::max(piece.t0, piece.t1));
  }
  double ta = lo == -kInf ? (slope > 0 ? -kInf : kInf) : piece.t0 + (lo - piece.d0) / slope;
  double tb = hi == kInf ? (slope > 0 ? kInf : -kInf) : piece.t0 + (hi - piece.d0) / slope;
  if (ta > tb) std::swap(ta, tb);
  double a = std::max(piece.t0, ta);
  double b = std::min(piece.t1, tb);
  if (a > b + kSnap) return std::nullopt;
  if (a > b) a = b = std::clamp(a, piece.t0, piece.t1);
  return std::make_pair(a, b);
}

void mesh_parameters(double a, double b, double mesh, std::vector<double>& out) {
  out.push_back(a);
  if (b <= a) return;
  for (double k = std::floor(a / mesh) + 1.0;; k += 1.0) {
    const double t = k * mesh;
    if (t >= b - kSnap) break;
    if (t > a + kSnap) out.push_back(t);
  }
  out.push_back(b);
}

std::vector<std::pair<double, double>> region_intervals(std::span<const Piece> pieces,
                                                        const Region& region) {
  double lo = -kInf;
  double hi = kInf;
  if (const auto* b = std::get_if<Ball>(&region)) {
    hi = b->radius;
  } else if (const auto* s = std::get_if<Sphere>(&region)) {
    lo = hi = s->radius;
  } else {
    const auto& an = std::get<Annulus>(region);
    lo = an.inner;
    hi = an.outer;
  }
  std::vector<std::pair<double, double>> raw;
  for (const auto& p : pieces) {
    if (auto r = solve_range(p, lo, hi)) raw.push_back(*r);
  }
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& r : raw) {
    if (!merged.empty() && r.first <= merged.back().second + kSnap) {
      merged.back().second = std::max(merged.back().second, r.second);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

double length_within(std::span<const Piece> pieces, double radius) {
  double total = 0.0;
  for (const auto& p : pieces) {
    if (auto r = solve_range(p, -kInf, radius)) total += r->second - r->first;
  }
  return total;
}

void throw_capacity(std::size_t cap) {
  throw Error(ErrorCode::Capacity,
              "region sample would exceed the cap of " + std::to_string(cap) + " points");
}

GeodesicLine Model::extend_to_line(const Point&, const Point&) const {
  throw Error(ErrorCode::UnsupportedModel, name() + " has no geodesic extension");
}

Point Model::eval(const GeodesicLine&, double) const {
  throw Error(ErrorCode::UnsupportedModel, name() + " has no geodesic lines");
}

GeodesicLine Model::shifted(const GeodesicLine&, double) const {
  throw Error(ErrorCode::UnsupportedModel, name() + " has no geodesic lines");
}

GeodesicLine Model::line_from_boundary_pair(const BoundaryPoint&, const BoundaryPoint&,
                                            const Point&) const {
  throw Error(ErrorCode::UnsupportedBoundary, name() + " has no usable boundary");
}

std::pair<BoundaryPoint, BoundaryPoint> Model::endpoints(const GeodesicLine&) const {
  throw Error(ErrorCode::UnsupportedBoundary, name() + " has no usable boundary");
}

Point Model::ray_point(const Point&, const BoundaryPoint&, double) const {
  throw Error(ErrorCode::UnsupportedBoundary, name() + " has no usable boundary");
}

double Model::distance_to_ray(const Point&, const Point&, const BoundaryPoint&) const {
  throw Error(ErrorCode::UnsupportedBoundary, name() + " has no usable boundary");
}

double Model::distance_to_line(const Point&, const GeodesicLine&) const {
  throw Error(ErrorCode::UnsupportedModel, name() + " has no geodesic lines");
}

void Model::separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0, double h,
                               std::span<double> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double s = s0 + static_cast<double>(i) * h;
    out[i] = distance(eval(a, s), eval(b, s));
  }
}

}  // namespace gcb::detail
