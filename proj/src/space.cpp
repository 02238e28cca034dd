#include "gcb/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gcb/error.hpp"
#include "model.hpp"

namespace gcb {

bool same_boundary_point(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.index() != b.index()) return false;
  if (const auto* e = std::get_if<tree::End>(&a)) return *e == std::get<tree::End>(b);
  if (const auto* t = std::get_if<IdealPoint>(&a)) {
    double diff = std::fmod(std::abs(t->theta - std::get<IdealPoint>(b).theta), 2.0 * std::numbers::pi);
    return std::min(diff, 2.0 * std::numbers::pi - diff) <= 1e-12;
  }
  const auto& u = std::get<EucDirection>(a).unit;
  const auto& v = std::get<EucDirection>(b).unit;
  if (u.size() != v.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i] - v[i]) > 1e-12) return false;
  }
  return true;
}

const Point& region_center(const Region& region) {
  return std::visit([](const auto& r) -> const Point& { return r.center; }, region);
}

Space::Space(std::shared_ptr<const detail::Model> model)
    : model_(std::move(model)), basepoint_(model_->default_basepoint()) {}

Space Space::regular_tree(int branching) {
  if (branching < 2) throw Error(ErrorCode::Validation, "branching must be >= 2");
  return Space(detail::make_tree_model(branching));
}

Space Space::hyperbolic_plane() { return Space(detail::make_hyperbolic_model()); }

Space Space::euclidean(int dim) {
  if (dim < 1) throw Error(ErrorCode::Validation, "dim must be >= 1");
  return Space(detail::make_euclidean_model(dim));
}

Space Space::metric_graph(MetricGraph graph, std::size_t base_vertex) {
  if (base_vertex >= graph.vertex_count()) {
    throw Error(ErrorCode::Validation, "base vertex out of range");
  }
  return Space(detail::make_graph_model(std::move(graph), base_vertex));
}

ModelKind Space::kind() const { return model_->kind(); }
std::string Space::name() const { return model_->name(); }
int Space::parameter() const { return model_->parameter(); }
const MetricGraph* Space::graph() const { return model_->graph(); }

bool Space::supports_boundary() const {
  return kind() == ModelKind::RegularTree || kind() == ModelKind::HyperbolicPlane;
}

Space Space::with_basepoint(Point p) const {
  // Validates the model tag.
  model_->distance(p, basepoint_);
  Space s = *this;
  s.basepoint_ = std::move(p);
  return s;
}

Space Space::with_delta_hint(double delta) const {
  if (!(delta >= 0.0)) throw Error(ErrorCode::Validation, "delta must be nonnegative");
  Space s = *this;
  s.delta_hint_ = delta;
  return s;
}

Space Space::with_packing(PackingParams params) const {
  if (!(params.P0 >= 1.0) || !(params.r0 > 0.0)) {
    throw Error(ErrorCode::Validation, "packing needs P0 >= 1 and r0 > 0");
  }
  Space s = *this;
  s.packing_ = params;
  return s;
}

Space Space::with_sample_cap(std::size_t cap) const {
  Space s = *this;
  s.sample_cap_ = cap;
  return s;
}

double Space::distance(const Point& x, const Point& y) const { return model_->distance(x, y); }

Point Space::bicombing(const Point& x, const Point& y, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::Domain, "bicombing parameter outside [0,1]");
  if (t == 0.0) {
    model_->distance(x, y);
    return x;
  }
  if (t == 1.0) {
    model_->distance(x, y);
    return y;
  }
  return model_->bicombing(x, y, t);
}

GeodesicLine Space::extend_to_line(const Point& x, const Point& y) const {
  if (model_->distance(x, y) == 0.0) {
    throw Error(ErrorCode::DegenerateSegment, "cannot extend a segment with equal endpoints");
  }
  return model_->extend_to_line(x, y);
}

Point Space::eval(const GeodesicLine& line, double t) const { return model_->eval(line, t); }

GeodesicLine Space::shifted(const GeodesicLine& line, double t) const {
  return model_->shifted(line, t);
}

GeodesicLine Space::line_from_boundary_pair(const BoundaryPoint& zminus,
                                            const BoundaryPoint& zplus) const {
  if (!supports_boundary()) {
    throw Error(ErrorCode::UnsupportedBoundary, name() + " has no usable boundary");
  }
  if (same_boundary_point(zminus, zplus)) {
    throw Error(ErrorCode::DegeneratePair, "boundary points coincide");
  }
  return model_->line_from_boundary_pair(zminus, zplus, basepoint_);
}

std::pair<BoundaryPoint, BoundaryPoint> Space::endpoints(const GeodesicLine& line) const {
  return model_->endpoints(line);
}

Point Space::ray_point(const Point& x, const BoundaryPoint& z, double t) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::Domain, "ray time must be nonnegative");
  return model_->ray_point(x, z, t);
}

double Space::distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const {
  return model_->distance_to_ray(y, x, z);
}

double Space::distance_to_line(const Point& y, const GeodesicLine& line) const {
  return model_->distance_to_line(y, line);
}

std::vector<Point> Space::sample_region(const Region& region, double mesh) const {
  if (!(mesh > 0.0)) throw Error(ErrorCode::Domain, "mesh must be positive");
  const bool bad = std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Annulus>) {
          return !(r.inner >= 0.0 && r.outer >= r.inner);
        } else {
          return !(r.radius >= 0.0);
        }
      },
      region);
  if (bad) throw Error(ErrorCode::Domain, "region parameters must be nonnegative");

  std::vector<Point> raw = model_->sample_region(region, mesh, sample_cap_);
  const Point& c = region_center(region);
  std::vector<double> dist(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) dist[i] = model_->distance(c, raw[i]);
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return model_->coordinate_less(raw[a], raw[b]);
  });
  std::vector<Point> out;
  out.reserve(raw.size());
  for (std::size_t i : order) out.push_back(std::move(raw[i]));
  return out;
}

bool Space::coordinate_less(const Point& a, const Point& b) const {
  return model_->coordinate_less(a, b);
}

void Space::separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0, double h,
                               std::span<double> out) const {
  model_->separation_profile(a, b, s0, h, out);
}

double Space::ball_measure(const Point& center, double radius) const {
  if (radius < 0.0) return 0.0;
  return model_->ball_measure(center, radius);
}

Point tree_vertex(tree::Word word) { return tree::Point{std::move(word), 0.0}; }

Point hyp_point(double rho, double theta) { return HypPoint{hyp::from_polar(rho, theta)}; }

Point euc_point(std::vector<double> coords) { return EucPoint{std::move(coords)}; }

}  // namespace gcb
