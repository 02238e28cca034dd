#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gcb/graph.hpp"
#include "gcb/hyperboloid.hpp"
#include "gcb/tree.hpp"

namespace gcb {

// ---------------------------------------------------------------------------
// Points, lines, boundary points and regions. Each alternative belongs to one
// model; handing a point of the wrong model to a space is a model-mismatch.
// ---------------------------------------------------------------------------

struct HypPoint {
  hyp::Vec3 coords;
  friend bool operator==(const HypPoint&, const HypPoint&) = default;
};

struct EucPoint {
  std::vector<double> coords;
  friend bool operator==(const EucPoint&, const EucPoint&) = default;
};

/// A point on a graph edge at `offset` from the edge's first endpoint. Vertex
/// points are stored on their smallest-index incident edge.
struct GraphPoint {
  std::size_t edge = 0;
  double offset = 0.0;
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

using Point = std::variant<tree::Point, HypPoint, EucPoint, GraphPoint>;

struct HypLine {
  hyp::Vec3 origin;   // gamma(0)
  hyp::Vec3 tangent;  // unit tangent at gamma(0)
};

struct EucLine {
  std::vector<double> origin;
  std::vector<double> direction;  // unit
};

using GeodesicLine = std::variant<tree::Line, HypLine, EucLine>;

struct IdealPoint {
  double theta = 0.0;  // angle on the circle at infinity, in [0, 2 pi)
};

struct EucDirection {
  std::vector<double> unit;
};

using BoundaryPoint = std::variant<tree::End, IdealPoint, EucDirection>;

/// Tree ends compare by reduced word; ideal points by angle mod 2 pi within 1e-12.
bool same_boundary_point(const BoundaryPoint& a, const BoundaryPoint& b);

struct Ball {
  Point center;
  double radius = 0.0;
};

struct Sphere {
  Point center;
  double radius = 0.0;
};

struct Annulus {
  Point center;
  double inner = 0.0;
  double outer = 0.0;
};

using Region = std::variant<Ball, Sphere, Annulus>;

const Point& region_center(const Region& region);

enum class ModelKind { RegularTree, HyperbolicPlane, Euclidean, MetricGraph };

struct PackingParams {
  double P0 = 0.0;
  double r0 = 0.0;
};

namespace detail {
class Model;
}

/// A concrete model space with its convex geodesic bicombing. Immutable and
/// safe to share across threads.
class Space {
 public:
  static constexpr std::size_t kDefaultSampleCap = 5'000'000;

  static Space regular_tree(int branching);
  static Space hyperbolic_plane();
  static Space euclidean(int dim);
  static Space metric_graph(MetricGraph graph, std::size_t base_vertex = 0);

  ModelKind kind() const;
  std::string name() const;
  /// Branching q for trees, dimension for Euclidean spaces, 0 otherwise.
  int parameter() const;
  /// MetricGraph bicombings are not convex in general.
  bool approximate() const { return kind() == ModelKind::MetricGraph; }
  bool supports_boundary() const;

  const Point& basepoint() const { return basepoint_; }
  Space with_basepoint(Point p) const;

  std::optional<double> delta_hint() const { return delta_hint_; }
  Space with_delta_hint(double delta) const;
  std::optional<PackingParams> packing() const { return packing_; }
  Space with_packing(PackingParams params) const;
  std::size_t sample_cap() const { return sample_cap_; }
  Space with_sample_cap(std::size_t cap) const;

  const MetricGraph* graph() const;

  double distance(const Point& x, const Point& y) const;
  Point bicombing(const Point& x, const Point& y, double t) const;

  /// Deterministic sigma-geodesic line with gamma(0) = x and gamma(d(x, y)) = y.
  GeodesicLine extend_to_line(const Point& x, const Point& y) const;
  Point eval(const GeodesicLine& line, double t) const;
  /// Phi_t: the line reparametrized by gamma(. + t).
  GeodesicLine shifted(const GeodesicLine& line, double t) const;

  /// Line from zminus to zplus anchored at the projection of the basepoint.
  GeodesicLine line_from_boundary_pair(const BoundaryPoint& zminus, const BoundaryPoint& zplus) const;
  /// (gamma^-, gamma^+).
  std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GeodesicLine& line) const;

  /// Point at time t on the ray [x, z].
  Point ray_point(const Point& x, const BoundaryPoint& z, double t) const;
  /// Distance from y to the ray [x, z].
  double distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const;
  /// Distance from y to the whole line.
  double distance_to_line(const Point& y, const GeodesicLine& line) const;

  /// Mesh-dense finite sample of a region, ordered by (distance to center,
  /// coordinate order). Throws Capacity when the sample would exceed the cap.
  std::vector<Point> sample_region(const Region& region, double mesh) const;

  /// Model-specific strict total order used to break ties.
  bool coordinate_less(const Point& a, const Point& b) const;

  /// d(gamma(s0 + i h), gamma'(s0 + i h)) for i = 0 .. out.size() - 1.
  void separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0, double h,
                          std::span<double> out) const;

  /// Natural measure of the closed ball B(center, radius): edge length for
  /// trees and graphs, area for the hyperbolic plane, Lebesgue volume otherwise.
  double ball_measure(const Point& center, double radius) const;

  const detail::Model& model() const { return *model_; }

 private:
  explicit Space(std::shared_ptr<const detail::Model> model);

  std::shared_ptr<const detail::Model> model_;
  Point basepoint_;
  std::optional<double> delta_hint_;
  std::optional<PackingParams> packing_;
  std::size_t sample_cap_ = kDefaultSampleCap;
};

// Convenience constructors for model points.
Point tree_vertex(tree::Word word);
Point hyp_point(double rho, double theta);
Point euc_point(std::vector<double> coords);

}  // namespace gcb
