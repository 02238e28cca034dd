#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcb/error.hpp"
#include "gcb/space.hpp"

namespace gcb::detail {

template <class T>
const T& expect(const Point& p, const char* model) {
  if (const auto* v = std::get_if<T>(&p)) return *v;
  throw Error(ErrorCode::ModelMismatch, std::string("point does not belong to ") + model);
}

template <class T>
const T& expect_line(const GeodesicLine& l, const char* model) {
  if (const auto* v = std::get_if<T>(&l)) return *v;
  throw Error(ErrorCode::ModelMismatch, std::string("line does not belong to ") + model);
}

template <class T>
const T& expect_boundary(const BoundaryPoint& b, const char* model) {
  if (const auto* v = std::get_if<T>(&b)) return *v;
  throw Error(ErrorCode::ModelMismatch, std::string("boundary point does not belong to ") + model);
}

/// Linear piece of a distance function along an edge parametrized by [t0, t1].
struct Piece {
  double t0;
  double t1;
  double d0;
  double d1;
};

/// Sub-interval of the piece on which lo <= distance <= hi.
std::optional<std::pair<double, double>> solve_range(const Piece& piece, double lo, double hi);

/// Parameters in [a, b]: both ends plus every multiple of `mesh` strictly inside.
void mesh_parameters(double a, double b, double mesh, std::vector<double>& out);

/// Feasible parameter intervals of a piecewise-linear distance function for a region.
std::vector<std::pair<double, double>> region_intervals(std::span<const Piece> pieces,
                                                        const Region& region);

/// Total length of edge parameters within distance `radius`.
double length_within(std::span<const Piece> pieces, double radius);

[[noreturn]] void throw_capacity(std::size_t cap);

/// Distance from `center` along the edge above vertex `w`, parametrized by the
/// offset b in [0, 1] from w toward its parent, given the endpoint distances.
std::vector<Piece> tree_edge_pieces(const tree::Point& center, const tree::Word& w, double d_lower,
                                    double d_upper);

/// Visits every edge (by lower vertex w) that has an endpoint within
/// `bound` + 1 of `center`, with the distances from `center` to w and to its parent.
/// When `keep` is set, vertices it rejects are neither visited nor expanded.
void for_each_tree_edge(const tree::Point& center, double bound, int q,
                        const std::function<void(const tree::Word&, double, double)>& visit,
                        const std::function<bool(const tree::Word&)>& keep = {});

/// Closest point of a tree line to p.
tree::Point tree_projection(const tree::Line& line, const tree::Point& p);

class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual int parameter() const { return 0; }
  virtual Point default_basepoint() const = 0;
  virtual const MetricGraph* graph() const { return nullptr; }

  virtual double distance(const Point& x, const Point& y) const = 0;
  virtual Point bicombing(const Point& x, const Point& y, double t) const = 0;

  virtual GeodesicLine extend_to_line(const Point& x, const Point& y) const;
  virtual Point eval(const GeodesicLine& line, double t) const;
  virtual GeodesicLine shifted(const GeodesicLine& line, double t) const;
  virtual GeodesicLine line_from_boundary_pair(const BoundaryPoint& zminus,
                                               const BoundaryPoint& zplus,
                                               const Point& base) const;
  virtual std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GeodesicLine& line) const;
  virtual Point ray_point(const Point& x, const BoundaryPoint& z, double t) const;
  virtual double distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const;
  virtual double distance_to_line(const Point& y, const GeodesicLine& line) const;

  /// Unordered, duplicate-free sample.
  virtual std::vector<Point> sample_region(const Region& region, double mesh,
                                           std::size_t cap) const = 0;
  virtual bool coordinate_less(const Point& a, const Point& b) const = 0;
  virtual void separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0,
                                  double h, std::span<double> out) const;
  virtual double ball_measure(const Point& center, double radius) const = 0;
};

std::shared_ptr<const Model> make_tree_model(int q);
std::shared_ptr<const Model> make_hyperbolic_model();
std::shared_ptr<const Model> make_euclidean_model(int dim);
std::shared_ptr<const Model> make_graph_model(MetricGraph graph, std::size_t base_vertex);

}  // namespace gcb::detail
