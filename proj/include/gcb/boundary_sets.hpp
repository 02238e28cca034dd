#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcb/entropy.hpp"
#include "gcb/flow.hpp"
#include "gcb/space.hpp"

namespace gcb {

// ---------------------------------------------------------------------------
// Boundary subsets
// ---------------------------------------------------------------------------

/// A closed subset C of the boundary.
///
/// Tree subsets are deterministic automata over direction letters read from the
/// root vertex: C is the set of ends whose infinite word has a run. Letter q
/// (the extra root neighbour) is only read at the root. Automata are pruned on
/// use so every surviving state continues forever, which makes C closed.
///
/// Hyperbolic-plane subsets are finite unions of closed arcs [a, b] of the
/// circle at infinity, traversed counterclockwise from a; a point is an arc
/// with a == b.
class BoundarySubset {
 public:
  enum class Kind { TreeAutomaton, CircleArcs };

  /// transitions: (state, letter, state) triples; state 0 is the start.
  static BoundarySubset automaton(int alphabet, std::span<const std::array<int, 3>> transitions);
  /// Every end of RegularTree(q).
  static BoundarySubset all_ends(int q);
  /// Ends whose letters all lie in `letters`.
  static BoundarySubset letter_ends(std::span<const int> letters);
  /// A finite set of tree ends.
  static BoundarySubset ends(std::span<const tree::End> ends);
  static BoundarySubset arcs(std::vector<std::pair<double, double>> arcs);
  static BoundarySubset angles(std::span<const double> thetas);

  /// JSON ingestion: {"type":"automaton",...}, {"type":"arcs",...},
  /// {"type":"angles",...} or {"type":"ends",...}.
  static BoundarySubset parse(const std::string& text);
  static BoundarySubset load(const std::string& path);

  Kind kind() const { return kind_; }
  int alphabet() const { return alphabet_; }
  /// next[state][letter], -1 when absent.
  const std::vector<std::vector<int>>& transitions() const { return next_; }
  /// Arcs as (start angle in [0, 2 pi), counterclockwise length in [0, 2 pi]).
  const std::vector<std::pair<double, double>>& arc_list() const { return arcs_; }

  bool contains(const Space& space, const BoundaryPoint& z) const;

 private:
  BoundarySubset() = default;

  Kind kind_ = Kind::TreeAutomaton;
  int alphabet_ = 0;
  std::vector<std::vector<int>> next_;
  std::vector<std::pair<double, double>> arcs_;
};

// ---------------------------------------------------------------------------
// Quasiconvex hulls
// ---------------------------------------------------------------------------

/// A hull line through a point's nearest hull point: eval(line, t) is within
/// tau of the sampled point.
struct HullWitness {
  GeodesicLine line;
  double t = 0.0;
};

struct HullSample {
  Region region;
  std::vector<Point> points;
  std::vector<HullWitness> witnesses;
  double tau = 0.0;
};

/// Distance from y to the union of the lines joining two points of C.
double hull_distance(const Space& space, const BoundarySubset& C, const Point& y);

/// A hull line passing closest to y, anchored there.
HullWitness hull_witness(const Space& space, const BoundarySubset& C, const Point& y);

/// Nearest hull point to the space basepoint: the highest hull vertex in
/// trees, the basepoint's projection onto the widest hull line otherwise.
Point hull_basepoint(const Space& space, const BoundarySubset& C);

/// Mesh-dense sample of the closed tau-neighbourhood of the hull within the
/// region, with one witness per point.
HullSample qc_hull_sample(const Space& space, const BoundarySubset& C, const Region& region,
                          double mesh, double tau);

// ---------------------------------------------------------------------------
// Relative entropies
// ---------------------------------------------------------------------------

/// Greedy r-cover counts of B(x, T) intersected with the tau-neighbourhood of
/// the hull. mesh = 0 selects r / 2.
GrowthSeries relative_covering_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                      double r, std::span<const double> T_list, double tau,
                                      double mesh = 0.0);

/// Number of visual balls {z' : (z, z')_x >= T} needed to cover C. Trees count
/// depth-ceil(T) shadows from the vertex x exactly; the hyperbolic plane covers
/// a sample of C dense at product scale T + 2 greedily.
GrowthSeries relative_minkowski_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                       std::span<const double> T_list);

/// Natural measure of B(x, T) intersected with the tau-neighbourhood of the
/// hull: exact edge length in trees, a polar midpoint rule of step `mesh` in
/// the hyperbolic plane.
GrowthSeries relative_measure_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                     double tau, std::span<const double> T_list,
                                     double mesh = 1.0 / 16.0);

struct RelativeFlowOptions {
  /// Lines must pass within this distance of x; defaults to 22 delta.
  std::optional<double> anchor_radius;
  /// Depth of the tree family; T beyond it raises GenerationDepth.
  double depth = 0.0;
  std::optional<int> backward_depth;
  /// Angular mesh of the endpoint sample in the hyperbolic plane.
  double angle_mesh = 0.05;
};

/// Lines with both endpoints in C passing near x, which must lie in the hull.
LineFamily generate_relative_family(const Space& space, const BoundarySubset& C, const Point& x,
                                    const RelativeFlowOptions& options);

GrowthSeries relative_flow_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                  const WeightFunction& f, double r,
                                  std::span<const double> T_list,
                                  const RelativeFlowOptions& options);

struct RayLineReport {
  std::size_t checked = 0;
  double max_deviation = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// For sampled z in C, finds a hull line gamma with d(xi_xz(t), gamma(t)) at
/// most 22 delta + d(x, hull) on a grid of t in [0, t_max].
RayLineReport verify_ray_line_approximation(const Space& space, const BoundarySubset& C,
                                            const Point& x, std::size_t probes,
                                            double t_max = 10.0, double step = 0.25);

}  // namespace gcb
