#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gcb/boundary_sets.hpp"
#include "gcb/tree.hpp"

namespace gcb::detail {

/// A boundary subset bound to RegularTree(q). State 0 reads the root letter;
/// the automaton is pruned so every live state has a live successor.
class TreeHull {
 public:
  TreeHull(const BoundarySubset& C, int q);

  int q() const { return q_; }
  int next(int s, int c) const { return s < 0 ? -1 : next_[s][c]; }
  int out_degree(int s) const;
  /// State after reading w from the root, -1 when no end of C lies below w.
  int state(const tree::Word& w) const;
  bool has_two_ends() const { return two_ends_; }
  /// Highest hull vertex: the longest common prefix of C.
  const tree::Word& top() const { return top_; }

  /// End of C below w (in state s) that always takes the smallest letter.
  tree::End min_end(tree::Word w, int s) const;
  /// An end of C not below w, preferring the nearest branch point.
  std::optional<tree::End> end_outside(const tree::Word& w) const;
  bool contains(const tree::End& e) const;

  double distance(const tree::Point& p) const;
  tree::Point projection(const tree::Point& p) const;
  /// A line with both ends in C through the hull point a, anchored at a.
  tree::Line line_through(const tree::Point& a) const;

  /// counts[L][s]: number of length-L words readable from state s.
  std::vector<std::vector<double>> path_counts(int max_len) const;

  /// Ends of C seen from the vertex x through each vertex at distance L whose
  /// shadow meets C, with the first step's direction (child letter or
  /// tree::kFromParent). Deterministic order.
  std::vector<std::pair<int, tree::End>> rays(const tree::Word& x, int L) const;

  /// Number of vertices at distance L from x whose shadow from x meets C.
  double shadow_count(const tree::Word& x, int L,
                      const std::vector<std::vector<double>>& counts) const;

 private:
  int q_;
  std::vector<std::vector<int>> next_;
  bool two_ends_ = false;
  tree::Word top_;
};

/// A finite union of closed arcs of the circle at infinity, viewed from
/// points of the hyperbolic plane.
class CircleHull {
 public:
  explicit CircleHull(const BoundarySubset& C);

  /// Arcs as seen from y: (start, length) in visual angle.
  std::vector<std::pair<double, double>> visual_arcs(const hyp::Vec3& y) const;
  /// Widest pair of C seen from y, in visual angles, and its angular gap.
  std::pair<std::pair<double, double>, double> widest_pair(const hyp::Vec3& y) const;
  /// Point of C farthest from the visual angle u seen from y (visual angle).
  double farthest_from(const hyp::Vec3& y, double u) const;

  double distance(const hyp::Vec3& y) const;
  /// Converts a visual angle at y back to the angle at the origin.
  static double from_visual(const hyp::Vec3& y, double phi);
  static double to_visual(const hyp::Vec3& y, double theta);

  /// Points of C spaced at most `step` apart along each arc, in original angles.
  std::vector<double> sample(double step) const;
  bool contains(double theta) const;
  bool has_two_points() const;
  const std::vector<std::pair<double, double>>& arcs() const { return arcs_; }

 private:
  std::vector<std::pair<double, double>> arcs_;
};

}  // namespace gcb::detail
