#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

// Geometry of the regular metric tree in which every vertex has degree q+1 and
// every edge has length 1.
//
// Vertices are named by their reduced word from the root vertex. Letters are
// stored as raw char values: the first letter ranges over [0, q] (the q+1
// neighbours of the root), later letters over [0, q-1] (the children).

namespace gcb::tree {

using Word = std::string;

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

/// An eventually periodic infinite word read from the root: prefix, then the
/// period repeated forever. Stored in reduced form (primitive period, shortest
/// prefix) so that two ends are equal iff their representations are.
class End {
 public:
  End() : period_(1, '\0') {}
  End(Word prefix, Word period);

  char letter(std::size_t i) const;
  Word head(std::size_t n) const;

  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }

  friend bool operator==(const End&, const End&) = default;

 private:
  Word prefix_;
  Word period_;
};

/// Length of the longest common prefix; kInfinite when the ends coincide.
std::size_t common_prefix(const End& a, const End& b);
std::size_t common_prefix(std::string_view word, const End& e);
std::size_t common_prefix(std::string_view a, std::string_view b);

/// A point of the tree: the vertex `word`, moved a distance `back` in [0, 1)
/// toward its parent. The root has back == 0.
struct Point {
  Word word;
  double back = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

bool lex_less(const Point& a, const Point& b);

/// Snaps offsets within 1e-12 of a vertex onto that vertex.
Point canonical(Word word, double back);

inline double depth(const Point& p) { return static_cast<double>(p.word.size()) - p.back; }

double distance(const Point& a, const Point& b);

/// Depth of the highest point of the geodesic [a, b].
double meeting_depth(const Point& a, const Point& b);

/// Point of the root path of `p` at depth h, 0 <= h <= depth(p).
Point ancestor_at(const Point& p, double h);

/// Point on the ray from the root toward `e` at depth h >= 0.
Point on_end(const End& e, double h);

/// Point at arc length s from `from` along the geodesic to `to`.
Point along(const Point& from, const Point& to, double s);

/// A bi-infinite geodesic given by its two ends. The line passes through the
/// vertex at depth `top` = common_prefix(minus, plus); its position p = t + shift
/// lies on the ray toward `plus` at depth top + p when p >= 0 and on the ray
/// toward `minus` at depth top - p otherwise.
struct Line {
  End minus;
  End plus;
  std::size_t top = 0;
  double shift = 0.0;
};

/// Throws std::invalid_argument when the ends coincide.
Line line_between(End minus, End plus);

Point eval(const Line& line, double t);

/// Position p with eval(line, p - shift) == point; assumes the point lies on the line.
double line_position(const Line& line, const Point& point);

/// Reparametrizes `line` so that time 0 sits at `point` (assumed on the line).
Line anchored_at(Line line, const Point& point);

/// Arrival direction at a vertex during a walk.
inline constexpr int kNoArrival = -2;
inline constexpr int kFromParent = -1;

/// Non-backtracking walk from vertex `start`. At each vertex the admissible
/// neighbours, excluding the one we arrived from, are ordered as children by
/// ascending index followed by the parent; `choices` selects among them. When
/// the choices run out the walk keeps taking choice 0, which descends through
/// child-0 edges forever. Returns the end of the walk as seen from the root.
End walk_end(const Word& start, int arrival, std::string_view choices, int q);

/// Number of neighbours of any vertex.
inline int degree(int q) { return q + 1; }

/// Extends the segment [x, y] beyond y using choice 0 at every vertex.
End continue_beyond(const Point& x, const Point& y, int q);

/// Distance between a point at depth `da` on the root ray toward one end and a
/// point at depth `db` on the root ray toward another, given the common prefix
/// length of the two ends.
inline double ray_points_distance(double da, double db, std::size_t lcp) {
  const double l = lcp == kInfinite ? std::numeric_limits<double>::infinity()
                                    : static_cast<double>(lcp);
  if (std::min(da, db) <= l) return da > db ? da - db : db - da;
  return da + db - 2.0 * l;
}

}  // namespace gcb::tree
