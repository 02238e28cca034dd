#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gcb/entropy.hpp"
#include "gcb/space.hpp"

namespace gcb {

/// A weight f of the class used to build distances between geodesic lines:
/// continuous, positive, even, unit mass, finite first moment C_f.
class WeightFunction {
 public:
  enum class Tag { ExpHalf, Custom };

  /// f(s) = e^{-|s|} / 2, C_f = 2.
  static WeightFunction exp_half();
  /// Checks the four conditions on a grid; throws InvalidWeight on failure.
  static WeightFunction custom(std::function<double(double)> density);

  Tag tag() const { return tag_; }
  double operator()(double s) const;
  /// C_f = integral of 2|s| f(s).
  double first_moment() const { return moment_; }
  /// Integral of 2|s| f(s) over |s| > P.
  double tail_moment(double P) const;
  /// Integral of f(s) over |s| > P.
  double tail_mass(double P) const;
  /// Smallest P (on a 1/4 grid) with tail_moment(P) + d * tail_mass(P) < bound.
  double truncation(double d, double bound) const;

 private:
  struct Table;

  Tag tag_ = Tag::ExpHalf;
  std::function<double(double)> density_;
  double moment_ = 2.0;
  std::shared_ptr<const Table> table_;
};

/// Integral of d(gamma(s), gamma'(s)) f(s) ds to within tol.
double f_distance(const Space& space, const GeodesicLine& a, const GeodesicLine& b,
                  const WeightFunction& f, double tol);

struct DynamicalDistance {
  double grid_max = 0.0;  // max of f(Phi_t a, Phi_t b) over the t-grid
  double slack = 0.0;     // Lipschitz allowance for the gaps of the grid
  double value() const { return grid_max + slack; }
};

/// max over t in [0, T] of f(Phi_t a, Phi_t b). The t-grid step is
/// min(0.25, tol) but never below 1/1024.
DynamicalDistance f_dynamical_distance(const Space& space, const GeodesicLine& a,
                                       const GeodesicLine& b, const WeightFunction& f, double T,
                                       double tol);

struct LineFamily {
  std::vector<GeodesicLine> lines;
  Point anchor;
  double anchor_radius = 0.0;
  double mesh = 0.0;
  double depth = 0.0;  // generation depth T_gen
};

struct FamilyOptions {
  /// Trees: length of the backward direction words; defaults to ceil(T_gen).
  std::optional<int> backward_depth;
};

/// Lines through `anchor` at time 0. Trees: one line per pair of direction
/// words (forward of length ceil(T_gen), backward as configured) leaving the
/// anchor vertex by different edges, continued by child 0. Hyperbolic plane
/// and Euclidean plane: one line per forward angle on a grid of step <= mesh.
LineFamily generate_line_family(const Space& space, const Point& anchor, double mesh, double T_gen,
                                const FamilyOptions& options = {});

/// Union of the point families over a mesh sample of B(center, R).
LineFamily generate_ball_family(const Space& space, const Point& center, double R, double mesh,
                                double T_gen, const FamilyOptions& options = {});

/// Default quadrature tolerance for covering computations.
inline constexpr double kCoverTolerance = 1.0 / 64.0;

/// Greedy r-cover of `lines` under the certified f^T value, scanning in the
/// given order. Returns the indices of the chosen lines.
std::vector<std::size_t> cover_lines(const Space& space, std::span<const GeodesicLine> lines,
                                     const WeightFunction& f, double r, double T,
                                     double tol = kCoverTolerance);

/// Greedy f^T cover counts of the family for every T.
GrowthSeries flow_covering_growth(const Space& space, const LineFamily& family,
                                  const WeightFunction& f, double r, std::span<const double> T_list,
                                  double tol = kCoverTolerance);

struct KeyLemmaReport {
  std::vector<GrowthSeries> series;  // one per base line
  std::vector<double> slopes;
  double max_slope = 0.0;
  bool holds = false;
};

/// For each base line gamma and each T, counts an r-cover of the lines of a
/// perturbation family lying in the f^T-ball of radius r2 about gamma, and
/// checks that the fitted growth slope is at most 0.05. The perturbations join
/// a mesh sample of B(gamma(0), r2) to a mesh sample of B(gamma(T), r2); in
/// trees they join vertex pairs and branch over every short tail.
KeyLemmaReport verify_key_lemma(const Space& space, std::span<const GeodesicLine> gammas,
                                const WeightFunction& f, double r, double r2,
                                std::span<const double> T_list, double mesh);

struct RecurrenceReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  bool holds = false;
};

/// For lines with d(gamma(0), x) <= R checks d(x, gamma(2R + 1)) > R, x the
/// family anchor.
RecurrenceReport verify_no_recurrence(const Space& space, const LineFamily& family, double R);

}  // namespace gcb
