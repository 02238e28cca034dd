#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcb/space.hpp"

namespace gcb {

enum class SeriesKind { BallCover, SphereCover, BallMeasure, BoundaryCover, FlowCover };

const char* to_string(SeriesKind kind);

struct GrowthSample {
  double T = 0.0;
  double value = 0.0;
  /// Lower witness for covering counts (greedy 2r-separated subset size); 0 if unused.
  double lower = 0.0;
};

struct GrowthSeries {
  SeriesKind kind = SeriesKind::BallCover;
  double r = 0.0;
  std::vector<GrowthSample> samples;
};

struct Window {
  /// "upper-half" (T >= midpoint of the sampled range), "all", or "range".
  std::string policy = "upper-half";
  double lo = 0.0;  // used by "range"
  double hi = 0.0;

  static Window range(double lo, double hi) { return {"range", lo, hi}; }
  static Window all() { return {"all", 0.0, 0.0}; }
};

struct EntropyEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual = 0.0;
  bool converged = false;
  GrowthSeries series;
};

inline constexpr double kUnconvergedResidual = 0.5;

/// Greedy r-cover counts of B(x, T). `mesh` defaults to r / 2.
GrowthSeries covering_growth(const Space& space, const Point& x, double r,
                             std::span<const double> T_list, double mesh = 0.0);
/// Same with the spheres S(x, T).
GrowthSeries sphere_covering_growth(const Space& space, const Point& x, double r,
                                    std::span<const double> T_list, double mesh = 0.0);
/// Natural measure of B(x, T).
GrowthSeries measure_growth(const Space& space, const Point& x, std::span<const double> T_list);

/// Least-squares slope of log(value) against T over the window.
EntropyEstimate fit_entropy(const GrowthSeries& series, const Window& window = {});

struct EquivalenceReport {
  double max_deviation = 0.0;
  std::optional<double> first_violation;
  std::size_t compared = 0;
  bool holds = false;
};

/// Compares (1/T) log f(T) and (1/T) log g(T) on their common grid beyond T_eps.
EquivalenceReport check_asymptotic_equivalence(const GrowthSeries& f, const GrowthSeries& g,
                                               double eps, double T_eps);

struct UpperBoundReport {
  double slope = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// slope <= log(1 + P0) / r0 + 0.05.
UpperBoundReport verify_entropy_upper_bound(const Space& space, const EntropyEstimate& estimate);

struct HomogeneityReport {
  double H = 0.0;      // smallest H with 1/H <= mu(B(x, r)) <= H over the centers
  double H_2r = 0.0;   // the same at scale 2r
  double min_measure = 0.0;
  double max_measure = 0.0;
};

HomogeneityReport verify_homogeneity(const Space& space, double r, std::span<const Point> centers);

/// CSV with header "T,value,log_value".
void write_csv(std::ostream& out, const GrowthSeries& series);
/// Reads a CSV written by write_csv; the kind is left as BallCover and r as 0.
GrowthSeries read_csv(std::istream& in);

/// {kind, r, slope, window:[lo,hi], residual}.
nlohmann::ordered_json to_json(const EntropyEstimate& estimate);

/// Locale-independent shortest round-trip formatting; infinities become "inf".
std::string format_number(double v);

}  // namespace gcb
