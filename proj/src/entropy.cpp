#include "gcb/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcb/error.hpp"
#include "gcb/nets.hpp"
#include "gcb/parallel.hpp"

namespace gcb {

const char* to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::BallCover: return "ball-cover";
    case SeriesKind::SphereCover: return "sphere-cover";
    case SeriesKind::BallMeasure: return "ball-measure";
    case SeriesKind::BoundaryCover: return "boundary-cover";
    case SeriesKind::FlowCover: return "flow-cover";
  }
  return "unknown";
}

namespace {

void require_grid(std::span<const double> T_list) {
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (!(T_list[i] >= 0.0)) throw Error(ErrorCode::Domain, "T values must be nonnegative");
    if (i > 0 && !(T_list[i] > T_list[i - 1])) {
      throw Error(ErrorCode::Domain, "T values must be strictly increasing");
    }
  }
}

template <class MakeRegion>
GrowthSeries cover_series(const Space& space, const Point& x, double r, std::span<const double> T_list,
                          double mesh, SeriesKind kind, MakeRegion make_region) {
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "scale must be positive");
  require_grid(T_list);
  if (mesh <= 0.0) mesh = r / 2.0;
  GrowthSeries s{kind, r, std::vector<GrowthSample>(T_list.size())};
  parallel_for(T_list.size(), [&](std::size_t i) {
    const auto sample = space.sample_region(make_region(T_list[i]), mesh);
    const auto order = greedy_order(space, sample, x);
    s.samples[i].T = T_list[i];
    s.samples[i].value = static_cast<double>(greedy_scan(space, order, r, x).size());
    s.samples[i].lower = static_cast<double>(greedy_scan(space, order, 2.0 * r, x).size());
  });
  return s;
}

}  // namespace

GrowthSeries covering_growth(const Space& space, const Point& x, double r,
                             std::span<const double> T_list, double mesh) {
  return cover_series(space, x, r, T_list, mesh, SeriesKind::BallCover,
                      [&](double T) { return Region{Ball{x, T}}; });
}

GrowthSeries sphere_covering_growth(const Space& space, const Point& x, double r,
                                    std::span<const double> T_list, double mesh) {
  return cover_series(space, x, r, T_list, mesh, SeriesKind::SphereCover,
                      [&](double T) { return Region{Sphere{x, T}}; });
}

GrowthSeries measure_growth(const Space& space, const Point& x, std::span<const double> T_list) {
  require_grid(T_list);
  GrowthSeries s{SeriesKind::BallMeasure, 0.0, {}};
  for (double T : T_list) s.samples.push_back({T, space.ball_measure(x, T), 0.0});
  return s;
}

EntropyEstimate fit_entropy(const GrowthSeries& series, const Window& window) {
  if (series.samples.empty()) throw Error(ErrorCode::Fit, "empty series");
  double lo = 0.0;
  double hi = 0.0;
  const double tmin = series.samples.front().T;
  const double tmax = series.samples.back().T;
  if (window.policy == "upper-half") {
    lo = 0.5 * (tmin + tmax);
    hi = tmax;
  } else if (window.policy == "all") {
    lo = tmin;
    hi = tmax;
  } else if (window.policy == "range") {
    lo = window.lo;
    hi = window.hi;
  } else {
    throw Error(ErrorCode::Fit, "unknown window policy " + window.policy);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : series.samples) {
    if (s.T < lo - 1e-9 || s.T > hi + 1e-9) continue;
    if (!(s.value > 0.0)) throw Error(ErrorCode::Fit, "nonpositive value inside the fit window");
    pts.emplace_back(s.T, std::log(s.value));
  }
  if (pts.size() < 4) throw Error(ErrorCode::Fit, "fit window holds fewer than 4 samples");
  const double n = static_cast<double>(pts.size());
  double mt = 0.0;
  double my = 0.0;
  for (const auto& [t, y] : pts) {
    mt += t;
    my += y;
  }
  mt /= n;
  my /= n;
  double stt = 0.0;
  double sty = 0.0;
  for (const auto& [t, y] : pts) {
    stt += (t - mt) * (t - mt);
    sty += (t - mt) * (y - my);
  }
  if (stt <= 0.0) throw Error(ErrorCode::Fit, "fit window has no spread in T");
  EntropyEstimate est;
  est.slope = sty / stt;
  est.intercept = my - est.slope * mt;
  est.window_lo = pts.front().first;
  est.window_hi = pts.back().first;
  for (const auto& [t, y] : pts) {
    est.residual = std::max(est.residual, std::abs(y - (est.intercept + est.slope * t)));
  }
  est.converged = est.residual <= kUnconvergedResidual;
  est.series = series;
  return est;
}

EquivalenceReport check_asymptotic_equivalence(const GrowthSeries& f, const GrowthSeries& g,
                                               double eps, double T_eps) {
  EquivalenceReport rep;
  for (const auto& a : f.samples) {
    if (a.T < T_eps || a.T <= 0.0) continue;
    for (const auto& b : g.samples) {
      if (std::abs(a.T - b.T) > 1e-9) continue;
      if (!(a.value > 0.0 && b.value > 0.0)) {
        throw Error(ErrorCode::Alignment, "nonpositive value on the common grid");
      }
      const double dev = std::abs(std::log(a.value) - std::log(b.value)) / a.T;
      ++rep.compared;
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (dev > eps && !rep.first_violation) rep.first_violation = a.T;
    }
  }
  if (rep.compared == 0) throw Error(ErrorCode::Alignment, "series share no grid point beyond T_eps");
  rep.holds = !rep.first_violation.has_value();
  return rep;
}

UpperBoundReport verify_entropy_upper_bound(const Space& space, const EntropyEstimate& estimate) {
  const auto p = space.packing();
  if (!p) throw Error(ErrorCode::Configuration, "space declares no packing parameters");
  UpperBoundReport rep;
  rep.slope = estimate.slope;
  rep.bound = std::log(1.0 + p->P0) / p->r0;
  rep.holds = rep.slope <= rep.bound + 0.05;
  return rep;
}

HomogeneityReport verify_homogeneity(const Space& space, double r, std::span<const Point> centers) {
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "scale must be positive");
  if (centers.empty()) throw Error(ErrorCode::EmptyRegion, "no centers given");
  HomogeneityReport rep;
  rep.min_measure = std::numeric_limits<double>::infinity();
  double min2 = std::numeric_limits<double>::infinity();
  double max2 = 0.0;
  for (const auto& c : centers) {
    const double m = space.ball_measure(c, r);
    rep.min_measure = std::min(rep.min_measure, m);
    rep.max_measure = std::max(rep.max_measure, m);
    const double m2 = space.ball_measure(c, 2.0 * r);
    min2 = std::min(min2, m2);
    max2 = std::max(max2, m2);
  }
  rep.H = std::max(rep.max_measure, 1.0 / rep.min_measure);
  rep.H_2r = std::max(max2, 1.0 / min2);
  return rep;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const GrowthSeries& series) {
  out << "T,value,log_value\n";
  for (const auto& s : series.samples) {
    out << format_number(s.T) << ',' << format_number(s.value) << ','
        << format_number(s.value > 0.0 ? std::log(s.value) : -std::numeric_limits<double>::infinity())
        << '\n';
  }
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  double v = 0.0;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Parse, "bad number on line " + std::to_string(line));
  }
  return v;
}

}  // namespace

GrowthSeries read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "T,value,log_value") {
    throw Error(ErrorCode::Parse, "missing header T,value,log_value on line 1");
  }
  GrowthSeries s;
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw Error(ErrorCode::Parse, "expected 3 fields on line " + std::to_string(no));
    const std::string_view v(line);
    s.samples.push_back({parse_number(v.substr(0, c1), no), parse_number(v.substr(c1 + 1, c2 - c1 - 1), no), 0.0});
  }
  return s;
}

nlohmann::ordered_json to_json(const EntropyEstimate& e) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(e.series.kind);
  j["r"] = e.series.r;
  j["slope"] = e.slope;
  j["window"] = {e.window_lo, e.window_hi};
  j["residual"] = e.residual;
  return j;
}

}  // namespace gcb
