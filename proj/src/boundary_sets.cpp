#include "gcb/boundary_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "boundary_hull.hpp"
#include "gcb/error.hpp"
#include "gcb/hyperbolicity.hpp"
#include "gcb/nets.hpp"
#include "gcb/parallel.hpp"
#include "model.hpp"

namespace gcb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHullEps = 1e-9;

void require_boundary_model(const Space& space) {
  if (space.kind() != ModelKind::RegularTree && space.kind() != ModelKind::HyperbolicPlane) {
    throw Error(ErrorCode::UnsupportedBoundary, space.name() + " has no supported boundary subsets");
  }
}

detail::TreeHull tree_hull(const Space& space, const BoundarySubset& C) {
  detail::TreeHull hull(C, space.parameter());
  if (!hull.has_two_ends()) {
    throw Error(ErrorCode::DegenerateSubset, "the hull needs at least two boundary points");
  }
  return hull;
}

detail::CircleHull circle_hull(const BoundarySubset& C) {
  detail::CircleHull hull(C);
  if (!hull.has_two_points()) {
    throw Error(ErrorCode::DegenerateSubset, "the hull needs at least two boundary points");
  }
  return hull;
}

const hyp::Vec3& hyp_coords(const Point& p) {
  return detail::expect<HypPoint>(p, "HyperbolicPlane").coords;
}

const tree::Point& tree_coords(const Point& p) {
  return detail::expect<tree::Point>(p, "RegularTree");
}

double outer_radius(const Region& region) {
  return std::visit(
      [](const auto& r) {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Annulus>) {
          return r.outer;
        } else {
          return r.radius;
        }
      },
      region);
}

std::vector<Point> order_by_distance(const Space& space, const Point& center,
                                     std::vector<Point> pts) {
  std::vector<double> d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d[i] = space.distance(center, pts[i]);
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (d[a] != d[b]) return d[a] < d[b];
    return space.coordinate_less(pts[a], pts[b]);
  });
  std::vector<Point> out;
  out.reserve(pts.size());
  for (std::size_t i : idx) out.push_back(std::move(pts[i]));
  return out;
}

/// Visits the edges near the tau-neighbourhood of the hull that meet the
/// region, with the parameter intervals lying in both.
template <class Visit>
void for_each_hull_interval(const detail::TreeHull& hull, const tree::Point& c, const Region& region,
                            double tau, Visit&& visit) {
  const double limit = std::max(tau, hull.distance(c)) + 1.0 + 1e-12;
  detail::for_each_tree_edge(
      c, outer_radius(region), hull.q(),
      [&](const tree::Word& w, double dl, double du) {
        const double hw = hull.distance({w, 0.0});
        const double hp = hull.distance({w.substr(0, w.size() - 1), 0.0});
        const auto near = detail::solve_range(detail::Piece{0.0, 1.0, hw, hp}, -1.0, tau);
        if (!near) return;
        const auto pieces = detail::tree_edge_pieces(c, w, dl, du);
        for (const auto& [a, b] : detail::region_intervals(pieces, region)) {
          const double lo = std::max(a, near->first);
          const double hi = std::min(b, near->second);
          if (lo <= hi) visit(w, lo, hi);
        }
      },
      [&](const tree::Word& w) { return hull.distance({w, 0.0}) <= limit; });
}

std::vector<Point> tree_hull_points(const Space& space, const detail::TreeHull& hull,
                                    const Region& region, double mesh, double tau) {
  const auto& c = tree_coords(region_center(region));
  const std::size_t cap = space.sample_cap();
  std::vector<tree::Point> pts;
  std::vector<double> params;
  for_each_hull_interval(hull, c, region, tau, [&](const tree::Word& w, double lo, double hi) {
    params.clear();
    detail::mesh_parameters(lo, hi, mesh, params);
    for (double t : params) pts.push_back(tree::canonical(w, t));
    if (pts.size() > 2 * cap) detail::throw_capacity(cap);
  });
  std::sort(pts.begin(), pts.end(), tree::lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() > cap) detail::throw_capacity(cap);
  return order_by_distance(space, region_center(region),
                           {std::make_move_iterator(pts.begin()), std::make_move_iterator(pts.end())});
}

/// Parameter intervals on which a line at distance d0 from the region center,
/// anchored at its closest point, stays inside the region.
std::vector<std::pair<double, double>> line_region_params(const Region& region, double d0) {
  auto reach = [&](double radius) {
    const double c = std::cosh(radius) / std::cosh(d0);
    return c >= 1.0 ? std::acosh(c) : -1.0;
  };
  double inner = 0.0;
  double outer = 0.0;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Ball>) {
          inner = -kInf;
          outer = r.radius;
        } else if constexpr (std::is_same_v<R, Sphere>) {
          inner = outer = r.radius;
        } else {
          inner = r.inner;
          outer = r.outer;
        }
      },
      region);
  const double to = reach(outer);
  if (to < 0.0) return {};
  const double ti = inner < d0 ? 0.0 : reach(inner);
  if (ti <= 0.0) return {{-to, to}};
  return {{-to, -ti}, {ti, to}};
}

std::vector<Point> circle_hull_points(const Space& space, const detail::CircleHull& hull,
                                      const Region& region, double mesh, double tau) {
  std::vector<Point> out;
  for (auto& p : space.sample_region(region, mesh)) {
    if (hull.distance(hyp_coords(p)) <= tau) out.push_back(std::move(p));
  }
  // Thin hulls: trace the lines joining arc endpoints, which lie in the hull.
  const Point& c = region_center(region);
  std::vector<double> ends;
  for (const auto& [a, len] : hull.arcs()) {
    ends.push_back(a);
    if (len > 0.0) ends.push_back(hyp::wrap_angle(a + len));
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  std::vector<double> params;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      const GeodesicLine line =
          space.model().line_from_boundary_pair(IdealPoint{ends[i]}, IdealPoint{ends[j]}, c);
      const double d0 = space.distance(c, space.eval(line, 0.0));
      for (const auto& [a, b] : line_region_params(region, d0)) {
        params.clear();
        detail::mesh_parameters(a, b, mesh, params);
        for (double t : params) out.push_back(space.eval(line, t));
      }
    }
  }
  if (out.size() > space.sample_cap()) detail::throw_capacity(space.sample_cap());
  std::sort(out.begin(), out.end(), [&](const Point& a, const Point& b) { return space.coordinate_less(a, b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return order_by_distance(space, c, std::move(out));
}

std::vector<Point> hull_points(const Space& space, const BoundarySubset& C, const Region& region,
                               double mesh, double tau) {
  require_boundary_model(space);
  if (!(mesh > 0.0)) throw Error(ErrorCode::Domain, "mesh must be positive");
  if (!(tau >= 0.0)) throw Error(ErrorCode::Domain, "tau must be nonnegative");
  if (space.kind() == ModelKind::RegularTree) {
    return tree_hull_points(space, tree_hull(space, C), region, mesh, tau);
  }
  return circle_hull_points(space, circle_hull(C), region, mesh, tau);
}

/// Greedy cover of sorted circle angles by arcs of half-width w.
double circle_cover_count(std::vector<double> angles, double w) {
  if (angles.empty()) return 0.0;
  if (w >= std::numbers::pi) return 1.0;
  std::sort(angles.begin(), angles.end());
  std::size_t start = 0;
  double widest = -1.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double prev = i == 0 ? angles.back() - kTwoPi : angles[i - 1];
    if (angles[i] - prev > widest) {
      widest = angles[i] - prev;
      start = i;
    }
  }
  const double first = angles[start];
  double last = first;
  double count = 1.0;
  for (std::size_t k = 1; k < angles.size(); ++k) {
    const double a = angles[(start + k) % angles.size()];
    const double ahead = hyp::wrap_angle(a - last);
    const double behind = hyp::wrap_angle(first - a);
    if (ahead <= w || behind <= w) continue;
    last = a;
    count += 1.0;
  }
  return count;
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundarySubset
// ---------------------------------------------------------------------------

BoundarySubset BoundarySubset::automaton(int alphabet,
                                         std::span<const std::array<int, 3>> transitions) {
  if (alphabet < 1) throw Error(ErrorCode::Validation, "automaton alphabet must be positive");
  int states = 1;
  for (const auto& [s, c, t] : transitions) {
    if (s < 0 || t < 0) throw Error(ErrorCode::Validation, "automaton states must be nonnegative");
    if (c < 0 || c >= alphabet) throw Error(ErrorCode::Validation, "automaton letter outside the alphabet");
    states = std::max({states, s + 1, t + 1});
  }
  BoundarySubset C;
  C.kind_ = Kind::TreeAutomaton;
  C.alphabet_ = alphabet;
  C.next_.assign(static_cast<std::size_t>(states), std::vector<int>(static_cast<std::size_t>(alphabet), -1));
  for (const auto& [s, c, t] : transitions) {
    int& slot = C.next_[s][c];
    if (slot >= 0 && slot != t) throw Error(ErrorCode::Validation, "automaton is not deterministic");
    slot = t;
  }
  return C;
}

BoundarySubset BoundarySubset::all_ends(int q) {
  if (q < 2) throw Error(ErrorCode::Domain, "branching must be at least 2");
  std::vector<int> letters(static_cast<std::size_t>(q) + 1);
  std::iota(letters.begin(), letters.end(), 0);
  return letter_ends(letters);
}

BoundarySubset BoundarySubset::letter_ends(std::span<const int> letters) {
  if (letters.empty()) throw Error(ErrorCode::DegenerateSubset, "letter set is empty");
  std::vector<std::array<int, 3>> tr;
  int alphabet = 0;
  for (int c : letters) {
    if (c < 0) throw Error(ErrorCode::Validation, "letters must be nonnegative");
    tr.push_back({0, c, 0});
    alphabet = std::max(alphabet, c + 1);
  }
  return automaton(alphabet, tr);
}

BoundarySubset BoundarySubset::ends(std::span<const tree::End> ends) {
  std::vector<tree::End> list(ends.begin(), ends.end());
  if (list.empty()) throw Error(ErrorCode::DegenerateSubset, "end set is empty");
  std::vector<tree::End> unique;
  for (auto& e : list) {
    if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(std::move(e));
  }
  // Below depth D every end has its own trie branch and is in its periodic part.
  std::size_t D = 0;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    D = std::max(D, unique[i].prefix().size());
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      D = std::max(D, tree::common_prefix(unique[i], unique[j]) + 1);
    }
  }
  std::map<std::pair<int, int>, int> edges;
  int states = 1;
  std::vector<std::array<int, 3>> tr;
  int alphabet = 0;
  for (const auto& e : unique) {
    int s = 0;
    for (std::size_t i = 0; i < D; ++i) {
      const int c = static_cast<unsigned char>(e.letter(i));
      alphabet = std::max(alphabet, c + 1);
      auto [it, fresh] = edges.try_emplace({s, c}, states);
      if (fresh) {
        tr.push_back({s, c, states});
        ++states;
      }
      s = it->second;
    }
    const int anchor = s;
    const std::size_t p = e.period().size();
    for (std::size_t i = 0; i < p; ++i) {
      const int c = static_cast<unsigned char>(e.letter(D + i));
      alphabet = std::max(alphabet, c + 1);
      const int t = i + 1 == p ? anchor : states++;
      tr.push_back({s, c, t});
      s = t;
    }
  }
  return automaton(alphabet, tr);
}

BoundarySubset BoundarySubset::arcs(std::vector<std::pair<double, double>> arcs) {
  if (arcs.empty()) throw Error(ErrorCode::DegenerateSubset, "arc set is empty");
  BoundarySubset C;
  C.kind_ = Kind::CircleArcs;
  for (const auto& [a, b] : arcs) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorCode::Validation, "arc endpoints must be finite");
    const double len = b - a >= kTwoPi ? kTwoPi : hyp::wrap_angle(b - a);
    C.arcs_.emplace_back(hyp::wrap_angle(a), len);
  }
  return C;
}

BoundarySubset BoundarySubset::angles(std::span<const double> thetas) {
  std::vector<std::pair<double, double>> a;
  for (double t : thetas) a.emplace_back(t, t);
  return arcs(std::move(a));
}

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorCode::Parse, "unknown boundary subset key '" + key + "'");
    }
  }
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing boundary subset key '") + key + "'");
  return j.at(key);
}

tree::Word letters_of(const json& j) {
  tree::Word w;
  for (const auto& v : j) {
    const int c = v.get<int>();
    if (c < 0 || c > 127) throw Error(ErrorCode::Validation, "end letter out of range");
    w.push_back(static_cast<char>(c));
  }
  return w;
}

}  // namespace

BoundarySubset BoundarySubset::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("boundary subset: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "boundary subset must be a JSON object");
  try {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "automaton") {
      check_keys(j, {"type", "alphabet", "transitions", "accepting_cycles"});
      if (j.contains("accepting_cycles") && !j.at("accepting_cycles").get<bool>()) {
        throw Error(ErrorCode::Validation, "only accepting_cycles automata are supported");
      }
      std::vector<std::array<int, 3>> tr;
      for (const auto& t : field(j, "transitions")) {
        if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::Parse, "transitions are [state, letter, state]");
        tr.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
      }
      return automaton(field(j, "alphabet").get<int>(), tr);
    }
    if (type == "arcs") {
      check_keys(j, {"type", "arcs"});
      std::vector<std::pair<double, double>> a;
      for (const auto& arc : field(j, "arcs")) {
        if (!arc.is_array() || arc.size() != 2) throw Error(ErrorCode::Parse, "arcs are [start, end]");
        a.emplace_back(arc[0].get<double>(), arc[1].get<double>());
      }
      return arcs(std::move(a));
    }
    if (type == "angles") {
      check_keys(j, {"type", "angles"});
      return angles(field(j, "angles").get<std::vector<double>>());
    }
    if (type == "ends") {
      check_keys(j, {"type", "ends"});
      std::vector<tree::End> list;
      for (const auto& e : field(j, "ends")) {
        check_keys(e, {"prefix", "period"});
        list.emplace_back(e.contains("prefix") ? letters_of(e.at("prefix")) : tree::Word{},
                          letters_of(field(e, "period")));
      }
      return ends(list);
    }
    throw Error(ErrorCode::Parse, "unknown boundary subset type '" + type + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("boundary subset: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Validation, e.what());
  }
}

BoundarySubset BoundarySubset::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool BoundarySubset::contains(const Space& space, const BoundaryPoint& z) const {
  require_boundary_model(space);
  if (space.kind() == ModelKind::RegularTree) {
    return detail::TreeHull(*this, space.parameter())
        .contains(detail::expect_boundary<tree::End>(z, "RegularTree"));
  }
  return detail::CircleHull(*this).contains(detail::expect_boundary<IdealPoint>(z, "HyperbolicPlane").theta);
}

// ---------------------------------------------------------------------------
// Hulls
// ---------------------------------------------------------------------------

double hull_distance(const Space& space, const BoundarySubset& C, const Point& y) {
  require_boundary_model(space);
  if (space.kind() == ModelKind::RegularTree) return tree_hull(space, C).distance(tree_coords(y));
  return circle_hull(C).distance(hyp_coords(y));
}

HullWitness hull_witness(const Space& space, const BoundarySubset& C, const Point& y) {
  require_boundary_model(space);
  if (space.kind() == ModelKind::RegularTree) {
    const auto hull = tree_hull(space, C);
    return {hull.line_through(hull.projection(tree_coords(y))), 0.0};
  }
  const auto hull = circle_hull(C);
  const hyp::Vec3& v = hyp_coords(y);
  const auto [pair, gap] = hull.widest_pair(v);
  const IdealPoint zm{detail::CircleHull::from_visual(v, pair.first)};
  const IdealPoint zp{detail::CircleHull::from_visual(v, pair.second)};
  return {space.model().line_from_boundary_pair(zm, zp, y), 0.0};
}

Point hull_basepoint(const Space& space, const BoundarySubset& C) {
  require_boundary_model(space);
  if (space.kind() == ModelKind::RegularTree) return tree::Point{tree_hull(space, C).top(), 0.0};
  return space.eval(hull_witness(space, C, space.basepoint()).line, 0.0);
}

HullSample qc_hull_sample(const Space& space, const BoundarySubset& C, const Region& region,
                          double mesh, double tau) {
  HullSample out{region, hull_points(space, C, region, mesh, tau), {}, tau};
  out.witnesses.reserve(out.points.size());
  if (space.kind() == ModelKind::RegularTree) {
    const auto hull = tree_hull(space, C);
    for (const auto& p : out.points) {
      out.witnesses.push_back({hull.line_through(hull.projection(tree_coords(p))), 0.0});
    }
  } else {
    for (const auto& p : out.points) out.witnesses.push_back(hull_witness(space, C, p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relative entropies
// ---------------------------------------------------------------------------

GrowthSeries relative_covering_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                      double r, std::span<const double> T_list, double tau,
                                      double mesh) {
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "scale must be positive");
  if (mesh <= 0.0) mesh = r / 2.0;
  GrowthSeries s{SeriesKind::BallCover, r, std::vector<GrowthSample>(T_list.size())};
  parallel_for(T_list.size(), [&](std::size_t i) {
    const auto pts = hull_points(space, C, Ball{x, T_list[i]}, mesh, tau);
    s.samples[i].T = T_list[i];
    s.samples[i].value = pts.empty() ? 0.0 : static_cast<double>(greedy_cover(space, pts, r, x).cardinality());
  });
  return s;
}

GrowthSeries relative_minkowski_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                       std::span<const double> T_list) {
  require_boundary_model(space);
  GrowthSeries s{SeriesKind::BoundaryCover, 0.0, std::vector<GrowthSample>(T_list.size())};
  for (double T : T_list) {
    if (!(T >= 0.0)) throw Error(ErrorCode::Domain, "T must be nonnegative");
  }
  if (space.kind() == ModelKind::RegularTree) {
    const auto& v = tree_coords(x);
    if (v.back != 0.0) throw Error(ErrorCode::Domain, "tree Minkowski counts need a vertex basepoint");
    const detail::TreeHull hull(C, space.parameter());
    int kmax = 0;
    for (double T : T_list) kmax = std::max(kmax, static_cast<int>(std::ceil(T - 1e-9)));
    const auto counts = hull.path_counts(kmax);
    for (std::size_t i = 0; i < T_list.size(); ++i) {
      s.samples[i] = {T_list[i], hull.shadow_count(v.word, static_cast<int>(std::ceil(T_list[i] - 1e-9)), counts), 0.0};
    }
    return s;
  }
  const detail::CircleHull hull(C);
  const hyp::Vec3& v = hyp_coords(x);
  const auto visual = hull.visual_arcs(v);
  parallel_for(T_list.size(), [&](std::size_t i) {
    const double T = T_list[i];
    const double step = 2.0 * std::asin(std::exp(-(T + 2.0)));
    std::vector<double> angles;
    for (const auto& [a, len] : visual) {
      const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-9));
      for (std::size_t k = 0; k <= n; ++k) {
        angles.push_back(hyp::wrap_angle(a + (n == 0 ? 0.0 : len * static_cast<double>(k) / static_cast<double>(n))));
      }
    }
    const double w = 2.0 * std::asin(std::min(1.0, std::exp(-T)));
    s.samples[i] = {T, circle_cover_count(std::move(angles), w), 0.0};
  });
  return s;
}

GrowthSeries relative_measure_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                     double tau, std::span<const double> T_list, double mesh) {
  require_boundary_model(space);
  if (!(tau >= 0.0)) throw Error(ErrorCode::Domain, "tau must be nonnegative");
  GrowthSeries s{SeriesKind::BallMeasure, tau, std::vector<GrowthSample>(T_list.size())};
  if (space.kind() == ModelKind::RegularTree) {
    const auto hull = tree_hull(space, C);
    const auto& c = tree_coords(x);
    parallel_for(T_list.size(), [&](std::size_t i) {
      double total = 0.0;
      for_each_hull_interval(hull, c, Ball{x, T_list[i]}, tau,
                             [&](const tree::Word&, double lo, double hi) { total += hi - lo; });
      s.samples[i] = {T_list[i], total, 0.0};
    });
    return s;
  }
  if (!(mesh > 0.0)) throw Error(ErrorCode::Domain, "mesh must be positive");
  const auto hull = circle_hull(C);
  const hyp::Vec3& v = hyp_coords(x);
  parallel_for(T_list.size(), [&](std::size_t i) {
    const double T = T_list[i];
    const auto rings = static_cast<std::size_t>(std::ceil(T / mesh - 1e-9));
    double area = 0.0;
    for (std::size_t k = 0; k < rings; ++k) {
      const double lo = static_cast<double>(k) * mesh;
      const double width = std::min(mesh, T - lo);
      const double rho = lo + width / 2.0;
      const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(kTwoPi * std::sinh(rho) / mesh)));
      const double cell = (std::cosh(lo + width) - std::cosh(lo)) * kTwoPi / static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double phi = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        if (hull.distance(hyp::boost(v, hyp::from_polar(rho, phi))) <= tau) area += cell;
      }
    }
    s.samples[i] = {T, area, 0.0};
  });
  return s;
}

LineFamily generate_relative_family(const Space& space, const BoundarySubset& C, const Point& x,
                                    const RelativeFlowOptions& options) {
  require_boundary_model(space);
  if (hull_distance(space, C, x) > kHullEps) {
    throw Error(ErrorCode::Basepoint, "relative flow families need a basepoint on the hull");
  }
  const double R = options.anchor_radius.value_or(22.0 * resolve_delta(space));
  if (!(R >= 0.0)) throw Error(ErrorCode::Domain, "anchor radius must be nonnegative");
  LineFamily fam;
  fam.anchor = x;
  fam.anchor_radius = R;
  const std::size_t cap = space.sample_cap();

  if (space.kind() == ModelKind::RegularTree) {
    const auto hull = tree_hull(space, C);
    const auto& v = tree_coords(x);
    if (!(options.depth >= 0.0)) throw Error(ErrorCode::Domain, "generation depth must be nonnegative");
    const int depth = static_cast<int>(std::ceil(options.depth - 1e-9));
    const int nf = depth + 1;
    const int nb = options.backward_depth.value_or(std::max(1, depth));
    if (nb < 1) throw Error(ErrorCode::Domain, "backward depth must be positive");
    std::set<tree::Word> anchors;
    if (R == 0.0) {
      if (v.back != 0.0) throw Error(ErrorCode::Domain, "tree line families need a vertex anchor");
      anchors.insert(v.word);
    } else {
      detail::for_each_tree_edge(v, R, hull.q(), [&](const tree::Word& w, double dl, double du) {
        if (dl <= R && hull.distance({w, 0.0}) == 0.0) anchors.insert(w);
        const tree::Word parent = w.substr(0, w.size() - 1);
        if (du <= R && hull.distance({parent, 0.0}) == 0.0) anchors.insert(parent);
      });
      if (v.back == 0.0) anchors.insert(v.word);
    }
    fam.depth = options.depth;
    for (const auto& a : anchors) {
      const auto fwd = hull.rays(a, nf);
      const auto bwd = hull.rays(a, nb);
      if (static_cast<double>(fam.lines.size()) + static_cast<double>(fwd.size()) * static_cast<double>(bwd.size()) >
          static_cast<double>(cap)) {
        detail::throw_capacity(cap);
      }
      for (const auto& [fd, fe] : fwd) {
        for (const auto& [bd, be] : bwd) {
          if (fd == bd) continue;
          fam.lines.push_back(tree::anchored_at(tree::line_between(be, fe), tree::Point{a, 0.0}));
        }
      }
    }
    return fam;
  }

  if (!(options.angle_mesh > 0.0)) throw Error(ErrorCode::Domain, "angle mesh must be positive");
  const auto thetas = circle_hull(C).sample(options.angle_mesh);
  const double n = static_cast<double>(thetas.size());
  if (n * (n - 1.0) > static_cast<double>(cap)) detail::throw_capacity(cap);
  fam.depth = kInf;
  fam.mesh = options.angle_mesh;
  for (double a : thetas) {
    for (double b : thetas) {
      if (a == b) continue;
      GeodesicLine line = space.model().line_from_boundary_pair(IdealPoint{a}, IdealPoint{b}, x);
      if (space.distance(x, space.eval(line, 0.0)) <= R + 1e-12) fam.lines.push_back(std::move(line));
    }
  }
  return fam;
}

GrowthSeries relative_flow_growth(const Space& space, const BoundarySubset& C, const Point& x,
                                  const WeightFunction& f, double r,
                                  std::span<const double> T_list,
                                  const RelativeFlowOptions& options) {
  return flow_covering_growth(space, generate_relative_family(space, C, x, options), f, r, T_list);
}

RayLineReport verify_ray_line_approximation(const Space& space, const BoundarySubset& C,
                                            const Point& x, std::size_t probes, double t_max,
                                            double step) {
  require_boundary_model(space);
  if (!(step > 0.0) || !(t_max >= 0.0)) throw Error(ErrorCode::Domain, "grid must be nonnegative with positive step");
  RayLineReport rep;
  const double dx = hull_distance(space, C, x);
  rep.bound = 22.0 * resolve_delta(space) + dx;

  std::vector<std::pair<BoundaryPoint, GeodesicLine>> cases;
  if (space.kind() == ModelKind::RegularTree) {
    const auto hull = tree_hull(space, C);
    const auto& v = tree_coords(x);
    if (dx > kHullEps || v.back != 0.0) {
      throw Error(ErrorCode::Basepoint, "tree ray-line checks need a hull vertex basepoint");
    }
    const auto targets = hull.rays(v.word, 3);
    const auto partners = hull.rays(v.word, 1);
    const std::size_t m = std::min(probes, targets.size());
    for (std::size_t k = 0; k < m; ++k) {
      const auto& [dir, z] = targets[k * targets.size() / m];
      const auto it = std::find_if(partners.begin(), partners.end(),
                                   [&](const auto& p) { return p.first != dir; });
      if (it == partners.end()) continue;
      cases.emplace_back(z, tree::anchored_at(tree::line_between(it->second, z), v));
    }
  } else {
    const auto hull = circle_hull(C);
    const hyp::Vec3& v = hyp_coords(x);
    const auto thetas = hull.sample(1e-3);
    const std::size_t m = std::min(probes, thetas.size());
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = thetas[k * thetas.size() / m];
      const double partner = detail::CircleHull::from_visual(
          v, hull.farthest_from(v, detail::CircleHull::to_visual(v, theta)));
      if (std::abs(hyp::wrap_angle(partner - theta)) < 1e-12) continue;
      cases.emplace_back(IdealPoint{theta},
                         space.model().line_from_boundary_pair(IdealPoint{partner}, IdealPoint{theta}, x));
    }
  }
  for (const auto& [z, line] : cases) {
    ++rep.checked;
    for (double t = 0.0; t <= t_max + 1e-12; t += step) {
      rep.max_deviation = std::max(rep.max_deviation,
                                   space.distance(space.ray_point(x, z, t), space.eval(line, t)));
    }
  }
  rep.holds = rep.checked > 0 && rep.max_deviation <= rep.bound + kHullEps;
  return rep;
}

}  // namespace gcb
