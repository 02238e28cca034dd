// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcb/boundary_sets.hpp"
#include "gcb/cli.hpp"
#include "gcb/entropy.hpp"
#include "gcb/flow.hpp"
#include "gcb/nets.hpp"
#include "gcb/parallel.hpp"
#include "oracles.hpp"

using namespace gcb;

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLog3 = 1.0986122886681098;
constexpr double kPi = std::numbers::pi;

const auto kExp = WeightFunction::exp_half();

std::vector<double> grid(double lo, double hi, double step = 1.0) {
  std::vector<double> out;
  for (double t = lo; t <= hi + 1e-9; t += step) out.push_back(t);
  return out;
}

double slope(const GrowthSeries& s, double lo, double hi) { return fit_entropy(s, Window::range(lo, hi)).slope; }

/// Least-squares slope of log(value) against T for a closed-form series.
double oracle_slope(const std::vector<double>& T, const std::function<double(double)>& value) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (double t : T) {
    const double y = std::log(value(t));
    st += t, sy += y, stt += t * t, sty += t * y;
  }
  const double n = static_cast<double>(T.size());
  return (n * sty - st * sy) / (n * stt - st * st);
}

double spread(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi - *lo;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ",") + format_number(std::round(x * 1e4) / 1e4);
  return out;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void criterion(int id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body([&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); });
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

Point random_point(const Space& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (space.kind() == ModelKind::RegularTree) {
    const int depth = 1 + static_cast<int>(rng() % 4);
    tree::Word w;
    for (int i = 0; i < depth; ++i) w.push_back(static_cast<char>(rng() % (i == 0 ? 3 : 2)));
    return tree::canonical(w, u(rng));
  }
  if (space.kind() == ModelKind::HyperbolicPlane) return hyp_point(3.0 * u(rng), 2.0 * kPi * u(rng));
  return euc_point({6.0 * u(rng) - 3.0, 6.0 * u(rng) - 3.0});
}

GeodesicLine random_line(const Space& space, std::mt19937_64& rng) {
  for (;;) {
    const auto x = random_point(space, rng);
    const auto y = random_point(space, rng);
    if (space.distance(x, y) > 1e-3) return space.extend_to_line(x, y);
  }
}

/// Exhaustive packing constant of RegularTree(2) at scale 1 over vertices and
/// edge midpoints of B(o, 3).
double tree_packing_constant() {
  const auto tree2 = Space::regular_tree(2);
  const oracle::ExplicitTree t(2, 3);
  std::vector<Point> pts;
  for (const auto& w : t.ball(3)) {
    pts.push_back(tree_vertex(w));
    if (!w.empty()) pts.push_back(tree::canonical(w, 0.5));
  }
  oracle::Matrix d(pts.size(), std::vector<double>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) d[i][j] = tree2.distance(pts[i], pts[j]);
  return static_cast<double>(oracle::max_separated_exhaustive(d, 2.0));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::uint64_t artifact_hash(const cli::RunResult& r) {
  std::string all = r.summary;
  for (const auto& a : r.artifacts) all += a.name + '\0' + a.contents + '\0';
  return fnv1a(all);
}

}  // namespace

int main() {
  const auto tree2 = Space::regular_tree(2);
  const auto tree3 = Space::regular_tree(3);
  const auto h2 = Space::hyperbolic_plane().with_delta_hint(kLog2);
  const auto e2 = Space::euclidean(2);

  GrowthSeries tree_cover;
  criterion(1, [&](auto elapsed) {
    const auto T = grid(2, 12);
    tree_cover = covering_growth(tree2, tree2.basepoint(), 0.5, T);
    const double s = fit_entropy(tree_cover).slope;
    const double o = oracle_slope(grid(7, 12), [](double t) { return 3.0 * (std::pow(2.0, t) - 1.0); });
    const double secs = elapsed();
    report(1, std::abs(s - kLog2) <= 0.05 && secs < 60.0,
           "slope " + join({s}) + " oracle " + join({o}) + " target log 2, " + seconds(secs));
  });

  GrowthSeries h2_cover;
  criterion(2, [&](auto elapsed) {
    const auto T = grid(2, 10);
    h2_cover = covering_growth(h2, h2.basepoint(), 1.0, T);
    const double s = fit_entropy(h2_cover).slope;
    const double o = oracle_slope(grid(6, 10), [](double t) { return 2.0 * kPi * (std::cosh(t) - 1.0); });
    const double secs = elapsed();
    report(2, std::abs(s - 1.0) <= 0.1 && secs < 120.0,
           "slope " + join({s}) + " area oracle " + join({o}) + " target 1, " + seconds(secs));
  });

  criterion(3, [&](auto elapsed) {
    const auto T = grid(10, 100, 10);
    const auto o = e2.basepoint();
    const auto family = generate_line_family(e2, o, 0.05, 100.0);
    const std::vector<double> s{fit_entropy(covering_growth(e2, o, 1.0, T)).slope,
                                fit_entropy(measure_growth(e2, o, T)).slope,
                                fit_entropy(flow_covering_growth(e2, family, kExp, 0.5, T)).slope};
    const bool pass = std::all_of(s.begin(), s.end(), [](double x) { return std::abs(x) < 0.05; });
    report(3, pass, "covering,volume,flow slopes " + join(s) + " over T 10..100, " + seconds(elapsed()));
  });

  criterion(4, [&](auto elapsed) {
    const auto T = grid(2, 12);
    const auto o = tree2.basepoint();
    FamilyOptions opts;
    opts.backward_depth = 2;
    const auto family = generate_line_family(tree2, o, 1.0, 12.0, opts);
    const std::vector<double> s{
        slope(tree_cover, 6, 12), slope(sphere_covering_growth(tree2, o, 0.5, T), 6, 12),
        slope(measure_growth(tree2, o, T), 6, 12),
        slope(relative_minkowski_growth(tree2, BoundarySubset::all_ends(2), o, T), 6, 12),
        slope(flow_covering_growth(tree2, family, kExp, 0.5, T), 6, 12)};
    const bool near = std::all_of(s.begin(), s.end(), [](double x) { return std::abs(x - kLog2) <= 0.1; });
    report(4, near && spread(s) <= 0.1,
           "covering,sphere,volume,minkowski,flow " + join(s) + " spread " + join({spread(s)}) + ", " +
               seconds(elapsed()));
  });

  criterion(5, [&](auto elapsed) {
    const auto T = grid(2, 8);
    const auto o = h2.basepoint();
    const auto family = generate_line_family(h2, o, 1e-4, 8.0);
    const std::vector<double> s{
        slope(h2_cover, 4, 8), slope(measure_growth(h2, o, T), 4, 8),
        slope(relative_minkowski_growth(h2, BoundarySubset::arcs({{0.0, 2.0 * kPi}}), o, T), 4, 8),
        slope(flow_covering_growth(h2, family, kExp, 1.0, grid(4, 8)), 4, 8)};
    const double secs = elapsed();
    report(5, spread(s) <= 0.15 && secs < 600.0,
           "covering,volume,minkowski,flow " + join(s) + " spread " + join({spread(s)}) + ", " + seconds(secs));
  });

  criterion(6, [&](auto elapsed) {
    const std::array<int, 2> letters{0, 1};
    const auto C = BoundarySubset::letter_ends(letters);
    const auto x = hull_basepoint(tree3, C);
    const auto T = grid(2, 12);
    RelativeFlowOptions opt;
    opt.depth = 12;
    opt.backward_depth = 2;
    const std::vector<double> rel{slope(relative_covering_growth(tree3, C, x, 0.5, T, 1.0), 6, 12),
                                  slope(relative_minkowski_growth(tree3, C, x, T), 6, 12),
                                  slope(relative_measure_growth(tree3, C, x, 1.0, T), 6, 12),
                                  slope(relative_flow_growth(tree3, C, x, kExp, 0.5, T, opt), 6, 12)};
    const double ambient = slope(covering_growth(tree3, tree3.basepoint(), 0.5, grid(2, 10)), 6, 10);
    const bool near = std::all_of(rel.begin(), rel.end(), [](double v) { return std::abs(v - kLog2) <= 0.1; });
    const double gap = ambient - *std::max_element(rel.begin(), rel.end());
    report(6, near && std::abs(ambient - kLog3) <= 0.05 && gap >= 0.3,
           "relative covering,minkowski,measure,flow " + join(rel) + " ambient " + join({ambient}) + " gap " +
               join({gap}) + ", " + seconds(elapsed()));
  });

  criterion(7, [&](auto elapsed) {
    // Declared packing constants: exhaustive for the tree, area ratios
    // |B(4)| / |B(1)| for the hyperbolic and Euclidean planes.
    const double tree_P0 = tree_packing_constant();
    const double h2_P0 = std::floor((std::cosh(4.0) - 1.0) / (std::cosh(1.0) - 1.0));
    const std::vector<nlohmann::ordered_json> configs{
        {{"space", {{"model", "tree"}, {"branching", 2}, {"packing", {{"P0", tree_P0}, {"r0", 1}}}}},
         {"task", "verify"}},
        {{"space", {{"model", "hyperbolic"}, {"delta_hint", kLog2}, {"packing", {{"P0", h2_P0}, {"r0", 1}}}}},
         {"task", "verify"}},
        {{"space", {{"model", "euclidean"}, {"dim", 2}, {"packing", {{"P0", 16}, {"r0", 1}}}}},
         {"task", "verify"}}};
    bool pass = true;
    std::string detail;
    for (const auto& cfg : configs) {
      const auto result = cli::run(cli::parse_config(cfg));
      const auto rep = nlohmann::json::parse(result.artifacts.front().contents);
      detail += std::string(cfg["space"]["model"]) + "[";
      for (const auto& check : rep["checks"]) {
        detail += check["name"].get<std::string>() + (check["holds"].get<bool>() ? "+" : "-") + " ";
      }
      detail.back() = ']';
      detail += ' ';
      pass = pass && result.status == cli::kExitOk && rep["holds"].get<bool>();
    }
    report(7, pass, detail + seconds(elapsed()));
  });

  criterion(8, [&](auto elapsed) {
    constexpr double tol = 1e-6;
    std::mt19937_64 rng(8);
    std::size_t bound_fail = 0, sym_fail = 0, tri_fail = 0;
    double worst_tri = 0.0;
    for (const Space* s : {&tree2, &h2, &e2}) {
      std::vector<GeodesicLine> pool;
      for (int i = 0; i < 500; ++i) {
        const auto a = random_line(*s, rng);
        const auto b = random_line(*s, rng);
        const double ab = f_distance(*s, a, b, kExp, tol);
        const double d0 = s->distance(s->eval(a, 0.0), s->eval(b, 0.0));
        if (ab > d0 + kExp.first_moment() + tol || d0 > ab + tol) ++bound_fail;
        if (ab != f_distance(*s, b, a, kExp, tol)) ++sym_fail;
        if (pool.size() < 600) pool.insert(pool.end(), {a, b});
      }
      for (int i = 0; i < 200; ++i) {
        const auto& a = pool[3 * i];
        const auto& b = pool[3 * i + 1];
        const auto& c = pool[3 * i + 2];
        const double excess =
            f_distance(*s, a, c, kExp, tol) - f_distance(*s, a, b, kExp, tol) - f_distance(*s, b, c, kExp, tol);
        worst_tri = std::max(worst_tri, excess);
        if (excess > 3e-6) ++tri_fail;
      }
    }
    report(8, bound_fail == 0 && sym_fail == 0 && tri_fail == 0,
           "bound failures " + std::to_string(bound_fail) + " asymmetric " + std::to_string(sym_fail) +
               " triangle failures " + std::to_string(tri_fail) + " (max excess " + format_number(worst_tri) +
               "), " + seconds(elapsed()));
  });

  criterion(9, [&](auto elapsed) {
    const auto T = grid(4, 10);
    std::vector<double> worst;
    bool pass = true;
    for (const Space* s : {&tree2, &h2}) {
      const double mesh = s->kind() == ModelKind::RegularTree ? 1.0 : 0.7;
      const auto fam = generate_line_family(*s, s->basepoint(), mesh, 2.0);
      const std::vector<GeodesicLine> gammas(fam.lines.begin(), fam.lines.begin() + 5);
      const auto rep = verify_key_lemma(*s, gammas, kExp, 1.0, 2.0, T, 0.5);
      worst.push_back(rep.max_slope);
      pass = pass && rep.holds && rep.slopes.size() == 5 && rep.max_slope <= 0.05;
    }
    report(9, pass, "max slope tree,H2 " + join(worst) + ", " + seconds(elapsed()));
  });

  criterion(10, [&](auto elapsed) {
    const std::vector<nlohmann::ordered_json> configs{
        {{"space", {{"model", "tree"}, {"branching", 2}}}, {"task", "entropy"}, {"r", 0.5}, {"T", {2, 12, 1}}},
        {{"space", {{"model", "hyperbolic"}}}, {"task", "entropy"}, {"r", 1}, {"T", {2, 8, 1}}, {"seed", 11}},
        {{"space", {{"model", "tree"}, {"branching", 2}}}, {"task", "verify"}, {"seed", 12345}}};
    bool pass = true;
    std::string detail;
    for (const auto& cfg : configs) {
      const auto config = cli::parse_config(cfg);
      set_thread_count(1);
      const auto a = artifact_hash(cli::run(config));
      set_thread_count(4);
      const auto b = artifact_hash(cli::run(config));
      set_thread_count(0);
      const auto c = artifact_hash(cli::run(config));
      pass = pass && a == b && b == c;
      char buf[24];
      std::snprintf(buf, sizeof buf, "%016llx ", static_cast<unsigned long long>(a));
      detail += buf;
    }
    report(10, pass, "artifact hashes " + detail + seconds(elapsed()));
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
