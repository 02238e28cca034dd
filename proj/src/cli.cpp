#include "gcb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>

#include "gcb/boundary_sets.hpp"
#include "gcb/error.hpp"
#include "gcb/flow.hpp"
#include "gcb/hyperbolicity.hpp"
#include "gcb/nets.hpp"

namespace gcb::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::Entropy, "entropy"},   {Task::SphereEntropy, "sphere-entropy"},
    {Task::Volume, "volume"},     {Task::Minkowski, "minkowski"},
    {Task::Flow, "flow"},         {Task::Relative, "relative"},
    {Task::Delta, "delta"},       {Task::Verify, "verify"},
};

constexpr const char* kChecks[] = {"chain",     "propagation", "entropy-bound", "four-point",
                                   "shadow-ball", "ray-line",  "no-recurrence", "key-lemma"};

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::Validation, message);
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorCode::Parse, "unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) invalid(std::string(key) + " must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) invalid(std::string(key) + " must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) invalid(std::string(key) + " must be a string");
  return v.get<std::string>();
}

SpaceConfig parse_space(const json& j) {
  if (!j.is_object()) invalid("space must be an object");
  reject_unknown(j, {"model", "branching", "dim", "graph", "base_vertex", "packing", "delta_hint", "sample_cap"},
                 "space");
  SpaceConfig s;
  if (!j.contains("model")) invalid("space.model is required");
  s.model = text(j, "model");
  if (s.model != "tree" && s.model != "hyperbolic" && s.model != "euclidean" && s.model != "graph") {
    invalid("space.model must be tree, hyperbolic, euclidean or graph");
  }
  if (j.contains("branching")) s.branching = integer(j, "branching");
  if (s.model == "tree" && s.branching < 2) invalid("branching must be >= 2");
  if (j.contains("dim")) s.dim = integer(j, "dim");
  if (s.model == "euclidean" && s.dim < 1) invalid("dim must be >= 1");
  if (j.contains("graph")) s.graph = text(j, "graph");
  if (s.model == "graph" && s.graph.empty()) invalid("graph models need an edge-list path in 'graph'");
  if (j.contains("base_vertex")) {
    const int b = integer(j, "base_vertex");
    if (b < 0) invalid("base_vertex must be nonnegative");
    s.base_vertex = static_cast<std::size_t>(b);
  }
  if (j.contains("packing")) {
    const json& p = j.at("packing");
    if (!p.is_object()) invalid("packing must be an object");
    reject_unknown(p, {"P0", "r0"}, "space.packing");
    if (!p.contains("P0") || !p.contains("r0")) invalid("packing needs P0 and r0");
    PackingParams pp{number(p, "P0"), number(p, "r0")};
    if (!(pp.P0 >= 1.0) || !(pp.r0 > 0.0)) invalid("packing needs P0 >= 1 and r0 > 0");
    s.packing = pp;
  }
  if (j.contains("delta_hint")) {
    const double d = number(j, "delta_hint");
    if (!(d >= 0.0)) invalid("delta_hint must be nonnegative");
    s.delta_hint = d;
  }
  if (j.contains("sample_cap")) {
    const int c = integer(j, "sample_cap");
    if (c < 1) invalid("sample_cap must be positive");
    s.sample_cap = static_cast<std::size_t>(c);
  }
  return s;
}

Window parse_window(const json& j) {
  if (j.is_string()) {
    const auto p = j.get<std::string>();
    if (p == "upper-half") return {};
    if (p == "all") return Window::all();
    invalid("window must be upper-half, all or [lo, hi]");
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    const double lo = j[0].get<double>();
    const double hi = j[1].get<double>();
    if (!(lo <= hi)) invalid("window needs lo <= hi");
    return Window::range(lo, hi);
  }
  invalid("window must be upper-half, all or [lo, hi]");
}

json window_json(const Window& w) {
  if (w.policy == "range") return json::array({w.lo, w.hi});
  return w.policy;
}

/// Uniform doubles from the raw engine output, independent of the standard
/// library's distribution implementations.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
};

bool boundary_model(const Space& space) {
  return space.kind() == ModelKind::RegularTree || space.kind() == ModelKind::HyperbolicPlane;
}

BoundarySubset full_boundary(const Space& space) {
  if (space.kind() == ModelKind::RegularTree) return BoundarySubset::all_ends(space.parameter());
  if (space.kind() == ModelKind::HyperbolicPlane) {
    return BoundarySubset::arcs({{0.0, 2.0 * std::numbers::pi}});
  }
  throw Error(ErrorCode::UnsupportedBoundary, space.name() + " has no boundary subsets");
}

std::string csv_of(const GrowthSeries& s) {
  std::ostringstream out;
  write_csv(out, s);
  return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Verification checks
// ---------------------------------------------------------------------------

json check_chain(const Space& space, std::uint64_t seed) {
  Rng rng(seed);
  const auto pool = space.sample_region(Ball{space.basepoint(), 4.0}, 0.5);
  std::size_t violations = 0;
  constexpr std::size_t kRegions = 50;
  for (std::size_t k = 0; k < kRegions; ++k) {
    const Point& c = pool[rng.index(pool.size())];
    const double R = 1.0 + rng.uniform();
    const double r = 0.5 + 0.5 * rng.uniform();
    const auto sample = space.sample_region(Ball{c, R}, r / 2.0);
    if (!verify_pack_cov_chain(space, sample, r, c).holds) ++violations;
  }
  return {{"name", "chain"}, {"holds", violations == 0}, {"regions", kRegions}, {"violations", violations}};
}

json check_propagation(const Space& space) {
  const double r0 = space.packing()->r0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  for (double R : {2.0, 3.0, 4.0, 5.0}) {
    for (double f : {0.5, 0.75, 1.0, 1.5, 2.0}) {
      ++pairs;
      if (!verify_packing_propagation(space, R, f * r0).holds) ++violations;
    }
  }
  return {{"name", "propagation"}, {"holds", violations == 0}, {"pairs", pairs}, {"violations", violations}};
}

json check_entropy_bound(const Space& space, const std::vector<double>& Ts) {
  const auto est = fit_entropy(covering_growth(space, space.basepoint(), space.packing()->r0, Ts));
  const auto rep = verify_entropy_upper_bound(space, est);
  return {{"name", "entropy-bound"}, {"holds", rep.holds}, {"slope", rep.slope}, {"bound", rep.bound}};
}

json check_four_point(const Space& space, std::uint64_t seed) {
  const auto sample = space.sample_region(Ball{space.basepoint(), 4.0}, 1.0);
  const double model = resolve_delta(space);
  const auto e = estimate_delta(space, sample, seed);
  return {{"name", "four-point"},        {"holds", e.delta <= model + 1e-9},
          {"delta_model", model},        {"delta_sample", e.delta},
          {"quadruples", e.quadruples},  {"exhaustive", e.exhaustive}};
}

json check_shadow_ball(const Space& space) {
  std::vector<BoundaryPoint> probes;
  BoundaryPoint z;
  double T = 0.0;
  double r = 0.0;
  if (space.kind() == ModelKind::RegularTree) {
    const int q = space.parameter();
    z = tree::End({}, tree::Word(1, '\0'));
    std::string w(5, '\0');
    for (bool more = true; more;) {
      probes.emplace_back(tree::End(w, tree::Word(1, '\0')));
      more = false;
      for (std::size_t i = w.size(); i-- > 0;) {
        const int limit = i == 0 ? q + 1 : q;
        if (w[i] + 1 < limit) {
          ++w[i];
          more = true;
          break;
        }
        w[i] = 0;
      }
    }
    T = 4.0;
    r = 1.0;
  } else {
    z = IdealPoint{0.0};
    for (int k = 0; k < 64; ++k) probes.emplace_back(IdealPoint{2.0 * std::numbers::pi * k / 64.0});
    T = 5.0;
    r = 0.5;
  }
  const auto rep = verify_shadow_ball_lemma(space, z, space.basepoint(), T, r, probes, resolve_delta(space));
  return {{"name", "shadow-ball"},
          {"holds", rep.holds},
          {"probes", rep.probes},
          {"ball_violations", rep.ball_violations},
          {"shadow_violations", rep.shadow_violations}};
}

json check_ray_line(const Space& space) {
  const auto C = full_boundary(space);
  const auto rep = verify_ray_line_approximation(space, C, hull_basepoint(space, C), 20);
  return {{"name", "ray-line"},
          {"holds", rep.holds},
          {"checked", rep.checked},
          {"max_deviation", rep.max_deviation},
          {"bound", rep.bound}};
}

json check_no_recurrence(const Space& space, double angle_mesh) {
  constexpr double R = 2.0;
  FamilyOptions opts;
  opts.backward_depth = 2;
  const double mesh = space.kind() == ModelKind::RegularTree ? 1.0 : 0.5;
  LineFamily fam = generate_ball_family(space, space.basepoint(), R, mesh, 2.0 * R + 1.0, opts);
  if (space.kind() != ModelKind::RegularTree) {
    // Finer directions through each sampled point.
    LineFamily fine;
    fine.anchor = fam.anchor;
    for (const auto& p : space.sample_region(Ball{space.basepoint(), R}, mesh)) {
      auto part = generate_line_family(space, p, angle_mesh, 2.0 * R + 1.0);
      fine.lines.insert(fine.lines.end(), part.lines.begin(), part.lines.end());
    }
    fam.lines = std::move(fine.lines);
  }
  const auto rep = verify_no_recurrence(space, fam, R);
  return {{"name", "no-recurrence"}, {"holds", rep.holds}, {"checked", rep.checked}, {"violations", rep.violations}};
}

json check_key_lemma(const Space& space) {
  const auto fam = generate_line_family(space, space.basepoint(), 0.7, 2.0);
  const std::size_t n = std::min<std::size_t>(5, fam.lines.size());
  std::vector<GeodesicLine> gammas(fam.lines.begin(), fam.lines.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> Ts;
  for (int T = 4; T <= 10; ++T) Ts.push_back(T);
  const auto rep = verify_key_lemma(space, gammas, WeightFunction::exp_half(), 1.0, 2.0, Ts, 0.5);
  return {{"name", "key-lemma"}, {"holds", rep.holds}, {"lines", n}, {"max_slope", rep.max_slope}};
}

std::vector<std::string> default_checks(const Space& space) {
  std::vector<std::string> out{"chain"};
  if (space.packing()) {
    out.push_back("propagation");
    out.push_back("entropy-bound");
  }
  if (boundary_model(space)) {
    out.push_back("four-point");
    out.push_back("shadow-ball");
    out.push_back("ray-line");
  }
  if (space.kind() != ModelKind::MetricGraph &&
      !(space.kind() == ModelKind::Euclidean && space.parameter() > 2)) {
    out.push_back("no-recurrence");
  }
  return out;
}

}  // namespace

const char* to_string(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "?";
}

std::vector<double> TGrid::values() const {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config must be a JSON object");
  reject_unknown(j,
                 {"space", "task", "r", "T", "weight", "subset", "tau", "mesh", "window", "flow",
                  "relative_series", "checks", "seed"},
                 "config");
  RunConfig c;
  if (!j.contains("task")) invalid("task is required");
  const std::string task = text(j, "task");
  const auto it = std::find_if(std::begin(kTaskNames), std::end(kTaskNames),
                               [&](const auto& p) { return task == p.second; });
  if (it == std::end(kTaskNames)) invalid("unknown task '" + task + "'");
  c.task = it->first;
  if (j.contains("subset")) c.subset = text(j, "subset");
  if (c.task == Task::Relative && !c.subset) invalid("relative task requires a boundary subset file in 'subset'");

  if (!j.contains("space")) invalid("space is required");
  c.space = parse_space(j.at("space"));

  if (j.contains("r")) c.r = number(j, "r");
  if (!(c.r > 0.0)) invalid("r must be positive");

  if (j.contains("T")) {
    const json& t = j.at("T");
    if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() || !t[2].is_number()) {
      invalid("T must be [lo, hi, step]");
    }
    c.T = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
  } else if (c.task == Task::Verify) {
    c.T = {2.0, 8.0, 1.0};
  } else {
    invalid("T is required");
  }
  if (!(c.T.step > 0.0) || !(c.T.lo >= 0.0) || !(c.T.hi >= c.T.lo)) {
    invalid("T grid must be nonempty with positive step");
  }

  if (j.contains("weight")) c.weight = text(j, "weight");
  if (c.weight != "exp-half") invalid("weight must be exp-half");
  if (j.contains("tau")) c.tau = number(j, "tau");
  if (!(c.tau >= 0.0)) invalid("tau must be nonnegative");
  if (j.contains("mesh")) c.mesh = number(j, "mesh");
  if (!(c.mesh >= 0.0)) invalid("mesh must be nonnegative");
  if (j.contains("window")) c.window = parse_window(j.at("window"));

  if (j.contains("flow")) {
    const json& f = j.at("flow");
    if (!f.is_object()) invalid("flow must be an object");
    reject_unknown(f, {"mesh", "depth", "backward_depth"}, "flow");
    if (f.contains("mesh")) c.flow.mesh = number(f, "mesh");
    if (!(c.flow.mesh > 0.0)) invalid("flow.mesh must be positive");
    if (f.contains("depth")) {
      c.flow.depth = number(f, "depth");
      if (!(*c.flow.depth >= 0.0)) invalid("flow.depth must be nonnegative");
    }
    if (f.contains("backward_depth")) {
      c.flow.backward_depth = integer(f, "backward_depth");
      if (*c.flow.backward_depth < 0) invalid("flow.backward_depth must be nonnegative");
    }
  }

  if (j.contains("relative_series")) c.relative_series = text(j, "relative_series");
  if (c.relative_series != "covering" && c.relative_series != "minkowski" &&
      c.relative_series != "measure" && c.relative_series != "flow") {
    invalid("relative_series must be covering, minkowski, measure or flow");
  }

  if (j.contains("checks")) {
    const json& ch = j.at("checks");
    if (!ch.is_array()) invalid("checks must be an array of names");
    for (const auto& v : ch) {
      if (!v.is_string()) invalid("checks must be an array of names");
      const auto name = v.get<std::string>();
      if (std::find(std::begin(kChecks), std::end(kChecks), name) == std::end(kChecks)) {
        invalid("unknown check '" + name + "'");
      }
      c.checks.push_back(name);
    }
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      invalid("seed must be a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json space{{"model", c.space.model}};
  if (c.space.model == "tree") space["branching"] = c.space.branching;
  if (c.space.model == "euclidean") space["dim"] = c.space.dim;
  if (c.space.model == "graph") {
    space["graph"] = c.space.graph;
    space["base_vertex"] = c.space.base_vertex;
  }
  if (c.space.packing) space["packing"] = {{"P0", c.space.packing->P0}, {"r0", c.space.packing->r0}};
  if (c.space.delta_hint) space["delta_hint"] = *c.space.delta_hint;
  if (c.space.sample_cap) space["sample_cap"] = *c.space.sample_cap;

  json out{{"space", space},
           {"task", to_string(c.task)},
           {"r", c.r},
           {"T", json::array({c.T.lo, c.T.hi, c.T.step})},
           {"weight", c.weight}};
  if (c.subset) out["subset"] = *c.subset;
  out["tau"] = c.tau;
  out["mesh"] = c.mesh;
  out["window"] = window_json(c.window);
  json flow{{"mesh", c.flow.mesh}};
  if (c.flow.depth) flow["depth"] = *c.flow.depth;
  if (c.flow.backward_depth) flow["backward_depth"] = *c.flow.backward_depth;
  out["flow"] = flow;
  out["relative_series"] = c.relative_series;
  if (!c.checks.empty()) out["checks"] = c.checks;
  out["seed"] = c.seed;
  return out;
}

Space build_space(const SpaceConfig& c) {
  Space s = c.model == "tree"         ? Space::regular_tree(c.branching)
            : c.model == "hyperbolic" ? Space::hyperbolic_plane()
            : c.model == "euclidean"  ? Space::euclidean(c.dim)
                                      : Space::metric_graph(MetricGraph::load(c.graph), c.base_vertex);
  if (c.packing) s = s.with_packing(*c.packing);
  if (c.delta_hint) s = s.with_delta_hint(*c.delta_hint);
  if (c.sample_cap) s = s.with_sample_cap(*c.sample_cap);
  return s;
}

RunResult run(const RunConfig& c) {
  const Space space = build_space(c.space);
  const std::string task = to_string(c.task);
  const auto Ts = c.T.values();
  RunResult result;

  if (c.task == Task::Delta) {
    const double mesh = c.mesh > 0.0 ? c.mesh : c.r;
    const auto sample = space.sample_region(Ball{space.basepoint(), c.T.hi}, mesh);
    const auto e = estimate_delta(space, sample, c.seed);
    json report{{"task", task},
                {"delta", e.delta},
                {"quadruples", e.quadruples},
                {"seed", e.seed},
                {"exhaustive", e.exhaustive},
                {"sample_size", sample.size()},
                {"config", to_json(c)}};
    result.artifacts.push_back({"delta_report.json", dump(report)});
    result.summary = "task=delta slope=nan residual=nan";
    return result;
  }

  if (c.task == Task::Verify) {
    const auto names = c.checks.empty() ? default_checks(space) : c.checks;
    json checks = json::array();
    bool holds = true;
    for (const auto& name : names) {
      json entry;
      if ((name == "propagation" || name == "entropy-bound") && !space.packing()) {
        invalid("check '" + name + "' needs space.packing");
      }
      if (name == "chain") entry = check_chain(space, c.seed);
      if (name == "propagation") entry = check_propagation(space);
      if (name == "entropy-bound") entry = check_entropy_bound(space, Ts);
      if (name == "four-point") entry = check_four_point(space, c.seed);
      if (name == "shadow-ball") entry = check_shadow_ball(space);
      if (name == "ray-line") entry = check_ray_line(space);
      if (name == "no-recurrence") entry = check_no_recurrence(space, c.flow.mesh);
      if (name == "key-lemma") entry = check_key_lemma(space);
      holds = holds && entry.at("holds").get<bool>();
      checks.push_back(std::move(entry));
    }
    json report{{"task", task}, {"holds", holds}, {"checks", checks}, {"config", to_json(c)}};
    result.artifacts.push_back({"verify_report.json", dump(report)});
    result.status = holds ? kExitOk : kExitFailed;
    result.summary = "task=verify slope=nan residual=nan";
    return result;
  }

  GrowthSeries series;
  const Point& x = space.basepoint();
  const double depth = c.flow.depth.value_or(c.T.hi);
  switch (c.task) {
    case Task::Entropy:
      series = covering_growth(space, x, c.r, Ts, c.mesh);
      break;
    case Task::SphereEntropy:
      series = sphere_covering_growth(space, x, c.r, Ts, c.mesh);
      break;
    case Task::Volume:
      series = measure_growth(space, x, Ts);
      break;
    case Task::Minkowski: {
      const auto C = c.subset ? BoundarySubset::load(*c.subset) : full_boundary(space);
      series = relative_minkowski_growth(space, C, x, Ts);
      break;
    }
    case Task::Flow: {
      FamilyOptions opts;
      opts.backward_depth = c.flow.backward_depth;
      const auto fam = generate_line_family(space, x, c.flow.mesh, depth, opts);
      series = flow_covering_growth(space, fam, WeightFunction::exp_half(), c.r, Ts);
      break;
    }
    case Task::Relative: {
      const auto C = BoundarySubset::load(*c.subset);
      const Point hx = hull_basepoint(space, C);
      if (c.relative_series == "covering") {
        series = relative_covering_growth(space, C, hx, c.r, Ts, c.tau, c.mesh);
      } else if (c.relative_series == "minkowski") {
        series = relative_minkowski_growth(space, C, hx, Ts);
      } else if (c.relative_series == "measure") {
        series = c.mesh > 0.0 ? relative_measure_growth(space, C, hx, c.tau, Ts, c.mesh)
                              : relative_measure_growth(space, C, hx, c.tau, Ts);
      } else {
        RelativeFlowOptions opts;
        opts.depth = depth;
        opts.backward_depth = c.flow.backward_depth;
        opts.angle_mesh = c.flow.mesh;
        series = relative_flow_growth(space, C, hx, WeightFunction::exp_half(), c.r, Ts, opts);
      }
      break;
    }
    default:
      break;
  }

  const auto est = fit_entropy(series, c.window);
  json estimate{{"task", task},
                {"kind", to_string(series.kind)},
                {"r", series.r},
                {"slope", est.slope},
                {"window", json::array({est.window_lo, est.window_hi})},
                {"residual", est.residual},
                {"config", to_json(c)}};
  result.artifacts.push_back({task + "_series.csv", csv_of(series)});
  result.artifacts.push_back({task + "_estimate.json", dump(estimate)});
  result.summary = "task=" + task + " slope=" + format_number(est.slope) +
                   " residual=" + format_number(est.residual);
  return result;
}

void write_artifacts(const RunResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& a : result.artifacts) {
    const auto path = std::filesystem::path(dir) / a.name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Configuration, "cannot write " + path.string());
    out << a.contents;
  }
}

int compare(const std::string& a, const std::string& b, double eps, double T_eps,
            std::ostream& out) {
  auto read = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
    return read_csv(in);
  };
  const auto rep = check_asymptotic_equivalence(read(a), read(b), eps, T_eps);
  out << "max_deviation=" << format_number(rep.max_deviation) << " compared=" << rep.compared
      << (rep.holds ? " pass" : " fail") << "\n";
  return rep.holds ? kExitOk : kExitFailed;
}

}  // namespace gcb::cli
