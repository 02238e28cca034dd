#include "gcb/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcb/error.hpp"
#include "gcb/parallel.hpp"
#include "model.hpp"
#include "neighbor_index.hpp"

namespace gcb {

// ---------------------------------------------------------------------------
// Weight functions
// ---------------------------------------------------------------------------

struct WeightFunction::Table {
  static constexpr double kStep = 1.0 / 64.0;
  static constexpr double kReach = 64.0;
  std::vector<double> mass;    // mass[k]: integral of f over |s| > k * kStep
  std::vector<double> moment;  // moment[k]: integral of 2|s| f over |s| > k * kStep
};

WeightFunction WeightFunction::exp_half() { return WeightFunction{}; }

WeightFunction WeightFunction::custom(std::function<double(double)> density) {
  using T = Table;
  const auto n = static_cast<std::size_t>(T::kReach / T::kStep);
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) * T::kStep;
    const double fp = density(s);
    const double fm = density(-s);
    if (!(fp > 0.0) || !(fm > 0.0) || !std::isfinite(fp) || !std::isfinite(fm)) {
      throw Error(ErrorCode::InvalidWeight, "weight must be positive and finite");
    }
    if (std::abs(fp - fm) > 1e-12 * std::max(1.0, fp)) {
      throw Error(ErrorCode::InvalidWeight, "weight must be even");
    }
    v[k] = fp;
  }
  auto table = std::make_shared<Table>();
  table->mass.assign(n + 1, 0.0);
  table->moment.assign(n + 1, 0.0);
  // Simpson per cell, both signs of s.
  constexpr double third = T::kStep / 3.0;
  for (std::size_t k = n; k-- > 0;) {
    const double s0 = static_cast<double>(k) * T::kStep;
    const double sm = s0 + 0.5 * T::kStep;
    const double s1 = s0 + T::kStep;
    const double vm = density(sm);
    table->mass[k] = table->mass[k + 1] + third * (v[k] + 4.0 * vm + v[k + 1]);
    table->moment[k] = table->moment[k + 1] + 2.0 * third * (s0 * v[k] + 4.0 * sm * vm + s1 * v[k + 1]);
  }
  if (std::abs(table->mass[0] - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidWeight, "weight must have unit mass");
  }
  if (2.0 * T::kReach * T::kReach * v[n] > 1e-6) {
    throw Error(ErrorCode::InvalidWeight, "weight must have a finite first moment");
  }
  WeightFunction w;
  w.tag_ = Tag::Custom;
  w.density_ = std::move(density);
  w.moment_ = table->moment[0];
  w.table_ = std::move(table);
  return w;
}

double WeightFunction::operator()(double s) const {
  if (tag_ == Tag::ExpHalf) return 0.5 * std::exp(-std::abs(s));
  return density_(s);
}

double WeightFunction::tail_moment(double P) const {
  P = std::max(P, 0.0);
  if (tag_ == Tag::ExpHalf) return 2.0 * (P + 1.0) * std::exp(-P);
  const auto k = static_cast<std::size_t>(std::floor(P / Table::kStep));
  return k < table_->moment.size() ? table_->moment[k] : 0.0;
}

double WeightFunction::tail_mass(double P) const {
  P = std::max(P, 0.0);
  if (tag_ == Tag::ExpHalf) return std::exp(-P);
  const auto k = static_cast<std::size_t>(std::floor(P / Table::kStep));
  return k < table_->mass.size() ? table_->mass[k] : 0.0;
}

double WeightFunction::truncation(double d, double bound) const {
  const double limit = tag_ == Tag::ExpHalf ? 800.0 : Table::kReach;
  for (double P = 0.25; P <= limit; P += 0.25) {
    if (tail_moment(P) + d * tail_mass(P) < bound) return P;
  }
  throw Error(ErrorCode::InvalidWeight, "weight tail too heavy for the requested tolerance");
}

// ---------------------------------------------------------------------------
// Distances between lines
// ---------------------------------------------------------------------------

namespace {

double start_gap(const Space& space, const GeodesicLine& a, const GeodesicLine& b) {
  return space.distance(space.eval(a, 0.0), space.eval(b, 0.0));
}

}  // namespace

double f_distance(const Space& space, const GeodesicLine& a, const GeodesicLine& b,
                  const WeightFunction& f, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::Domain, "tolerance must be positive");
  const double d0 = start_gap(space, a, b);
  double h = 1.0 / 64.0;
  const double P = std::ceil(f.truncation(d0, tol / 2.0) / h) * h;
  auto n = static_cast<std::size_t>(std::llround(2.0 * P / h));

  std::vector<double> g(n + 1);
  space.separation_profile(a, b, -P, h, g);
  double sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    sum += w * g[k] * f(-P + static_cast<double>(k) * h);
  }
  double estimate = sum * h;
  for (int level = 0; level < 12; ++level) {
    std::vector<double> mid(n);
    space.separation_profile(a, b, -P + h / 2.0, h, mid);
    double add = 0.0;
    for (std::size_t k = 0; k < n; ++k) add += mid[k] * f(-P + h / 2.0 + static_cast<double>(k) * h);
    sum += add;
    h /= 2.0;
    n *= 2;
    const double refined = sum * h;
    const bool done = std::abs(refined - estimate) / 3.0 < tol / 2.0;
    estimate = refined;
    if (done) break;
  }
  return estimate;
}

DynamicalDistance f_dynamical_distance(const Space& space, const GeodesicLine& a,
                                       const GeodesicLine& b, const WeightFunction& f, double T,
                                       double tol) {
  if (!(T >= 0.0)) throw Error(ErrorCode::Domain, "T must be nonnegative");
  if (!(tol > 0.0)) throw Error(ErrorCode::Domain, "tolerance must be positive");
  if (T == 0.0) return {f_distance(space, a, b, f, tol), 0.0};

  const double step = std::clamp(std::min(0.25, tol), 1.0 / 1024.0, 0.25);
  const auto M = static_cast<std::size_t>(std::ceil(T / step - 1e-9));
  const double h = T / static_cast<double>(M);
  const double d0 = start_gap(space, a, b);
  const auto K = static_cast<std::size_t>(std::ceil(f.truncation(d0 + 2.0 * T, tol / 2.0) / h));
  const double P = static_cast<double>(K) * h;
  const std::size_t N = 2 * K + M + 1;
  std::vector<double> g(N);
  space.separation_profile(a, b, -P, h, g);

  DynamicalDistance out;
  out.slack = 2.0 * h;
  if (f.tag() == WeightFunction::Tag::ExpHalf) {
    // Exact convolution of the piecewise-linear interpolant with e^{-|u|} / 2,
    // one causal and one anti-causal exponential recursion.
    const double decay = std::exp(-h);
    const double far = (-std::expm1(-h) - h * decay) / h;
    const double near = -std::expm1(-h) - far;
    std::vector<double> left(N, 0.0);
    std::vector<double> right(N, 0.0);
    for (std::size_t k = 1; k < N; ++k) left[k] = decay * left[k - 1] + far * g[k - 1] + near * g[k];
    for (std::size_t k = N - 1; k-- > 0;) right[k] = decay * right[k + 1] + far * g[k + 1] + near * g[k];
    for (std::size_t m = 0; m <= M; ++m) {
      out.grid_max = std::max(out.grid_max, 0.5 * (left[K + m] + right[K + m]));
    }
    return out;
  }
  std::vector<double> w(N);
  for (std::size_t m = 0; m <= M; ++m) {
    const double t = static_cast<double>(m) * h;
    double sum = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double wt = (k == 0 || k == N - 1) ? 0.5 : 1.0;
      sum += wt * g[k] * f(-P + static_cast<double>(k) * h - t);
    }
    out.grid_max = std::max(out.grid_max, sum * h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace {

void check_capacity(double count, std::size_t cap) {
  if (count > static_cast<double>(cap)) detail::throw_capacity(cap);
}

/// Advances an odometer whose first digit has `first` values and the rest `rest`.
bool next_word(std::string& w, int first, int rest) {
  for (std::size_t i = w.size(); i-- > 0;) {
    const int limit = i == 0 ? first : rest;
    if (static_cast<unsigned char>(w[i]) + 1 < limit) {
      ++w[i];
      return true;
    }
    w[i] = 0;
  }
  return false;
}

std::vector<GeodesicLine> tree_family(const Space& space, const tree::Point& x, double T_gen,
                                      const FamilyOptions& options) {
  if (x.back != 0.0) throw Error(ErrorCode::Domain, "tree line families need a vertex anchor");
  const int q = space.parameter();
  // One forward letter beyond T_gen: lines that split just after time T are
  // still f^T-separated through the weight tail.
  const int depth = std::max(0, static_cast<int>(std::ceil(T_gen - 1e-9)));
  const int nf = depth + 1;
  const int nb = options.backward_depth.value_or(depth);
  if (nb < 0) throw Error(ErrorCode::Domain, "backward depth must be nonnegative");
  check_capacity((q + 1.0) * std::pow(q, nf - 1) * std::pow(q, nb), space.sample_cap());

  const int children = x.word.empty() ? q + 1 : q;
  std::vector<GeodesicLine> lines;
  std::string fwd(static_cast<std::size_t>(nf), '\0');
  do {
    const int first = static_cast<unsigned char>(fwd[0]);
    const int arrival = first < children ? first : tree::kFromParent;
    const tree::End plus = tree::walk_end(x.word, tree::kNoArrival, fwd, q);
    std::string bwd(static_cast<std::size_t>(nb), '\0');
    do {
      const tree::End minus = tree::walk_end(x.word, arrival, bwd, q);
      lines.push_back(tree::anchored_at(tree::line_between(minus, plus), x));
    } while (next_word(bwd, q, q));
  } while (next_word(fwd, q + 1, q));
  return lines;
}

std::vector<GeodesicLine> angle_family(const Space& space, const Point& anchor, double mesh) {
  if (!(mesh > 0.0)) throw Error(ErrorCode::Domain, "mesh must be positive");
  const double n_real = std::ceil(2.0 * std::numbers::pi / mesh - 1e-9);
  check_capacity(n_real, space.sample_cap());
  const auto n = static_cast<std::size_t>(n_real);
  std::vector<GeodesicLine> lines;
  lines.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    if (space.kind() == ModelKind::HyperbolicPlane) {
      const hyp::Vec3& x = std::get<HypPoint>(anchor).coords;
      lines.push_back(HypLine{x, hyp::boost(x, {std::cos(phi), std::sin(phi), 0.0})});
    } else {
      lines.push_back(EucLine{std::get<EucPoint>(anchor).coords, {std::cos(phi), std::sin(phi)}});
    }
  }
  return lines;
}

}  // namespace

LineFamily generate_line_family(const Space& space, const Point& anchor, double mesh, double T_gen,
                                const FamilyOptions& options) {
  if (!(T_gen >= 0.0)) throw Error(ErrorCode::Domain, "generation depth must be nonnegative");
  space.distance(anchor, space.basepoint());
  LineFamily fam;
  fam.anchor = anchor;
  fam.mesh = mesh;
  fam.depth = T_gen;
  switch (space.kind()) {
    case ModelKind::RegularTree:
      fam.lines = tree_family(space, std::get<tree::Point>(anchor), T_gen, options);
      break;
    case ModelKind::HyperbolicPlane:
      fam.lines = angle_family(space, anchor, mesh);
      break;
    case ModelKind::Euclidean:
      if (space.parameter() == 1) {
        const auto& x = std::get<EucPoint>(anchor).coords;
        fam.lines = {EucLine{x, {1.0}}, EucLine{x, {-1.0}}};
      } else if (space.parameter() == 2) {
        fam.lines = angle_family(space, anchor, mesh);
      } else {
        throw Error(ErrorCode::UnsupportedModel, "line families need dimension 1 or 2");
      }
      break;
    case ModelKind::MetricGraph:
      throw Error(ErrorCode::UnsupportedModel, "metric graphs have no line families");
  }
  return fam;
}

LineFamily generate_ball_family(const Space& space, const Point& center, double R, double mesh,
                                double T_gen, const FamilyOptions& options) {
  LineFamily fam;
  fam.anchor = center;
  fam.anchor_radius = R;
  fam.mesh = mesh;
  fam.depth = T_gen;
  for (const Point& p : space.sample_region(Ball{center, R}, mesh)) {
    if (const auto* tp = std::get_if<tree::Point>(&p); tp && tp->back != 0.0) continue;
    auto part = generate_line_family(space, p, mesh, T_gen, options);
    check_capacity(static_cast<double>(fam.lines.size() + part.lines.size()), space.sample_cap());
    fam.lines.insert(fam.lines.end(), std::make_move_iterator(part.lines.begin()),
                     std::make_move_iterator(part.lines.end()));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Covering
// ---------------------------------------------------------------------------

std::vector<std::size_t> cover_lines(const Space& space, std::span<const GeodesicLine> lines,
                                     const WeightFunction& f, double r, double T, double tol) {
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "scale must be positive");
  std::vector<std::size_t> chosen;
  if (lines.empty()) return chosen;
  std::vector<Point> start(lines.size());
  std::vector<Point> end(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    start[i] = space.eval(lines[i], 0.0);
    end[i] = space.eval(lines[i], T);
  }
  auto index = detail::make_neighbor_index(space, r * (1.0 + 1e-9) + 1e-9, start[0]);
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    cand.clear();
    index->candidates(end[i], cand);
    std::sort(cand.begin(), cand.end());
    bool covered = false;
    for (std::size_t j : cand) {
      if (space.distance(end[i], end[j]) > r || space.distance(start[i], start[j]) > r) continue;
      if (f_dynamical_distance(space, lines[i], lines[j], f, T, tol).value() <= r) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      chosen.push_back(i);
      index->insert(i, end[i]);
    }
  }
  return chosen;
}

GrowthSeries flow_covering_growth(const Space& space, const LineFamily& family,
                                  const WeightFunction& f, double r, std::span<const double> T_list,
                                  double tol) {
  for (double T : T_list) {
    if (T > family.depth + 1e-9) {
      throw Error(ErrorCode::GenerationDepth, "T exceeds the family generation depth");
    }
  }
  GrowthSeries s{SeriesKind::FlowCover, r, std::vector<GrowthSample>(T_list.size())};
  parallel_for(T_list.size(), [&](std::size_t i) {
    s.samples[i].T = T_list[i];
    s.samples[i].value = static_cast<double>(cover_lines(space, family.lines, f, r, T_list[i], tol).size());
  });
  return s;
}

namespace {

constexpr int kTailLetters = 2;

/// Arrival direction at vertex v when coming from its neighbour w.
int arrival_from(const tree::Word& v, const tree::Word& w) {
  return w.size() < v.size() ? tree::kFromParent : static_cast<unsigned char>(w.back());
}

/// Lines through a point near gamma(0) and a point near gamma(T). In trees the
/// pair is joined through vertices and every tail of kTailLetters letters is
/// taken beyond both, so the family does not depend on vertex labels.
std::vector<GeodesicLine> perturbations(const Space& space, std::span<const Point> near_start,
                                        std::span<const Point> near_end) {
  std::vector<GeodesicLine> out;
  if (space.kind() != ModelKind::RegularTree) {
    for (const auto& p : near_start) {
      for (const auto& q : near_end) {
        if (space.distance(p, q) > 0.0) out.push_back(space.extend_to_line(p, q));
      }
    }
    return out;
  }
  const int branching = space.parameter();
  std::vector<std::string> tails;
  std::string w(kTailLetters, '\0');
  do {
    tails.push_back(w);
  } while (next_word(w, branching, branching));
  for (const auto& pp : near_start) {
    const auto& p = std::get<tree::Point>(pp);
    if (p.back != 0.0) continue;
    for (const auto& qq : near_end) {
      const auto& q = std::get<tree::Point>(qq);
      if (q.back != 0.0 || p.word == q.word) continue;
      const int at_p = arrival_from(p.word, tree::along(p, q, 1.0).word);
      const int at_q = arrival_from(q.word, tree::along(q, p, 1.0).word);
      for (const auto& back : tails) {
        const tree::End minus = tree::walk_end(p.word, at_p, back, branching);
        for (const auto& front : tails) {
          const tree::End plus = tree::walk_end(q.word, at_q, front, branching);
          out.push_back(tree::anchored_at(tree::line_between(minus, plus), p));
        }
      }
    }
  }
  return out;
}

}  // namespace

KeyLemmaReport verify_key_lemma(const Space& space, std::span<const GeodesicLine> gammas,
                                const WeightFunction& f, double r, double r2,
                                std::span<const double> T_list, double mesh) {
  if (!(r > 0.0 && r2 >= r)) throw Error(ErrorCode::Domain, "need 0 < r <= r2");
  KeyLemmaReport rep;
  for (const auto& gamma : gammas) {
    GrowthSeries s{SeriesKind::FlowCover, r, std::vector<GrowthSample>(T_list.size())};
    const auto near_start = space.sample_region(Ball{space.eval(gamma, 0.0), r2}, mesh);
    parallel_for(T_list.size(), [&](std::size_t i) {
      const double T = T_list[i];
      const auto near_end = space.sample_region(Ball{space.eval(gamma, T), r2}, mesh);
      std::vector<GeodesicLine> ball{gamma};
      for (auto& line : perturbations(space, near_start, near_end)) {
        if (f_dynamical_distance(space, gamma, line, f, T, kCoverTolerance).grid_max <= r2) {
          ball.push_back(std::move(line));
        }
      }
      s.samples[i].T = T;
      s.samples[i].value = static_cast<double>(cover_lines(space, ball, f, r, T).size());
    });
    const double slope = fit_entropy(s).slope;
    rep.series.push_back(std::move(s));
    rep.slopes.push_back(slope);
    rep.max_slope = rep.slopes.size() == 1 ? slope : std::max(rep.max_slope, slope);
  }
  rep.holds = !rep.slopes.empty() && rep.max_slope <= 0.05;
  return rep;
}

RecurrenceReport verify_no_recurrence(const Space& space, const LineFamily& family, double R) {
  RecurrenceReport rep;
  const Point& x = family.anchor;
  for (const auto& line : family.lines) {
    if (space.distance(space.eval(line, 0.0), x) > R + 1e-12) continue;
    ++rep.checked;
    if (!(space.distance(x, space.eval(line, 2.0 * R + 1.0)) > R)) ++rep.violations;
  }
  rep.holds = rep.violations == 0;
  return rep;
}

}  // namespace gcb
