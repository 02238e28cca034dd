#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "gcb/boundary_sets.hpp"
#include "gcb/error.hpp"
#include "oracles.hpp"

using namespace gcb;
using oracle::word;

namespace {

const auto kTree3 = Space::regular_tree(3);
const auto kH2 = Space::hyperbolic_plane();
constexpr double kLog2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

BoundarySubset binary_ends() {
  const std::array<int, 2> letters{0, 1};
  return BoundarySubset::letter_ends(letters);
}

std::vector<double> grid(double lo, double hi, double step = 1.0) {
  std::vector<double> out;
  for (double t = lo; t <= hi + 1e-9; t += step) out.push_back(t);
  return out;
}

bool only_letters(const tree::Word& w, int below) {
  for (char c : w)
    if (c >= below) return false;
  return true;
}

bool golden(const tree::Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == 1 && w[i + 1] == 1) return false;
  return true;
}

/// Edges inside B(o, T) with an endpoint on the hull, whose vertices satisfy
/// `on_hull`; this is the unit tube length at integer T.
template <class Pred>
std::size_t tube_edges(const oracle::ExplicitTree& t, double T, Pred on_hull) {
  std::size_t edges = 0;
  for (const auto& w : t.vertices()) {
    if (w.empty() || static_cast<double>(w.size()) > T) continue;
    if (on_hull(w) || on_hull(w.substr(0, w.size() - 1))) ++edges;
  }
  return edges;
}

/// Binary words without two consecutive ones, plus a dead branch on letter 2.
BoundarySubset golden_automaton() {
  const std::vector<std::array<int, 3>> tr{{0, 0, 0}, {0, 1, 1}, {1, 0, 0}, {0, 2, 2}};
  return BoundarySubset::automaton(3, tr);
}

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Subset, JsonAutomatonMatchesBuilder) {
  const auto parsed = BoundarySubset::parse(
      R"({"type":"automaton","alphabet":3,"transitions":[[0,0,0],[0,1,1],[1,0,0],[0,2,2]],"accepting_cycles":true})");
  EXPECT_EQ(parsed.transitions(), golden_automaton().transitions());
  EXPECT_TRUE(parsed.contains(kTree3, tree::End(word("0100"), word("0"))));
  EXPECT_FALSE(parsed.contains(kTree3, tree::End(word("011"), word("0"))));
  EXPECT_FALSE(parsed.contains(kTree3, tree::End(word("2"), word("0"))));
}

TEST(Subset, JsonErrors) {
  expect_code(ErrorCode::Parse, [] { BoundarySubset::parse(R"({"type":"arcs","arcs":[[0,1]],"color":1})"); });
  expect_code(ErrorCode::Parse, [] { BoundarySubset::parse(R"({"type":"spiral"})"); });
  expect_code(ErrorCode::Parse, [] { BoundarySubset::parse("{not json"); });
  expect_code(ErrorCode::Validation, [] {
    BoundarySubset::parse(R"({"type":"automaton","alphabet":2,"transitions":[[0,0,0],[0,0,1]]})");
  });
  expect_code(ErrorCode::Validation, [] {
    BoundarySubset::parse(R"({"type":"automaton","alphabet":2,"transitions":[[0,0,0]],"accepting_cycles":false})");
  });
  expect_code(ErrorCode::Validation, [] {
    BoundarySubset::parse(R"({"type":"automaton","alphabet":2,"transitions":[[0,5,0]]})");
  });
}

TEST(Subset, ArcMembership) {
  const auto C = BoundarySubset::arcs({{-0.5, 0.5}, {3.0, 3.0}});
  EXPECT_TRUE(C.contains(kH2, IdealPoint{2.0 * kPi - 0.2}));
  EXPECT_TRUE(C.contains(kH2, IdealPoint{3.0}));
  EXPECT_FALSE(C.contains(kH2, IdealPoint{1.0}));
}

TEST(Hull, BinarySubtreeVertices) {
  const auto C = binary_ends();
  const oracle::ExplicitTree t(3, 4);
  std::set<tree::Word> expected;
  for (const auto& w : t.ball(4))
    if (only_letters(w, 2)) expected.insert(w);
  ASSERT_EQ(expected.size(), 31u);

  const auto sample = qc_hull_sample(kTree3, C, Ball{kTree3.basepoint(), 4.0}, 1.0, 0.0);
  std::set<tree::Word> vertices;
  for (const auto& p : sample.points) {
    const auto& tp = std::get<tree::Point>(p);
    if (tp.back == 0.0) vertices.insert(tp.word);
  }
  EXPECT_EQ(vertices, expected);
}

TEST(Hull, WitnessesAreWithinTau) {
  for (const auto& [space, C] : {std::pair{kTree3, binary_ends()},
                                 std::pair{kH2, BoundarySubset::arcs({{0.0, 1.0}, {2.5, 3.0}})}}) {
    const double tau = 1.0;
    const auto sample = qc_hull_sample(space, C, Ball{space.basepoint(), 3.0}, 0.5, tau);
    ASSERT_FALSE(sample.points.empty());
    ASSERT_EQ(sample.witnesses.size(), sample.points.size());
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
      const auto& w = sample.witnesses[i];
      EXPECT_LE(space.distance(sample.points[i], space.eval(w.line, w.t)), tau + 1e-9);
      const auto [a, b] = space.endpoints(w.line);
      EXPECT_TRUE(C.contains(space, a));
      EXPECT_TRUE(C.contains(space, b));
    }
  }
}

TEST(Hull, TwoIdealPointsDistanceClosedForm) {
  for (double gap : {0.3, 1.0, 2.0, kPi}) {
    const std::array<double, 2> thetas{0.7, 0.7 + gap};
    const auto C = BoundarySubset::angles(thetas);
    EXPECT_NEAR(hull_distance(kH2, C, kH2.basepoint()), std::acosh(1.0 / std::sin(gap / 2.0)), 1e-9);
  }
}

TEST(Hull, TwoEndsIsOneLine) {
  const std::array<tree::End, 2> two{tree::End(word("0"), word("0")), tree::End(word("1"), word("1"))};
  const auto C = BoundarySubset::ends(two);
  const auto sample = qc_hull_sample(kTree3, C, Ball{kTree3.basepoint(), 5.0}, 1.0, 0.0);
  std::set<tree::Word> vertices;
  for (const auto& p : sample.points) {
    const auto& tp = std::get<tree::Point>(p);
    if (tp.back == 0.0) vertices.insert(tp.word);
  }
  // Root plus five vertices down each ray.
  EXPECT_EQ(vertices.size(), 11u);
  EXPECT_TRUE(vertices.count(word("00000")));
  EXPECT_TRUE(vertices.count(word("11111")));
}

TEST(Hull, DegenerateSubsets) {
  const std::array<double, 1> one{1.0};
  expect_code(ErrorCode::DegenerateSubset,
              [&] { hull_distance(kH2, BoundarySubset::angles(one), kH2.basepoint()); });
  const std::array<tree::End, 1> single{tree::End(word("0"), word("0"))};
  expect_code(ErrorCode::DegenerateSubset,
              [&] { hull_basepoint(kTree3, BoundarySubset::ends(single)); });
  expect_code(ErrorCode::UnsupportedBoundary, [] {
    const auto plane = Space::euclidean(2);
    hull_distance(plane, BoundarySubset::arcs({{0.0, 1.0}}), plane.basepoint());
  });
}

TEST(Minkowski, BinaryEndsCountPowersOfTwo) {
  const auto T = grid(0, 10);
  const auto s = relative_minkowski_growth(kTree3, binary_ends(), kTree3.basepoint(), T);
  for (const auto& x : s.samples) EXPECT_DOUBLE_EQ(x.value, std::pow(2.0, x.T));
  EXPECT_NEAR(fit_entropy(s, Window::range(6, 10)).slope, kLog2, 1e-12);
}

TEST(Minkowski, AutomatonPathCountsMatchEnumeration) {
  const oracle::ExplicitTree t(3, 8);
  const auto s = relative_minkowski_growth(kTree3, golden_automaton(), kTree3.basepoint(), grid(1, 8));
  for (const auto& x : s.samples) {
    std::size_t count = 0;
    for (const auto& w : t.sphere(static_cast<int>(x.T)))
      if (only_letters(w, 2) && golden(w)) ++count;
    EXPECT_DOUBLE_EQ(x.value, static_cast<double>(count)) << "T=" << x.T;
  }
}

TEST(Minkowski, FractionalTRoundsUp) {
  const std::array<double, 2> T{2.5, 3.0};
  const auto s = relative_minkowski_growth(kTree3, binary_ends(), kTree3.basepoint(), T);
  EXPECT_DOUBLE_EQ(s.samples[0].value, 8.0);
  EXPECT_DOUBLE_EQ(s.samples[1].value, 8.0);
}

TEST(Minkowski, SinglePointCountsOne) {
  const std::array<tree::End, 1> single{tree::End(word("01"), word("1"))};
  const auto s = relative_minkowski_growth(kTree3, BoundarySubset::ends(single), kTree3.basepoint(), grid(0, 6));
  for (const auto& x : s.samples) EXPECT_DOUBLE_EQ(x.value, 1.0);
}

TEST(Minkowski, FullBoundaryOfBinaryTree) {
  const auto tree2 = Space::regular_tree(2);
  const auto s = relative_minkowski_growth(tree2, BoundarySubset::all_ends(2), tree2.basepoint(), grid(1, 8));
  for (const auto& x : s.samples) EXPECT_DOUBLE_EQ(x.value, 3.0 * std::pow(2.0, x.T - 1.0));
}

TEST(Minkowski, MonotoneUnderInclusion) {
  const auto small = relative_minkowski_growth(kTree3, golden_automaton(), kTree3.basepoint(), grid(0, 8));
  const auto big = relative_minkowski_growth(kTree3, binary_ends(), kTree3.basepoint(), grid(0, 8));
  for (std::size_t i = 0; i < small.samples.size(); ++i) EXPECT_LE(small.samples[i].value, big.samples[i].value);
}

TEST(Minkowski, CircleArcCovering) {
  // A quarter arc seen from the origin: visual balls of level T are arcs of
  // angular width about 2 e^{-T}, so the count grows with slope 1.
  const auto C = BoundarySubset::arcs({{0.0, kPi / 2.0}});
  const auto s = relative_minkowski_growth(kH2, C, kH2.basepoint(), grid(2, 8));
  const auto fit = fit_entropy(s, Window::range(4, 8));
  EXPECT_NEAR(fit.slope, 1.0, 0.15);
  for (std::size_t i = 1; i < s.samples.size(); ++i) EXPECT_GE(s.samples[i].value, s.samples[i - 1].value);
}

TEST(Measure, BinaryTubeEdgeLength) {
  const oracle::ExplicitTree t(3, 8);
  const auto s = relative_measure_growth(kTree3, binary_ends(), kTree3.basepoint(), 1.0, grid(1, 8));
  for (const auto& x : s.samples) {
    const auto edges = tube_edges(t, x.T, [](const tree::Word& w) { return only_letters(w, 2); });
    EXPECT_DOUBLE_EQ(x.value, static_cast<double>(edges)) << "T=" << x.T;
  }
  EXPECT_NEAR(fit_entropy(s, Window::range(5, 8)).slope, kLog2, 0.1);
}

TEST(Measure, TwoEndsTubeIsLinear) {
  const std::array<tree::End, 2> two{tree::End(word("0"), word("0")), tree::End(word("1"), word("1"))};
  const oracle::ExplicitTree t(3, 8);
  const auto s = relative_measure_growth(kTree3, BoundarySubset::ends(two), kTree3.basepoint(), 1.0, grid(1, 8));
  const auto on_line = [](const tree::Word& w) {
    return w.find_first_not_of('\0') == tree::Word::npos || w.find_first_not_of('\1') == tree::Word::npos;
  };
  for (const auto& x : s.samples) {
    EXPECT_DOUBLE_EQ(x.value, static_cast<double>(tube_edges(t, x.T, on_line))) << "T=" << x.T;
  }
  EXPECT_DOUBLE_EQ(s.samples.back().value - s.samples[s.samples.size() - 2].value,
                   s.samples[1].value - s.samples[0].value);
}

TEST(Covering, BinaryEndsSlope) {
  const auto s = relative_covering_growth(kTree3, binary_ends(), kTree3.basepoint(), 1.0, grid(2, 10), 0.0);
  EXPECT_NEAR(fit_entropy(s, Window::range(6, 10)).slope, kLog2, 0.1);
}

TEST(Covering, TauIndependence) {
  const auto C = binary_ends();
  const auto x = kTree3.basepoint();
  const auto a = relative_covering_growth(kTree3, C, x, 1.0, grid(2, 9), 1.0);
  const auto b = relative_covering_growth(kTree3, C, x, 1.0, grid(2, 9), 3.0);
  EXPECT_NEAR(fit_entropy(a, Window::range(5, 9)).slope, fit_entropy(b, Window::range(5, 9)).slope, 0.1);
}

TEST(Covering, FullBoundaryMatchesAmbient) {
  const auto tree2 = Space::regular_tree(2);
  const auto T = grid(2, 7);
  const auto rel = relative_covering_growth(tree2, BoundarySubset::all_ends(2), tree2.basepoint(), 1.0, T, 0.0);
  const auto amb = covering_growth(tree2, tree2.basepoint(), 1.0, T);
  for (std::size_t i = 0; i < T.size(); ++i) EXPECT_EQ(rel.samples[i].value, amb.samples[i].value) << "T=" << T[i];
}

TEST(Flow, BinaryEndsFamilyAndSlope) {
  RelativeFlowOptions opt;
  opt.depth = 8;
  opt.backward_depth = 2;
  const auto s = relative_flow_growth(kTree3, binary_ends(), kTree3.basepoint(), WeightFunction::exp_half(), 1.0,
                                      grid(3, 8), opt);
  EXPECT_NEAR(fit_entropy(s, Window::range(4, 8)).slope, kLog2, 0.1);
}

TEST(Flow, TwoPointFamilyIsFinite) {
  const std::array<double, 2> thetas{0.0, 2.0};
  const auto C = BoundarySubset::angles(thetas);
  const auto x = hull_basepoint(kH2, C);
  RelativeFlowOptions opt;
  opt.anchor_radius = 1.0;
  const auto family = generate_relative_family(kH2, C, x, opt);
  EXPECT_LE(family.lines.size(), 2u);
  const auto s = relative_flow_growth(kH2, C, x, WeightFunction::exp_half(), 0.5, grid(2, 8), opt);
  EXPECT_NEAR(fit_entropy(s, Window::all()).slope, 0.0, 1e-12);
}

TEST(Flow, BasepointOffHull) {
  const std::array<double, 2> thetas{0.0, 0.5};
  RelativeFlowOptions opt;
  expect_code(ErrorCode::Basepoint, [&] {
    generate_relative_family(kH2, BoundarySubset::angles(thetas), kH2.basepoint(), opt);
  });
}

TEST(RayLine, TreeIsExact) {
  const auto C = binary_ends();
  const auto rep = verify_ray_line_approximation(kTree3, C, hull_basepoint(kTree3, C), 20);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.max_deviation, 0.0);
  EXPECT_GT(rep.checked, 0u);
}

TEST(RayLine, HyperbolicArcs) {
  const auto C = BoundarySubset::arcs({{0.0, 1.0}, {2.0, 2.5}, {4.0, 4.0}});
  const auto rep = verify_ray_line_approximation(kH2, C, hull_basepoint(kH2, C), 20);
  EXPECT_TRUE(rep.holds);
  EXPECT_LE(rep.max_deviation, rep.bound);
}
