#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gcb/error.hpp"
#include "gcb/space.hpp"
#include "oracles.hpp"

using namespace gcb;
using oracle::word;

namespace {

const auto kTree = Space::regular_tree(2);
const auto kH2 = Space::hyperbolic_plane();
const auto kE2 = Space::euclidean(2);

Point random_point(const Space& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (space.kind() == ModelKind::RegularTree) {
    const int depth = 1 + static_cast<int>(rng() % 6);
    tree::Word w;
    for (int i = 0; i < depth; ++i) w.push_back(static_cast<char>(rng() % (i == 0 ? 3 : 2)));
    return tree::canonical(w, u(rng));
  }
  if (space.kind() == ModelKind::HyperbolicPlane) return hyp_point(4.0 * u(rng), 2.0 * std::numbers::pi * u(rng));
  return euc_point({10.0 * u(rng) - 5.0, 10.0 * u(rng) - 5.0});
}

}  // namespace

TEST(Distance, EuclideanPythagoras) {
  EXPECT_DOUBLE_EQ(kE2.distance(euc_point({0, 0}), euc_point({3, 4})), 5.0);
}

TEST(Distance, TreeMatchesBfs) {
  const oracle::ExplicitTree t(2, 5);
  EXPECT_EQ(t.bfs(word("01"), word("1011")), 6);
  EXPECT_DOUBLE_EQ(kTree.distance(tree_vertex(word("001")), tree_vertex(word("0110"))), 5.0);
  EXPECT_EQ(t.bfs(word("001"), word("0110")), 5);
  for (const auto& a : t.vertices()) {
    for (const auto& b : t.ball(3)) {
      ASSERT_DOUBLE_EQ(kTree.distance(tree_vertex(a), tree_vertex(b)), t.bfs(a, b));
    }
  }
}

TEST(Distance, HyperbolicUnitOffset) {
  const Point x = HypPoint{{0.0, 0.0, 1.0}};
  const Point y = HypPoint{{std::sinh(1.0), 0.0, std::cosh(1.0)}};
  EXPECT_NEAR(kH2.distance(x, y), 1.0, 1e-12);
}

TEST(Distance, ModelMismatch) {
  try {
    kTree.distance(tree_vertex({}), euc_point({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModelMismatch);
  }
}

TEST(Distance, MetricAxiomsOnRandomPoints) {
  std::mt19937_64 rng(7);
  for (const Space* s : {&kTree, &kH2, &kE2}) {
    for (int i = 0; i < 300; ++i) {
      const auto x = random_point(*s, rng);
      const auto y = random_point(*s, rng);
      const auto z = random_point(*s, rng);
      EXPECT_NEAR(s->distance(x, y), s->distance(y, x), 1e-12);
      EXPECT_NEAR(s->distance(x, x), 0.0, 1e-9);
      EXPECT_LE(s->distance(x, z), s->distance(x, y) + s->distance(y, z) + 1e-9);
    }
  }
}

TEST(Bicombing, EndpointsAndMidpoint) {
  const Point x = euc_point({0, 0});
  const Point y = euc_point({2, 0});
  EXPECT_EQ(kE2.bicombing(x, y, 0.0), x);
  const auto m = std::get<EucPoint>(kE2.bicombing(x, y, 0.5));
  EXPECT_NEAR(m.coords[0], 1.0, 1e-15);
  EXPECT_NEAR(m.coords[1], 0.0, 1e-15);
}

TEST(Bicombing, TreeQuarterPoint) {
  // 01 -> 0 -> root -> 1 -> 10: distance 4, the quarter point is the vertex 0.
  const Point x = tree_vertex(word("01"));
  const Point y = tree_vertex(word("10"));
  ASSERT_DOUBLE_EQ(kTree.distance(x, y), 4.0);
  EXPECT_EQ(kTree.bicombing(x, y, 0.25), tree_vertex(word("0")));
  EXPECT_EQ(kTree.bicombing(x, y, 0.5), tree_vertex({}));
}

TEST(Bicombing, GeodesicReversibleConvex) {
  std::mt19937_64 rng(11);
  for (const Space* s : {&kTree, &kH2, &kE2}) {
    for (int i = 0; i < 1000; ++i) {
      const auto x = random_point(*s, rng);
      const auto y = random_point(*s, rng);
      const auto x2 = random_point(*s, rng);
      const auto y2 = random_point(*s, rng);
      const double d = s->distance(x, y);
      const double t = 0.05 * static_cast<double>(rng() % 21);
      ASSERT_NEAR(s->distance(s->bicombing(x, y, t), s->bicombing(y, x, 1.0 - t)), 0.0, 1e-9);
      ASSERT_NEAR(s->distance(x, s->bicombing(x, y, t)), t * d, 1e-9);
      std::vector<double> gap;
      for (int k = 0; k <= 20; ++k) {
        gap.push_back(s->distance(s->bicombing(x, y, 0.05 * k), s->bicombing(x2, y2, 0.05 * k)));
      }
      for (int k = 0; k + 2 <= 20; ++k) {
        ASSERT_LE(gap[k + 1], 0.5 * (gap[k] + gap[k + 2]) + 1e-7) << s->name();
      }
    }
  }
}

TEST(ExtendToLine, EuclideanAxis) {
  const auto line = std::get<EucLine>(kE2.extend_to_line(euc_point({0, 0}), euc_point({1, 0})));
  EXPECT_NEAR(line.direction[0], 1.0, 1e-15);
  EXPECT_NEAR(line.direction[1], 0.0, 1e-15);
  EXPECT_NEAR(line.origin[0], 0.0, 1e-15);
}

TEST(ExtendToLine, HyperbolicFormula) {
  const Point x = HypPoint{hyp::kOrigin};
  const Point y = HypPoint{{std::sinh(1.0), 0.0, std::cosh(1.0)}};
  const auto line = kH2.extend_to_line(x, y);
  for (double t : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
    const auto p = std::get<HypPoint>(kH2.eval(line, t)).coords;
    EXPECT_NEAR(p.x, std::sinh(t), 1e-9);
    EXPECT_NEAR(p.y, 0.0, 1e-9);
    EXPECT_NEAR(p.z, std::cosh(t), 1e-9);
  }
}

TEST(ExtendToLine, IsometricSigmaGeodesic) {
  std::mt19937_64 rng(3);
  for (const Space* s : {&kTree, &kH2, &kE2}) {
    for (int i = 0; i < 100; ++i) {
      const auto x = random_point(*s, rng);
      const auto y = random_point(*s, rng);
      if (s->distance(x, y) < 1e-6) continue;
      const auto line = s->extend_to_line(x, y);
      EXPECT_NEAR(s->distance(s->eval(line, 0.0), x), 0.0, 1e-9);
      EXPECT_NEAR(s->distance(s->eval(line, s->distance(x, y)), y), 0.0, 1e-9);
      for (double a : {-3.0, -1.3, 0.0, 2.2}) {
        for (double b : {-2.0, 0.7, 3.0}) {
          ASSERT_NEAR(s->distance(s->eval(line, a), s->eval(line, b)), std::abs(a - b), 1e-9);
          for (double lam : {0.25, 0.5, 0.8}) {
            ASSERT_NEAR(s->distance(s->bicombing(s->eval(line, a), s->eval(line, b), lam),
                                    s->eval(line, (1 - lam) * a + lam * b)),
                        0.0, 1e-9);
          }
        }
      }
    }
  }
}

TEST(ExtendToLine, TreeContinuesByMinimalChild) {
  const Point u = tree_vertex(word("1"));
  const Point v = tree_vertex(word("10"));
  const auto line = kTree.extend_to_line(u, v);
  EXPECT_EQ(kTree.eval(line, 3.0), tree_vertex(word("1000")));
  // Behind u the admissible edges are child 1, then the parent.
  EXPECT_EQ(kTree.eval(line, -1.0), tree_vertex(word("11")));
  EXPECT_EQ(kTree.eval(line, -2.0), tree_vertex(word("110")));
}

TEST(ExtendToLine, DegenerateSegment) {
  try {
    kH2.extend_to_line(HypPoint{hyp::kOrigin}, HypPoint{hyp::kOrigin});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSegment);
  }
}

TEST(BoundaryPair, TreeLineThroughBasepoint) {
  const tree::End zm(tree::Word{}, word("0"));
  const tree::End zp(tree::Word{}, word("1"));
  const auto line = kTree.line_from_boundary_pair(zm, zp);
  EXPECT_EQ(kTree.eval(line, 0.0), tree_vertex({}));
  const auto [a, b] = kTree.endpoints(line);
  EXPECT_TRUE(same_boundary_point(a, zm));
  EXPECT_TRUE(same_boundary_point(b, zp));
}

TEST(BoundaryPair, TreeAnchoredAtCommonPrefix) {
  const tree::End zm(tree::Word{}, word("0"));
  const tree::End zp(word("00"), word("1"));
  EXPECT_EQ(kTree.eval(kTree.line_from_boundary_pair(zm, zp), 0.0), tree_vertex(word("00")));
}

TEST(BoundaryPair, HyperbolicDiameter) {
  const auto line = kH2.line_from_boundary_pair(IdealPoint{std::numbers::pi}, IdealPoint{0.0});
  for (double t : {-2.0, 0.0, 1.5}) {
    const auto p = std::get<HypPoint>(kH2.eval(line, t)).coords;
    EXPECT_NEAR(p.x, std::sinh(t), 1e-9);
    EXPECT_NEAR(p.z, std::cosh(t), 1e-9);
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const auto [za, zb] = kH2.endpoints(kH2.line_from_boundary_pair(IdealPoint{a}, IdealPoint{b}));
    EXPECT_NEAR(std::remainder(std::get<IdealPoint>(za).theta - a, 2 * std::numbers::pi), 0.0, 1e-9);
    EXPECT_NEAR(std::remainder(std::get<IdealPoint>(zb).theta - b, 2 * std::numbers::pi), 0.0, 1e-9);
  }
}

TEST(BoundaryPair, Errors) {
  try {
    kH2.line_from_boundary_pair(IdealPoint{1.0}, IdealPoint{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePair);
  }
  try {
    kE2.line_from_boundary_pair(EucDirection{{1, 0}}, EucDirection{{0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedBoundary);
  }
}

TEST(SampleRegion, TreeSphereHoldsAllVertices) {
  const oracle::ExplicitTree t(2, 3);
  const auto sample = kTree.sample_region(Sphere{tree_vertex({}), 3.0}, 0.5);
  const auto expected = t.sphere(3);
  ASSERT_EQ(expected.size(), 12u);
  for (const auto& w : expected) {
    EXPECT_NE(std::find(sample.begin(), sample.end(), tree_vertex(w)), sample.end());
  }
  for (const auto& p : sample) EXPECT_NEAR(kTree.distance(p, tree_vertex({})), 3.0, 1e-12);
}

TEST(SampleRegion, EuclideanLineGrid) {
  const auto sample = Space::euclidean(1).sample_region(Ball{euc_point({0}), 2.0}, 0.5);
  std::vector<double> xs;
  for (const auto& p : sample) xs.push_back(std::get<EucPoint>(p).coords[0]);
  std::sort(xs.begin(), xs.end());
  ASSERT_EQ(xs.size(), 9u);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(xs[i], -2.0 + 0.5 * i, 1e-12);
}

TEST(SampleRegion, HyperbolicCircleSpacing) {
  const double T = 3.0;
  const double mesh = 1.0;
  const auto sample = kH2.sample_region(Sphere{HypPoint{hyp::kOrigin}, T}, mesh);
  // The circle has length 2 pi sinh T, so at least that many samples per unit.
  EXPECT_GE(static_cast<double>(sample.size()), 2.0 * std::numbers::pi * std::sinh(T) / mesh);
  std::vector<double> angles;
  for (const auto& p : sample) angles.push_back(hyp::angle(std::get<HypPoint>(p).coords));
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
    EXPECT_LE((angles[i + 1] - angles[i]) * std::sinh(T), mesh + 1e-9);
  }
}

TEST(SampleRegion, DenseAndInside) {
  std::mt19937_64 rng(13);
  for (const Space* s : {&kTree, &kH2, &kE2}) {
    const Point c = s->basepoint();
    const double R = 2.5;
    const double mesh = 0.4;
    const auto sample = s->sample_region(Ball{c, R}, mesh);
    for (const auto& p : sample) ASSERT_LE(s->distance(c, p), R + 1e-9);
    for (int i = 0; i < 200; ++i) {
      const auto q = random_point(*s, rng);
      if (s->distance(c, q) > R) continue;
      double best = INFINITY;
      for (const auto& p : sample) best = std::min(best, s->distance(p, q));
      ASSERT_LE(best, mesh + 1e-9) << s->name();
    }
  }
}

TEST(SampleRegion, CapacityNamesTheCap) {
  try {
    kE2.with_sample_cap(100).sample_region(Ball{euc_point({0, 0}), 10.0}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Capacity);
    EXPECT_NE(std::string(e.what()).find("100"), std::string::npos);
  }
}

TEST(MetricGraph, ParsesEdgeList) {
  std::istringstream in("# square with a diagonal\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n\n0 2 1.5\n");
  const auto g = MetricGraph::parse(in);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_DOUBLE_EQ(g.vertex_distance(0, 2), 1.5);
  EXPECT_DOUBLE_EQ(g.vertex_distance(1, 3), 2.0);
  EXPECT_EQ(g.shortest_path(1, 3), (std::vector<std::size_t>{1, 0, 3}));
  const auto s = Space::metric_graph(g);
  EXPECT_TRUE(s.approximate());
  EXPECT_DOUBLE_EQ(s.ball_measure(s.basepoint(), 10.0), g.total_length());
}

TEST(MetricGraph, RejectsBadWeights) {
  std::istringstream in("0 1 -1\n");
  EXPECT_THROW(MetricGraph::parse(in), Error);
}
