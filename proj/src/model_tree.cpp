#include <algorithm>
#include <cmath>
#include <utility>

#include "model.hpp"

namespace gcb::detail {

namespace {
constexpr const char* kName = "RegularTree";
constexpr double kEps = 1e-12;
}  // namespace

std::vector<Piece> tree_edge_pieces(const tree::Point& center, const tree::Word& w, double d_lower,
                                    double d_upper) {
  if (center.back > 0.0 && center.word == w) {
    return {Piece{0.0, center.back, center.back, 0.0},
            Piece{center.back, 1.0, 0.0, 1.0 - center.back}};
  }
  return {Piece{0.0, 1.0, d_lower, d_upper}};
}

void for_each_tree_edge(const tree::Point& center, double bound, int q,
                        const std::function<void(const tree::Word&, double, double)>& visit,
                        const std::function<bool(const tree::Word&)>& keep) {
  struct Frame {
    tree::Word word;
    int arrival;
  };
  std::vector<Frame> stack{{center.word, tree::kNoArrival}};
  bool first = true;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const double d = tree::distance(center, tree::Point{f.word, 0.0});
    if (d > bound + 1.0 + kEps) continue;
    if (!first && keep && !keep(f.word)) continue;
    if (!f.word.empty()) {
      tree::Word parent = f.word.substr(0, f.word.size() - 1);
      visit(f.word, d, tree::distance(center, tree::Point{parent, 0.0}));
    }
    if (d > bound + kEps && !first) continue;
    first = false;
    if (!f.word.empty() && f.arrival != tree::kFromParent) {
      stack.push_back({f.word.substr(0, f.word.size() - 1),
                       static_cast<unsigned char>(f.word.back())});
    }
    const int children = f.word.empty() ? q + 1 : q;
    for (int c = children - 1; c >= 0; --c) {
      if (c == f.arrival) continue;
      tree::Word child = f.word;
      child.push_back(static_cast<char>(c));
      stack.push_back({std::move(child), tree::kFromParent});
    }
  }
}

tree::Point tree_projection(const tree::Line& line, const tree::Point& p) {
  const std::size_t kp = tree::common_prefix(p.word, line.plus);
  const std::size_t km = tree::common_prefix(p.word, line.minus);
  for (auto [k, end] : {std::pair{kp, &line.plus}, std::pair{km, &line.minus}}) {
    if (k > line.top) {
      if (k == p.word.size()) return p;
      return tree::on_end(*end, static_cast<double>(k));
    }
  }
  return tree::on_end(line.plus, static_cast<double>(line.top));
}

namespace {

class TreeModel final : public Model {
 public:
  explicit TreeModel(int q) : q_(q) {}

  ModelKind kind() const override { return ModelKind::RegularTree; }
  std::string name() const override { return "RegularTree(" + std::to_string(q_) + ")"; }
  int parameter() const override { return q_; }
  Point default_basepoint() const override { return tree::Point{}; }

  double distance(const Point& x, const Point& y) const override {
    return tree::distance(expect<tree::Point>(x, kName), expect<tree::Point>(y, kName));
  }

  Point bicombing(const Point& x, const Point& y, double t) const override {
    const auto& a = expect<tree::Point>(x, kName);
    const auto& b = expect<tree::Point>(y, kName);
    return tree::along(a, b, t * tree::distance(a, b));
  }

  GeodesicLine extend_to_line(const Point& x, const Point& y) const override {
    const auto& a = expect<tree::Point>(x, kName);
    const auto& b = expect<tree::Point>(y, kName);
    tree::End plus = tree::continue_beyond(a, b, q_);
    tree::End minus = tree::continue_beyond(b, a, q_);
    return tree::anchored_at(tree::line_between(std::move(minus), std::move(plus)), a);
  }

  Point eval(const GeodesicLine& line, double t) const override {
    return tree::eval(expect_line<tree::Line>(line, kName), t);
  }

  GeodesicLine shifted(const GeodesicLine& line, double t) const override {
    tree::Line l = expect_line<tree::Line>(line, kName);
    l.shift += t;
    return l;
  }

  GeodesicLine line_from_boundary_pair(const BoundaryPoint& zminus, const BoundaryPoint& zplus,
                                       const Point& base) const override {
    const auto& m = expect_boundary<tree::End>(zminus, kName);
    const auto& p = expect_boundary<tree::End>(zplus, kName);
    check_end(m);
    check_end(p);
    tree::Line line = tree::line_between(m, p);
    return tree::anchored_at(line, tree_projection(line, expect<tree::Point>(base, kName)));
  }

  std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GeodesicLine& line) const override {
    const auto& l = expect_line<tree::Line>(line, kName);
    return {l.minus, l.plus};
  }

  Point ray_point(const Point& x, const BoundaryPoint& z, double t) const override {
    const auto& a = expect<tree::Point>(x, kName);
    const auto& e = expect_boundary<tree::End>(z, kName);
    const std::size_t k = tree::common_prefix(a.word, e);
    if (k == a.word.size()) return tree::on_end(e, tree::depth(a) + t);
    const double up = tree::depth(a) - static_cast<double>(k);
    if (t <= up) return tree::ancestor_at(a, tree::depth(a) - t);
    return tree::on_end(e, static_cast<double>(k) + (t - up));
  }

  double distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const override {
    const auto& a = expect<tree::Point>(x, kName);
    const auto& b = expect<tree::Point>(y, kName);
    const auto& e = expect_boundary<tree::End>(z, kName);
    const tree::Point far =
        tree::on_end(e, static_cast<double>(std::max(a.word.size(), b.word.size()) + 2));
    return 0.5 * (tree::distance(b, a) + tree::distance(b, far) - tree::distance(a, far));
  }

  double distance_to_line(const Point& y, const GeodesicLine& line) const override {
    const auto& b = expect<tree::Point>(y, kName);
    return tree::distance(b, tree_projection(expect_line<tree::Line>(line, kName), b));
  }

  std::vector<Point> sample_region(const Region& region, double mesh,
                                   std::size_t cap) const override {
    const auto& c = expect<tree::Point>(region_center(region), kName);
    const double bound = std::visit(
        [](const auto& r) {
          if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Annulus>) {
            return r.outer;
          } else {
            return r.radius;
          }
        },
        region);
    std::vector<tree::Point> pts;
    std::vector<double> params;
    for_each_tree_edge(c, bound, q_, [&](const tree::Word& w, double dl, double du) {
      const auto pieces = tree_edge_pieces(c, w, dl, du);
      for (const auto& [a, b] : region_intervals(pieces, region)) {
        params.clear();
        mesh_parameters(a, b, mesh, params);
        for (double t : params) pts.push_back(tree::canonical(w, t));
      }
      if (pts.size() > 2 * cap) throw_capacity(cap);
    });
    std::sort(pts.begin(), pts.end(), tree::lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() > cap) throw_capacity(cap);
    return {std::make_move_iterator(pts.begin()), std::make_move_iterator(pts.end())};
  }

  bool coordinate_less(const Point& a, const Point& b) const override {
    return tree::lex_less(expect<tree::Point>(a, kName), expect<tree::Point>(b, kName));
  }

  void separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0, double h,
                          std::span<double> out) const override {
    const auto& la = expect_line<tree::Line>(a, kName);
    const auto& lb = expect_line<tree::Line>(b, kName);
    // lcp[i][j]: common prefix of (i ? plus : minus) of a with (j ? plus : minus) of b.
    std::size_t lcp[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        lcp[i][j] = tree::common_prefix(i ? la.plus : la.minus, j ? lb.plus : lb.minus);
      }
    }
    const double ta = static_cast<double>(la.top);
    const double tb = static_cast<double>(lb.top);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double s = s0 + static_cast<double>(k) * h;
      const double pa = s + la.shift;
      const double pb = s + lb.shift;
      const int ia = pa >= 0.0;
      const int ib = pb >= 0.0;
      out[k] = tree::ray_points_distance(ta + std::abs(pa), tb + std::abs(pb), lcp[ia][ib]);
    }
  }

  double ball_measure(const Point& center, double radius) const override {
    const auto& c = expect<tree::Point>(center, kName);
    if (c.back == 0.0) {
      const double fl = std::floor(radius + kEps);
      const int k = static_cast<int>(fl);
      const double frac = std::max(0.0, radius - fl);
      double total = 0.0;
      double layer = q_ + 1.0;
      for (int j = 1; j <= k; ++j) {
        total += layer;
        layer *= q_;
      }
      return total + frac * layer;
    }
    double total = 0.0;
    for_each_tree_edge(c, radius, q_, [&](const tree::Word& w, double dl, double du) {
      total += length_within(tree_edge_pieces(c, w, dl, du), radius);
    });
    return total;
  }

 private:
  void check_end(const tree::End& e) const {
    for (std::size_t i = 0; i < e.prefix().size() + e.period().size(); ++i) {
      const int c = static_cast<unsigned char>(e.letter(i));
      if (c >= (i == 0 ? q_ + 1 : q_)) {
        throw Error(ErrorCode::ModelMismatch, "end word uses a letter outside the tree alphabet");
      }
    }
  }

  int q_;
};

}  // namespace

std::shared_ptr<const Model> make_tree_model(int q) { return std::make_shared<TreeModel>(q); }

}  // namespace gcb::detail
