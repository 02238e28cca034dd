#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "model.hpp"

namespace gcb::detail {

namespace {

constexpr const char* kName = "MetricGraph";
constexpr double kEps = 1e-12;

class GraphModel final : public Model {
 public:
  GraphModel(MetricGraph graph, std::size_t base) : g_(std::move(graph)), base_(base) {
    if (g_.edges().empty()) throw Error(ErrorCode::Validation, "graph has no edges");
  }

  ModelKind kind() const override { return ModelKind::MetricGraph; }
  std::string name() const override { return kName; }
  Point default_basepoint() const override { return vertex_point(base_); }
  const MetricGraph* graph() const override { return &g_; }

  double distance(const Point& x, const Point& y) const override {
    return route(point(x), point(y)).length;
  }

  Point bicombing(const Point& x, const Point& y, double t) const override {
    const GraphPoint& a = point(x);
    const GraphPoint& b = point(y);
    const Route r = route(a, b);
    double s = t * r.length;
    if (r.vertices.empty()) {
      const double dir = b.offset >= a.offset ? 1.0 : -1.0;
      return canonical(a.edge, a.offset + dir * s);
    }
    // Leg from a to the first vertex.
    const double first = r.from_u ? a.offset : length_of(a.edge) - a.offset;
    if (s <= first) {
      return canonical(a.edge, r.from_u ? a.offset - s : a.offset + s);
    }
    s -= first;
    for (std::size_t i = 0; i + 1 < r.vertices.size(); ++i) {
      const std::size_t p = r.vertices[i];
      const std::size_t q = r.vertices[i + 1];
      const std::size_t e = connecting_edge(p, q);
      const double w = length_of(e);
      if (s <= w) {
        return canonical(e, g_.edges()[e].u == p ? s : w - s);
      }
      s -= w;
    }
    const double last = r.to_u ? b.offset : length_of(b.edge) - b.offset;
    s = std::min(s, last);
    return canonical(b.edge, r.to_u ? s : length_of(b.edge) - s);
  }

  std::vector<Point> sample_region(const Region& region, double mesh,
                                   std::size_t cap) const override {
    const GraphPoint& c = point(region_center(region));
    const auto dv = vertex_distances(c);
    std::vector<GraphPoint> pts;
    std::vector<double> params;
    for (std::size_t e = 0; e < g_.edges().size(); ++e) {
      const auto pieces = edge_pieces(c, dv, e);
      for (const auto& [a, b] : region_intervals(pieces, region)) {
        params.clear();
        mesh_parameters(a, b, mesh, params);
        for (double t : params) {
          const Point p = canonical(e, t);
          pts.push_back(std::get<GraphPoint>(p));
        }
        if (pts.size() > 2 * cap) throw_capacity(cap);
      }
    }
    auto key = [](const GraphPoint& p) { return std::tie(p.edge, p.offset); };
    std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() > cap) throw_capacity(cap);
    return {pts.begin(), pts.end()};
  }

  bool coordinate_less(const Point& a, const Point& b) const override {
    const GraphPoint& u = point(a);
    const GraphPoint& v = point(b);
    return std::tie(u.edge, u.offset) < std::tie(v.edge, v.offset);
  }

  double ball_measure(const Point& center, double radius) const override {
    const GraphPoint& c = point(center);
    const auto dv = vertex_distances(c);
    double total = 0.0;
    for (std::size_t e = 0; e < g_.edges().size(); ++e) {
      total += length_within(edge_pieces(c, dv, e), radius);
    }
    return total;
  }

 private:
  struct Route {
    double length = 0.0;
    std::vector<std::size_t> vertices;  // empty when the route stays on one edge
    bool from_u = false;                // leaves the first edge through its u end
    bool to_u = false;                  // enters the last edge through its u end
  };

  const GraphPoint& point(const Point& p) const {
    const auto& gp = expect<GraphPoint>(p, kName);
    if (gp.edge >= g_.edges().size() || gp.offset < 0.0 || gp.offset > length_of(gp.edge)) {
      throw Error(ErrorCode::ModelMismatch, "graph point outside the graph");
    }
    return gp;
  }

  double length_of(std::size_t e) const { return g_.edges()[e].length; }

  Point vertex_point(std::size_t v) const {
    const std::size_t e = *std::min_element(g_.incident(v).begin(), g_.incident(v).end());
    return GraphPoint{e, g_.edges()[e].u == v ? 0.0 : g_.edges()[e].length};
  }

  Point canonical(std::size_t e, double offset) const {
    const GraphEdge& ed = g_.edges()[e];
    offset = std::clamp(offset, 0.0, ed.length);
    if (offset <= kEps) return vertex_point(ed.u);
    if (offset >= ed.length - kEps) return vertex_point(ed.v);
    return GraphPoint{e, offset};
  }

  std::size_t connecting_edge(std::size_t p, std::size_t q) const {
    const double d = g_.vertex_distance(p, q);
    for (std::size_t e : g_.incident(p)) {
      const GraphEdge& ed = g_.edges()[e];
      const bool joins = (ed.u == p && ed.v == q) || (ed.v == p && ed.u == q);
      if (joins && ed.length <= d + 1e-9 * std::max(1.0, d)) return e;
    }
    throw Error(ErrorCode::Validation, "shortest path uses a missing edge");
  }

  std::vector<double> vertex_distances(const GraphPoint& c) const {
    const GraphEdge& e = g_.edges()[c.edge];
    std::vector<double> d(g_.vertex_count());
    for (std::size_t x = 0; x < d.size(); ++x) {
      d[x] = std::min(c.offset + g_.vertex_distance(e.u, x),
                      e.length - c.offset + g_.vertex_distance(e.v, x));
    }
    return d;
  }

  std::vector<Piece> edge_pieces(const GraphPoint& c, const std::vector<double>& dv,
                                 std::size_t e) const {
    const GraphEdge& ed = g_.edges()[e];
    const double w = ed.length;
    // Distance along the edge is the minimum of these lines (slope, intercept).
    std::vector<std::pair<double, double>> lines{{1.0, dv[ed.u]}, {-1.0, dv[ed.v] + w}};
    std::vector<double> cuts{0.0, w};
    if (c.edge == e) {
      lines.push_back({1.0, -c.offset});
      lines.push_back({-1.0, c.offset});
      cuts.push_back(c.offset);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (lines[i].first == lines[j].first) continue;
        const double t = (lines[j].second - lines[i].second) / (lines[i].first - lines[j].first);
        if (t > 0.0 && t < w) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto value = [&](double t) {
      double d = std::min(lines[0].first * t + lines[0].second, lines[1].first * t + lines[1].second);
      if (c.edge == e) d = std::min(d, std::abs(t - c.offset));
      return d;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      pieces.push_back({cuts[i], cuts[i + 1], value(cuts[i]), value(cuts[i + 1])});
    }
    return pieces;
  }

  Route route(const GraphPoint& a, const GraphPoint& b) const {
    const GraphEdge& ea = g_.edges()[a.edge];
    const GraphEdge& eb = g_.edges()[b.edge];
    Route best;
    best.length = std::numeric_limits<double>::infinity();
    bool have = false;
    if (a.edge == b.edge) {
      best.length = std::abs(a.offset - b.offset);
      have = true;
    }
    const std::pair<std::size_t, double> starts[2] = {{ea.u, a.offset}, {ea.v, ea.length - a.offset}};
    const std::pair<std::size_t, double> ends[2] = {{eb.u, b.offset}, {eb.v, eb.length - b.offset}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double len = starts[i].second + g_.vertex_distance(starts[i].first, ends[j].first) +
                           ends[j].second;
        const double tol = 1e-12 * std::max(1.0, len);
        if (have && len > best.length + tol) continue;
        std::vector<std::size_t> seq = g_.shortest_path(starts[i].first, ends[j].first);
        if (have && len >= best.length - tol && !(seq < best.vertices)) continue;
        if (have && best.vertices.empty() && len >= best.length - tol) continue;
        best.length = len;
        best.vertices = std::move(seq);
        best.from_u = i == 0;
        best.to_u = j == 0;
        have = true;
      }
    }
    return best;
  }

  MetricGraph g_;
  std::size_t base_;
};

}  // namespace

std::shared_ptr<const Model> make_graph_model(MetricGraph graph, std::size_t base_vertex) {
  return std::make_shared<GraphModel>(std::move(graph), base_vertex);
}

}  // namespace gcb::detail
