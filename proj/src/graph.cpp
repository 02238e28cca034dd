#include "gcb/graph.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "gcb/error.hpp"

namespace gcb {

namespace {

constexpr double kPathEps = 1e-9;

}  // namespace

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<GraphEdge> edges)
    : n_(vertex_count), edges_(std::move(edges)), incident_(vertex_count) {
  if (n_ == 0) throw Error(ErrorCode::Validation, "graph has no vertices");
  if (n_ > kMaxVertices) {
    throw Error(ErrorCode::Capacity, "graph exceeds " + std::to_string(kMaxVertices) + " vertices");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= n_ || e.v >= n_) throw Error(ErrorCode::Validation, "edge endpoint out of range");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw Error(ErrorCode::Validation, "edge weights must be positive and finite");
    }
    incident_[e.u].push_back(i);
    if (e.v != e.u) incident_[e.v].push_back(i);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  dist_.assign(n_ * n_, inf);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n_; ++s) {
    double* row = &dist_[s * n_];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [d, a] = heap.top();
      heap.pop();
      if (d > row[a]) continue;
      for (std::size_t ei : incident_[a]) {
        const auto& e = edges_[ei];
        const std::size_t b = e.u == a ? e.v : e.u;
        if (d + e.length < row[b]) {
          row[b] = d + e.length;
          heap.emplace(row[b], b);
        }
      }
    }
    for (std::size_t t = 0; t < n_; ++t) {
      if (!std::isfinite(row[t])) throw Error(ErrorCode::Validation, "graph is not connected");
    }
  }
}

MetricGraph MetricGraph::parse(std::istream& in) {
  std::vector<GraphEdge> edges;
  std::size_t max_vertex = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    long long u = -1;
    long long v = -1;
    double w = 0.0;
    std::string rest;
    if (!(ls >> u >> v >> w) || (ls >> rest) || u < 0 || v < 0) {
      throw Error(ErrorCode::Parse, "malformed edge on line " + std::to_string(line_no));
    }
    edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), w});
    max_vertex = std::max({max_vertex, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  if (edges.empty()) throw Error(ErrorCode::Parse, "graph file has no edges");
  return MetricGraph(max_vertex + 1, std::move(edges));
}

MetricGraph MetricGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Configuration, "cannot open graph file " + path);
  return parse(in);
}

std::vector<std::size_t> MetricGraph::shortest_path(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> path{a};
  std::size_t cur = a;
  while (cur != b) {
    std::size_t best = n_;
    for (std::size_t ei : incident_[cur]) {
      const auto& e = edges_[ei];
      const std::size_t nb = e.u == cur ? e.v : e.u;
      if (std::abs(e.length + vertex_distance(nb, b) - vertex_distance(cur, b)) <= kPathEps &&
          nb < best) {
        best = nb;
      }
    }
    path.push_back(best);
    cur = best;
  }
  return path;
}

double MetricGraph::total_length() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += e.length;
  return sum;
}

}  // namespace gcb
