#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace gcb {

struct GraphEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 0.0;
};

/// Finite connected metric graph with positive edge lengths. All-pairs vertex
/// distances are computed once at construction.
class MetricGraph {
 public:
  static constexpr std::size_t kMaxVertices = 4000;

  MetricGraph() = default;
  MetricGraph(std::size_t vertex_count, std::vector<GraphEdge> edges);

  /// Parses "u v w" lines; '#' lines and blank lines are ignored.
  static MetricGraph parse(std::istream& in);
  static MetricGraph load(const std::string& path);

  std::size_t vertex_count() const { return n_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& incident(std::size_t vertex) const { return incident_[vertex]; }

  double vertex_distance(std::size_t a, std::size_t b) const { return dist_[a * n_ + b]; }

  /// Lexicographically smallest vertex sequence among shortest paths from a to b.
  std::vector<std::size_t> shortest_path(std::size_t a, std::size_t b) const;

  double total_length() const;

 private:
  std::size_t n_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<double> dist_;
};

}  // namespace gcb
