#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gcb/space.hpp"

namespace gcb {

enum class NetRole { Dense, Separated, Both };

struct Net {
  std::vector<Point> points;
  double scale = 0.0;
  NetRole role = NetRole::Both;

  std::size_t cardinality() const { return points.size(); }
};

/// Greedy order used by every net construction: farthest from `center` first,
/// ties broken by the model's coordinate order.
std::vector<Point> greedy_order(const Space& space, std::span<const Point> sample,
                                const Point& center);

/// Indices (into `ordered`) kept by a greedy scan that accepts a point iff it is
/// farther than `radius` from every point accepted so far. `hint` is a point
/// near the middle of the sample, used only to speed up neighbour queries.
std::vector<std::size_t> greedy_scan(const Space& space, std::span<const Point> ordered,
                                     double radius, const Point& hint);

/// Maximal 2r-separated subset, built greedily. The result is also 2r-dense.
Net max_separated(const Space& space, std::span<const Point> sample, double r,
                  const Point& center);
Net max_separated(const Space& space, std::span<const Point> sample, double r);

/// r-dense subset built greedily; its size bounds Cov(sample, r) from above.
Net greedy_cover(const Space& space, std::span<const Point> sample, double r, const Point& center);
Net greedy_cover(const Space& space, std::span<const Point> sample, double r);

struct ChainReport {
  std::size_t pack_2r = 0;  // greedy 4r-separated subset
  std::size_t cov_2r = 0;   // greedy 2r-dense subset
  std::size_t pack_r = 0;   // greedy 2r-separated subset
  bool holds = false;
};

/// Pack(Y, 2r) <= Cov(Y, 2r) <= Pack(Y, r) evaluated with greedy nets.
ChainReport verify_pack_cov_chain(const Space& space, std::span<const Point> sample, double r,
                                  const Point& center);

struct PropagationReport {
  std::size_t pack = 0;
  double pack_bound = 0.0;
  std::size_t cover = 0;
  double cover_bound = 0.0;
  bool holds = false;
};

/// Empirical Pack(B(x, R), r) and Cov(B(x, R), r) at the basepoint against the
/// bounds implied by the declared packing parameters. `mesh` defaults to r / 4.
PropagationReport verify_packing_propagation(const Space& space, double R, double r,
                                             double mesh = 0.0);

/// Upper bounds on Pack(R, r) and Cov(R, r) for a space P0-packed at scale r0.
double pack_bound(PackingParams p, double R, double r);
double cover_bound(PackingParams p, double R, double r);

}  // namespace gcb
