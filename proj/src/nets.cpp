#include "gcb/nets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcb/error.hpp"
#include "neighbor_index.hpp"

namespace gcb {

namespace {

double slack(double radius) { return 1e-9 * std::max(1.0, radius); }

void require_sample(std::span<const Point> sample, double r) {
  if (sample.empty()) throw Error(ErrorCode::EmptyRegion, "sample is empty");
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "scale must be positive");
}

Net build(const Space& space, std::span<const Point> sample, double radius, const Point& center,
          double scale, NetRole role) {
  const std::vector<Point> ordered = greedy_order(space, sample, center);
  Net net;
  net.scale = scale;
  net.role = role;
  for (std::size_t i : greedy_scan(space, ordered, radius, center)) net.points.push_back(ordered[i]);
  return net;
}

}  // namespace

std::vector<Point> greedy_order(const Space& space, std::span<const Point> sample,
                                const Point& center) {
  std::vector<double> dist(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) dist[i] = space.distance(center, sample[i]);
  std::vector<std::size_t> idx(sample.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return space.coordinate_less(sample[a], sample[b]);
  });
  std::vector<Point> out;
  out.reserve(sample.size());
  for (std::size_t i : idx) out.push_back(sample[i]);
  return out;
}

std::vector<std::size_t> greedy_scan(const Space& space, std::span<const Point> ordered,
                                     double radius, const Point& hint) {
  const double threshold = radius + slack(radius);
  auto index = detail::make_neighbor_index(space, threshold * (1.0 + 1e-9) + 1e-9, hint);
  std::vector<std::size_t> kept;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    cand.clear();
    index->candidates(ordered[i], cand);
    bool free = true;
    for (std::size_t j : cand) {
      if (space.distance(ordered[i], ordered[j]) <= threshold) {
        free = false;
        break;
      }
    }
    if (free) {
      index->insert(i, ordered[i]);
      kept.push_back(i);
    }
  }
  return kept;
}

Net max_separated(const Space& space, std::span<const Point> sample, double r,
                  const Point& center) {
  require_sample(sample, r);
  return build(space, sample, 2.0 * r, center, r, NetRole::Both);
}

Net max_separated(const Space& space, std::span<const Point> sample, double r) {
  return max_separated(space, sample, r, space.basepoint());
}

Net greedy_cover(const Space& space, std::span<const Point> sample, double r, const Point& center) {
  require_sample(sample, r);
  return build(space, sample, r, center, r, NetRole::Dense);
}

Net greedy_cover(const Space& space, std::span<const Point> sample, double r) {
  return greedy_cover(space, sample, r, space.basepoint());
}

ChainReport verify_pack_cov_chain(const Space& space, std::span<const Point> sample, double r,
                                  const Point& center) {
  ChainReport rep;
  rep.pack_2r = max_separated(space, sample, 2.0 * r, center).cardinality();
  rep.cov_2r = greedy_cover(space, sample, 2.0 * r, center).cardinality();
  rep.pack_r = max_separated(space, sample, r, center).cardinality();
  rep.holds = rep.pack_2r <= rep.cov_2r && rep.cov_2r <= rep.pack_r;
  return rep;
}

double pack_bound(PackingParams p, double R, double r) {
  const double e = r <= p.r0 ? R / r - 1.0 : R / p.r0 - 1.0;
  return p.P0 * std::pow(1.0 + p.P0, e);
}

double cover_bound(PackingParams p, double R, double r) {
  const double e = r <= 2.0 * p.r0 ? 2.0 * R / r - 1.0 : R / p.r0 - 1.0;
  return p.P0 * std::pow(1.0 + p.P0, e);
}

PropagationReport verify_packing_propagation(const Space& space, double R, double r, double mesh) {
  const auto params = space.packing();
  if (!params) throw Error(ErrorCode::Configuration, "space declares no packing parameters");
  if (!(r > 0.0 && r <= R)) throw Error(ErrorCode::Domain, "need 0 < r <= R");
  if (mesh <= 0.0) mesh = r / 4.0;
  const Point& x = space.basepoint();
  const auto sample = space.sample_region(Ball{x, R}, mesh);
  PropagationReport rep;
  rep.pack = max_separated(space, sample, r, x).cardinality();
  rep.cover = greedy_cover(space, sample, r, x).cardinality();
  rep.pack_bound = pack_bound(*params, R, r);
  rep.cover_bound = cover_bound(*params, R, r);
  rep.holds = static_cast<double>(rep.pack) <= rep.pack_bound &&
              static_cast<double>(rep.cover) <= rep.cover_bound;
  return rep;
}

}  // namespace gcb
