#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "gcb/space.hpp"

namespace gcb::detail {

/// Incremental spatial index returning a superset of the stored points within
/// `radius` of a query.
class NeighborIndex {
 public:
  virtual ~NeighborIndex() = default;
  virtual void insert(std::size_t id, const Point& p) = 0;
  virtual void candidates(const Point& p, std::vector<std::size_t>& out) const = 0;
};

std::unique_ptr<NeighborIndex> make_neighbor_index(const Space& space, double radius,
                                                   const Point& center);

}  // namespace gcb::detail
