#include "neighbor_index.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "model.hpp"

namespace gcb::detail {

namespace {

class BruteIndex final : public NeighborIndex {
 public:
  void insert(std::size_t id, const Point&) override { ids_.push_back(id); }
  void candidates(const Point&, std::vector<std::size_t>& out) const override {
    out.insert(out.end(), ids_.begin(), ids_.end());
  }

 private:
  std::vector<std::size_t> ids_;
};

// Buckets points by their vertex word; a query visits every vertex within the
// vertex distance a stored point could have.
class TreeIndex final : public NeighborIndex {
 public:
  TreeIndex(int q, double radius)
      : q_(q), reach_(static_cast<int>(std::ceil(radius + 2.0 - 1e-9)) - 1) {}

  void insert(std::size_t id, const Point& p) override {
    buckets_[std::get<tree::Point>(p).word].push_back(id);
  }

  void candidates(const Point& p, std::vector<std::size_t>& out) const override {
    visit(std::get<tree::Point>(p).word, tree::kNoArrival, reach_, out);
  }

 private:
  void visit(tree::Word& w, int arrival, int budget, std::vector<std::size_t>& out) const {
    if (auto it = buckets_.find(w); it != buckets_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    if (budget == 0) return;
    if (!w.empty() && arrival != tree::kFromParent) {
      const char last = w.back();
      w.pop_back();
      visit(w, static_cast<unsigned char>(last), budget - 1, out);
      w.push_back(last);
    }
    const int children = w.empty() ? q_ + 1 : q_;
    for (int c = 0; c < children; ++c) {
      if (c == arrival) continue;
      w.push_back(static_cast<char>(c));
      visit(w, tree::kFromParent, budget - 1, out);
      w.pop_back();
    }
  }

  void visit(const tree::Word& w, int arrival, int budget, std::vector<std::size_t>& out) const {
    tree::Word copy = w;
    visit(copy, arrival, budget, out);
  }

  int q_;
  int reach_;
  std::unordered_map<tree::Word, std::vector<std::size_t>> buckets_;
};

// Polar coordinates about the index center, bucketed into radial bands of
// width `radius`; each band is ordered by angle.
class HyperbolicIndex final : public NeighborIndex {
 public:
  HyperbolicIndex(double radius, const Point& center)
      : radius_(radius), center_(std::get<HypPoint>(center).coords) {}

  void insert(std::size_t id, const Point& p) override {
    const auto [rho, theta] = polar(p);
    bands_[band(rho)].emplace(theta, id);
  }

  void candidates(const Point& p, std::vector<std::size_t>& out) const override {
    const auto [rho, theta] = polar(p);
    const long b = band(rho);
    for (long k = b - 1; k <= b + 1; ++k) {
      auto it = bands_.find(k);
      if (it == bands_.end()) continue;
      const double m = std::min(rho, static_cast<double>(k) * radius_);
      const double ratio = m > 0.0 ? std::sinh(radius_ / 2.0) / std::sinh(m) : 2.0;
      if (ratio >= 1.0) {
        for (const auto& [a, id] : it->second) out.push_back(id);
        continue;
      }
      const double window = 2.0 * std::asin(ratio) + 1e-9;
      collect(it->second, theta - window, theta + window, out);
    }
  }

 private:
  using Band = std::multimap<double, std::size_t>;

  static void collect(const Band& band, double lo, double hi, std::vector<std::size_t>& out) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto range = [&](double a, double b) {
      for (auto it = band.lower_bound(a); it != band.end() && it->first <= b; ++it) {
        out.push_back(it->second);
      }
    };
    if (hi - lo >= two_pi) {
      range(0.0, two_pi);
      return;
    }
    if (lo < 0.0) {
      range(lo + two_pi, two_pi);
      range(0.0, hi);
    } else if (hi >= two_pi) {
      range(lo, two_pi);
      range(0.0, hi - two_pi);
    } else {
      range(lo, hi);
    }
  }

  std::pair<double, double> polar(const Point& p) const {
    const hyp::Vec3 v = hyp::unboost(center_, std::get<HypPoint>(p).coords);
    return {hyp::radius(v), hyp::angle(v)};
  }

  long band(double rho) const { return static_cast<long>(std::floor(rho / radius_)); }

  double radius_;
  hyp::Vec3 center_;
  std::unordered_map<long, Band> bands_;
};

struct CellHash {
  std::size_t operator()(const std::vector<long>& k) const {
    std::size_t h = 0;
    for (long v : k) h = h * 1000003u ^ std::hash<long>{}(v);
    return h;
  }
};

class GridIndex final : public NeighborIndex {
 public:
  explicit GridIndex(double radius) : cell_(radius) {}

  void insert(std::size_t id, const Point& p) override { cells_[key(p)].push_back(id); }

  void candidates(const Point& p, std::vector<std::size_t>& out) const override {
    const std::vector<long> base = key(p);
    std::vector<long> k = base;
    std::vector<int> off(base.size(), -1);
    for (;;) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = base[i] + off[i];
      if (auto it = cells_.find(k); it != cells_.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
      std::size_t i = 0;
      while (i < off.size() && off[i] == 1) off[i++] = -1;
      if (i == off.size()) break;
      ++off[i];
    }
  }

 private:
  std::vector<long> key(const Point& p) const {
    const auto& c = std::get<EucPoint>(p).coords;
    std::vector<long> k(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) k[i] = static_cast<long>(std::floor(c[i] / cell_));
    return k;
  }

  double cell_;
  std::unordered_map<std::vector<long>, std::vector<std::size_t>, CellHash> cells_;
};

}  // namespace

std::unique_ptr<NeighborIndex> make_neighbor_index(const Space& space, double radius,
                                                   const Point& center) {
  switch (space.kind()) {
    case ModelKind::RegularTree:
      return std::make_unique<TreeIndex>(space.parameter(), radius);
    case ModelKind::HyperbolicPlane:
      if (std::holds_alternative<HypPoint>(center) && radius > 0.0) {
        return std::make_unique<HyperbolicIndex>(radius, center);
      }
      break;
    case ModelKind::Euclidean:
      if (space.parameter() <= 4 && radius > 0.0) return std::make_unique<GridIndex>(radius);
      break;
    case ModelKind::MetricGraph:
      break;
  }
  return std::make_unique<BruteIndex>();
}

}  // namespace gcb::detail
