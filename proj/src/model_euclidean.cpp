#include <algorithm>
#include <cmath>
#include <numbers>

#include "model.hpp"

namespace gcb::detail {

namespace {

constexpr const char* kName = "Euclidean";

class EuclideanModel final : public Model {
 public:
  explicit EuclideanModel(int dim) : dim_(dim) {}

  ModelKind kind() const override { return ModelKind::Euclidean; }
  std::string name() const override { return "Euclidean(" + std::to_string(dim_) + ")"; }
  int parameter() const override { return dim_; }
  Point default_basepoint() const override {
    return EucPoint{std::vector<double>(static_cast<std::size_t>(dim_), 0.0)};
  }

  double distance(const Point& x, const Point& y) const override {
    const auto& a = coords(x);
    const auto& b = coords(y);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }

  Point bicombing(const Point& x, const Point& y, double t) const override {
    const auto& a = coords(x);
    const auto& b = coords(y);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
    return EucPoint{std::move(out)};
  }

  GeodesicLine extend_to_line(const Point& x, const Point& y) const override {
    const auto& a = coords(x);
    const auto& b = coords(y);
    const double d = distance(x, y);
    std::vector<double> dir(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dir[i] = (b[i] - a[i]) / d;
    return EucLine{a, std::move(dir)};
  }

  Point eval(const GeodesicLine& line, double t) const override {
    const auto& l = line_of(line);
    std::vector<double> out(l.origin.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = l.origin[i] + t * l.direction[i];
    return EucPoint{std::move(out)};
  }

  GeodesicLine shifted(const GeodesicLine& line, double t) const override {
    EucLine l = line_of(line);
    for (std::size_t i = 0; i < l.origin.size(); ++i) l.origin[i] += t * l.direction[i];
    return l;
  }

  std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GeodesicLine& line) const override {
    const auto& l = line_of(line);
    std::vector<double> back(l.direction.size());
    for (std::size_t i = 0; i < back.size(); ++i) back[i] = -l.direction[i];
    return {EucDirection{std::move(back)}, EucDirection{l.direction}};
  }

  Point ray_point(const Point& x, const BoundaryPoint& z, double t) const override {
    const auto& a = coords(x);
    const auto& u = direction(z);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * u[i];
    return EucPoint{std::move(out)};
  }

  double distance_to_ray(const Point& y, const Point& x, const BoundaryPoint& z) const override {
    return point_to_line(coords(y), coords(x), direction(z), true);
  }

  double distance_to_line(const Point& y, const GeodesicLine& line) const override {
    const auto& l = line_of(line);
    return point_to_line(coords(y), l.origin, l.direction, false);
  }

  std::vector<Point> sample_region(const Region& region, double mesh,
                                   std::size_t cap) const override {
    const auto& c = coords(region_center(region));
    double lo = 0.0;
    double hi = 0.0;
    bool shell_only = false;
    if (const auto* b = std::get_if<Ball>(&region)) {
      hi = b->radius;
    } else if (const auto* s = std::get_if<Sphere>(&region)) {
      lo = hi = s->radius;
      shell_only = true;
    } else {
      const auto& an = std::get<Annulus>(region);
      lo = an.inner;
      hi = an.outer;
    }
    const double h = mesh / std::sqrt(static_cast<double>(dim_));
    const double eps = 0.5 * mesh;  // half the grid cell diagonal
    if (hi == 0.0) return {EucPoint{c}};

    const double reach = hi + eps;
    const double unit_ball = std::pow(std::numbers::pi, dim_ / 2.0) / std::tgamma(dim_ / 2.0 + 1.0);
    if (unit_ball * std::pow(reach / h + 1.0, dim_) > 2.0 * static_cast<double>(cap)) {
      throw_capacity(cap);
    }
    const auto K = static_cast<long>(std::ceil(reach / h));
    std::vector<long> k(static_cast<std::size_t>(dim_), -K);
    std::vector<double> offset(static_cast<std::size_t>(dim_));
    std::vector<std::vector<double>> pts;
    auto emit = [&](double scale) {
      std::vector<double> p(c.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = c[i] + scale * offset[i];
      pts.push_back(std::move(p));
      if (pts.size() > cap) throw_capacity(cap);
    };
    for (;;) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) {
        offset[i] = static_cast<double>(k[i]) * h;
        n2 += offset[i] * offset[i];
      }
      const double n = std::sqrt(n2);
      if (!shell_only && n >= lo && n <= hi) emit(1.0);
      if (n > 0.0) {
        if (n > hi && n <= hi + eps) emit(hi / n);
        if (lo > 0.0 && ((n < lo && n >= lo - eps) || (shell_only && n >= lo && n <= lo + eps))) {
          emit(lo / n);
        }
      }
      std::size_t i = 0;
      while (i < k.size() && k[i] == K) k[i++] = -K;
      if (i == k.size()) break;
      ++k[i];
    }
    if (shell_only && lo == 0.0) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Point> out;
    out.reserve(pts.size());
    for (auto& p : pts) out.push_back(EucPoint{std::move(p)});
    return out;
  }

  bool coordinate_less(const Point& a, const Point& b) const override {
    return coords(a) < coords(b);
  }

  void separation_profile(const GeodesicLine& a, const GeodesicLine& b, double s0, double h,
                          std::span<double> out) const override {
    const auto& la = line_of(a);
    const auto& lb = line_of(b);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double s = s0 + static_cast<double>(k) * h;
      double n2 = 0.0;
      for (std::size_t i = 0; i < la.origin.size(); ++i) {
        const double d = (la.origin[i] - lb.origin[i]) + s * (la.direction[i] - lb.direction[i]);
        n2 += d * d;
      }
      out[k] = std::sqrt(n2);
    }
  }

  double ball_measure(const Point& center, double radius) const override {
    coords(center);
    return std::pow(std::numbers::pi, dim_ / 2.0) / std::tgamma(dim_ / 2.0 + 1.0) *
           std::pow(radius, dim_);
  }

 private:
  const std::vector<double>& coords(const Point& p) const {
    const auto& c = expect<EucPoint>(p, kName).coords;
    if (c.size() != static_cast<std::size_t>(dim_)) {
      throw Error(ErrorCode::ModelMismatch, "point dimension does not match " + name());
    }
    return c;
  }

  const EucLine& line_of(const GeodesicLine& line) const {
    const auto& l = expect_line<EucLine>(line, kName);
    if (l.origin.size() != static_cast<std::size_t>(dim_)) {
      throw Error(ErrorCode::ModelMismatch, "line dimension does not match " + name());
    }
    return l;
  }

  const std::vector<double>& direction(const BoundaryPoint& z) const {
    const auto& u = expect_boundary<EucDirection>(z, kName).unit;
    if (u.size() != static_cast<std::size_t>(dim_)) {
      throw Error(ErrorCode::ModelMismatch, "direction dimension does not match " + name());
    }
    return u;
  }

  static double point_to_line(const std::vector<double>& y, const std::vector<double>& x,
                              const std::vector<double>& u, bool ray) {
    double t = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) t += (y[i] - x[i]) * u[i];
    if (ray) t = std::max(0.0, t);
    double n2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = y[i] - x[i] - t * u[i];
      n2 += d * d;
    }
    return std::sqrt(n2);
  }

  int dim_;
};

}  // namespace

std::shared_ptr<const Model> make_euclidean_model(int dim) {
  return std::make_shared<EuclideanModel>(dim);
}

}  // namespace gcb::detail
