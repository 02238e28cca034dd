#include "boundary_hull.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "gcb/error.hpp"
#include "gcb/hyperboloid.hpp"

namespace gcb::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleEps = 1e-12;
// Membership slack for angles recovered from lines in hyperboloid coordinates.
constexpr double kMemberEps = 1e-9;

tree::Word extend(tree::Word w, int c) {
  w.push_back(static_cast<char>(c));
  return w;
}

/// States along the root path of w: st[i] is the state after i letters.
std::vector<int> path_states(const TreeHull& hull, const tree::Word& w) {
  std::vector<int> st(w.size() + 1, -1);
  st[0] = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    st[i + 1] = hull.next(st[i], static_cast<unsigned char>(w[i]));
  }
  return st;
}

double circular_gap(double a, double b) {
  const double d = hyp::wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

bool in_arc(double x, double start, double length, double eps = kAngleEps) {
  const double d = hyp::wrap_angle(x - start);
  return d <= length + eps || d >= kTwoPi - eps;
}

}  // namespace

// ---------------------------------------------------------------------------
// TreeHull
// ---------------------------------------------------------------------------

TreeHull::TreeHull(const BoundarySubset& C, int q) : q_(q) {
  if (C.kind() != BoundarySubset::Kind::TreeAutomaton) {
    throw Error(ErrorCode::ModelMismatch, "boundary subset is not a tree automaton");
  }
  if (C.alphabet() > q + 1) {
    throw Error(ErrorCode::Validation, "automaton alphabet exceeds the tree degree");
  }
  const auto& user = C.transitions();
  const std::size_t n = user.size();
  const int letters = C.alphabet();
  next_.assign(n + 1, std::vector<int>(static_cast<std::size_t>(q) + 1, -1));
  for (int c = 0; c < letters; ++c) {
    if (user[0][c] >= 0) next_[0][c] = user[0][c] + 1;
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (int c = 0; c < std::min(letters, q); ++c) {
      if (user[s][c] >= 0) next_[s + 1][c] = user[s][c] + 1;
    }
  }

  std::vector<char> live(n + 1, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s <= n; ++s) {
      if (!live[s]) continue;
      const bool any = std::any_of(next_[s].begin(), next_[s].end(),
                                   [&](int t) { return t >= 0 && live[t]; });
      if (!any) {
        live[s] = 0;
        changed = true;
      }
    }
  }
  for (std::size_t s = 0; s <= n; ++s) {
    for (int& t : next_[s]) {
      if (!live[s] || (t >= 0 && !live[t])) t = -1;
    }
  }
  if (!live[0]) throw Error(ErrorCode::DegenerateSubset, "boundary subset is empty");

  std::vector<char> seen(n + 1, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    if (out_degree(s) >= 2) two_ends_ = true;
    for (int t : next_[s]) {
      if (t >= 0 && !seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  if (two_ends_) {
    for (int s = 0; out_degree(s) == 1;) {
      const auto it = std::find_if(next_[s].begin(), next_[s].end(), [](int t) { return t >= 0; });
      top_.push_back(static_cast<char>(it - next_[s].begin()));
      s = *it;
    }
  }
}

int TreeHull::out_degree(int s) const {
  if (s < 0) return 0;
  return static_cast<int>(std::count_if(next_[s].begin(), next_[s].end(), [](int t) { return t >= 0; }));
}

int TreeHull::state(const tree::Word& w) const {
  int s = 0;
  for (char c : w) {
    s = next(s, static_cast<unsigned char>(c));
    if (s < 0) return -1;
  }
  return s;
}

tree::End TreeHull::min_end(tree::Word w, int s) const {
  std::vector<int> seen(next_.size(), -1);
  tree::Word tail;
  while (seen[s] < 0) {
    seen[s] = static_cast<int>(tail.size());
    const auto it = std::find_if(next_[s].begin(), next_[s].end(), [](int t) { return t >= 0; });
    tail.push_back(static_cast<char>(it - next_[s].begin()));
    s = *it;
  }
  const auto j = static_cast<std::size_t>(seen[s]);
  return tree::End(w + tail.substr(0, j), tail.substr(j));
}

std::optional<tree::End> TreeHull::end_outside(const tree::Word& w) const {
  const auto st = path_states(*this, w);
  for (std::size_t i = w.size(); i-- > 0;) {
    if (st[i] < 0) continue;
    for (int c = 0; c <= q_; ++c) {
      if (c == static_cast<unsigned char>(w[i])) continue;
      const int t = next(st[i], c);
      if (t >= 0) return min_end(extend(w.substr(0, i), c), t);
    }
  }
  return std::nullopt;
}

bool TreeHull::contains(const tree::End& e) const {
  int s = 0;
  for (char c : e.prefix()) {
    const int letter = static_cast<unsigned char>(c);
    if (letter > q_) return false;
    s = next(s, letter);
    if (s < 0) return false;
  }
  std::vector<char> seen(next_.size(), 0);
  while (!seen[s]) {
    seen[s] = 1;
    for (char c : e.period()) {
      const int letter = static_cast<unsigned char>(c);
      if (letter > q_) return false;
      s = next(s, letter);
      if (s < 0) return false;
    }
  }
  return true;
}

double TreeHull::distance(const tree::Point& p) const {
  return tree::distance(p, projection(p));
}

tree::Point TreeHull::projection(const tree::Point& p) const {
  const bool below = p.word.size() >= top_.size() && p.word.compare(0, top_.size(), top_) == 0 &&
                     !(p.word.size() == top_.size() && p.back > 0.0);
  if (!below) return {top_, 0.0};
  int s = state(top_);
  std::size_t k = top_.size();
  while (k < p.word.size()) {
    const int t = next(s, static_cast<unsigned char>(p.word[k]));
    if (t < 0) break;
    s = t;
    ++k;
  }
  if (k == p.word.size()) return p;
  return {p.word.substr(0, k), 0.0};
}

tree::Line TreeHull::line_through(const tree::Point& a) const {
  const int s = state(a.word);
  if (s < 0) throw Error(ErrorCode::Domain, "point is not on the hull");
  if (a.back == 0.0 && out_degree(s) >= 2) {
    std::vector<int> live;
    for (int c = 0; c <= q_ && live.size() < 2; ++c) {
      if (next(s, c) >= 0) live.push_back(c);
    }
    return tree::anchored_at(
        tree::line_between(min_end(extend(a.word, live[0]), next(s, live[0])),
                           min_end(extend(a.word, live[1]), next(s, live[1]))),
        a);
  }
  auto outside = end_outside(a.word);
  if (!outside) throw Error(ErrorCode::Domain, "point is not on the hull");
  return tree::anchored_at(tree::line_between(std::move(*outside), min_end(a.word, s)), a);
}

std::vector<std::vector<double>> TreeHull::path_counts(int max_len) const {
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(max_len) + 1,
                                          std::vector<double>(next_.size(), 0.0));
  for (std::size_t s = 0; s < next_.size(); ++s) counts[0][s] = out_degree(static_cast<int>(s)) > 0;
  for (int L = 1; L <= max_len; ++L) {
    for (std::size_t s = 0; s < next_.size(); ++s) {
      for (int t : next_[s]) {
        if (t >= 0) counts[L][s] += counts[L - 1][t];
      }
    }
  }
  return counts;
}

std::vector<std::pair<int, tree::End>> TreeHull::rays(const tree::Word& x, int L) const {
  std::vector<std::pair<int, tree::End>> out;
  if (L < 1) return out;
  std::function<void(tree::Word&, int, int, int)> down = [&](tree::Word& w, int s, int left,
                                                              int dir) {
    if (left == 0) {
      out.emplace_back(dir, min_end(w, s));
      return;
    }
    for (int c = 0; c <= q_; ++c) {
      const int t = next(s, c);
      if (t < 0) continue;
      w.push_back(static_cast<char>(c));
      down(w, t, left - 1, dir);
      w.pop_back();
    }
  };
  const auto st = path_states(*this, x);
  const std::size_t n = x.size();
  if (st[n] >= 0) {
    for (int c = 0; c <= q_; ++c) {
      const int t = next(st[n], c);
      if (t < 0) continue;
      tree::Word w = extend(x, c);
      down(w, t, L - 1, c);
    }
  }
  for (std::size_t j = 1; j <= std::min<std::size_t>(static_cast<std::size_t>(L), n); ++j) {
    const tree::Word a = x.substr(0, n - j);
    const int c0 = static_cast<unsigned char>(x[n - j]);
    const int sa = st[n - j];
    if (static_cast<int>(j) < L) {
      for (int d = 0; d <= q_; ++d) {
        const int t = next(sa, d);
        if (d == c0 || t < 0) continue;
        tree::Word w = extend(a, d);
        down(w, t, L - static_cast<int>(j) - 1, tree::kFromParent);
      }
      continue;
    }
    bool found = false;
    for (int d = 0; d <= q_ && !found; ++d) {
      const int t = next(sa, d);
      if (d == c0 || t < 0) continue;
      out.emplace_back(tree::kFromParent, min_end(extend(a, d), t));
      found = true;
    }
    if (!found) {
      if (auto e = end_outside(a)) out.emplace_back(tree::kFromParent, std::move(*e));
    }
  }
  return out;
}

double TreeHull::shadow_count(const tree::Word& x, int L,
                              const std::vector<std::vector<double>>& counts) const {
  if (L <= 0) return 1.0;
  const auto st = path_states(*this, x);
  const std::size_t n = x.size();
  double total = st[n] >= 0 ? counts[L][st[n]] : 0.0;
  for (std::size_t j = 1; j <= std::min<std::size_t>(static_cast<std::size_t>(L), n); ++j) {
    const int c0 = static_cast<unsigned char>(x[n - j]);
    const int sa = st[n - j];
    bool sibling = false;
    for (int d = 0; d <= q_; ++d) {
      const int t = next(sa, d);
      if (d == c0 || t < 0) continue;
      sibling = true;
      if (static_cast<int>(j) < L) total += counts[L - static_cast<int>(j) - 1][t];
    }
    if (static_cast<int>(j) == L && (sibling || end_outside(x.substr(0, n - j)))) total += 1.0;
  }
  return total;
}

// ---------------------------------------------------------------------------
// CircleHull
// ---------------------------------------------------------------------------

CircleHull::CircleHull(const BoundarySubset& C) {
  if (C.kind() != BoundarySubset::Kind::CircleArcs) {
    throw Error(ErrorCode::ModelMismatch, "boundary subset is not a set of arcs");
  }
  arcs_ = C.arc_list();
}

double CircleHull::to_visual(const hyp::Vec3& y, double theta) {
  const hyp::Vec3 n = hyp::unboost(y, hyp::ideal(theta));
  return hyp::wrap_angle(std::atan2(n.y, n.x));
}

double CircleHull::from_visual(const hyp::Vec3& y, double phi) {
  const hyp::Vec3 n = hyp::boost(y, hyp::ideal(phi));
  return hyp::wrap_angle(std::atan2(n.y, n.x));
}

std::vector<std::pair<double, double>> CircleHull::visual_arcs(const hyp::Vec3& y) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(arcs_.size());
  for (const auto& [s, len] : arcs_) {
    if (len >= kTwoPi - kAngleEps) {
      out.emplace_back(0.0, kTwoPi);
      continue;
    }
    const double vs = to_visual(y, s);
    const double vl = len == 0.0 ? 0.0 : hyp::wrap_angle(to_visual(y, s + len) - vs);
    out.emplace_back(vs, vl);
  }
  return out;
}

std::pair<std::pair<double, double>, double> CircleHull::widest_pair(const hyp::Vec3& y) const {
  const auto v = visual_arcs(y);
  for (const auto& [si, li] : v) {
    const double anti = hyp::wrap_angle(si + std::numbers::pi);
    for (const auto& [sj, lj] : v) {
      if (in_arc(anti, sj, lj)) return {{si, anti}, std::numbers::pi};
      if (in_arc(sj, anti, li)) return {{hyp::wrap_angle(sj - std::numbers::pi), sj}, std::numbers::pi};
    }
  }
  std::vector<double> ends;
  for (const auto& [s, len] : v) {
    ends.push_back(s);
    ends.push_back(hyp::wrap_angle(s + len));
  }
  std::pair<double, double> best{ends[0], ends[0]};
  double gap = 0.0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      const double g = circular_gap(ends[i], ends[j]);
      if (g > gap) {
        gap = g;
        best = {ends[i], ends[j]};
      }
    }
  }
  return {best, gap};
}

double CircleHull::farthest_from(const hyp::Vec3& y, double u) const {
  const auto v = visual_arcs(y);
  const double anti = hyp::wrap_angle(u + std::numbers::pi);
  double best = u;
  double gap = -1.0;
  for (const auto& [s, len] : v) {
    if (in_arc(anti, s, len)) return anti;
    for (double e : {s, hyp::wrap_angle(s + len)}) {
      const double g = circular_gap(u, e);
      if (g > gap) {
        gap = g;
        best = e;
      }
    }
  }
  return best;
}

double CircleHull::distance(const hyp::Vec3& y) const {
  const double gap = widest_pair(y).second;
  if (gap >= std::numbers::pi - 1e-15) return 0.0;
  if (gap <= 0.0) return std::numeric_limits<double>::infinity();
  return std::acosh(1.0 / std::sin(gap / 2.0));
}

std::vector<double> CircleHull::sample(double step) const {
  std::vector<double> out;
  for (const auto& [s, len] : arcs_) {
    if (len == 0.0) {
      out.push_back(s);
      continue;
    }
    const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-9));
    const bool full = len >= kTwoPi - kAngleEps;
    for (std::size_t k = 0; k <= n; ++k) {
      if (full && k == n) break;
      out.push_back(hyp::wrap_angle(s + len * static_cast<double>(k) / static_cast<double>(n)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool CircleHull::contains(double theta) const {
  return std::any_of(arcs_.begin(), arcs_.end(),
                     [&](const auto& a) { return in_arc(theta, a.first, a.second, kMemberEps); });
}

bool CircleHull::has_two_points() const {
  for (const auto& [s, len] : arcs_) {
    if (len > 0.0) return true;
    if (circular_gap(s, arcs_[0].first) > kAngleEps) return true;
  }
  return false;
}

}  // namespace gcb::detail
