#include "gcb/tree.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace gcb::tree {

namespace {

constexpr double kSnap = 1e-12;

Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return w.substr(0, d);
  }
  return w;
}

}  // namespace

End::End(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw std::invalid_argument("end period must be nonempty");
  period_ = primitive_root(period_);
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    std::rotate(period_.begin(), period_.end() - 1, period_.end());
  }
}

char End::letter(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

Word End::head(std::size_t n) const {
  Word w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.push_back(letter(i));
  return w;
}

std::size_t common_prefix(const End& a, const End& b) {
  const std::size_t bound = std::max(a.prefix().size(), b.prefix().size()) +
                            std::lcm(a.period().size(), b.period().size());
  for (std::size_t i = 0; i < bound; ++i) {
    if (a.letter(i) != b.letter(i)) return i;
  }
  return kInfinite;
}

std::size_t common_prefix(std::string_view word, const End& e) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] != e.letter(i)) return i;
  }
  return word.size();
}

std::size_t common_prefix(std::string_view a, std::string_view b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

bool lex_less(const Point& a, const Point& b) {
  return std::tie(a.word, a.back) < std::tie(b.word, b.back);
}

Point canonical(Word word, double back) {
  if (back <= kSnap) return {std::move(word), 0.0};
  if (back >= 1.0 - kSnap) {
    if (word.empty()) throw std::invalid_argument("root has no parent edge");
    word.pop_back();
    return {std::move(word), 0.0};
  }
  return {std::move(word), back};
}

double distance(const Point& a, const Point& b) {
  const std::size_t k = common_prefix(a.word, b.word);
  const double da = depth(a);
  const double db = depth(b);
  if (k == a.word.size() && k == b.word.size()) return std::abs(a.back - b.back);
  if (k == a.word.size()) return db - da;
  if (k == b.word.size()) return da - db;
  return da + db - 2.0 * static_cast<double>(k);
}

double meeting_depth(const Point& a, const Point& b) {
  const std::size_t k = common_prefix(a.word, b.word);
  const double da = depth(a);
  const double db = depth(b);
  if (k == a.word.size() && k == b.word.size()) return std::min(da, db);
  if (k == a.word.size()) return da;
  if (k == b.word.size()) return db;
  return static_cast<double>(k);
}

Point ancestor_at(const Point& p, double h) {
  h = std::clamp(h, 0.0, depth(p));
  const auto j = static_cast<std::size_t>(std::ceil(h - kSnap));
  return canonical(p.word.substr(0, std::min(j, p.word.size())), static_cast<double>(j) - h);
}

Point on_end(const End& e, double h) {
  h = std::max(h, 0.0);
  const auto j = static_cast<std::size_t>(std::ceil(h - kSnap));
  return canonical(e.head(j), static_cast<double>(j) - h);
}

Point along(const Point& from, const Point& to, double s) {
  const double m = meeting_depth(from, to);
  const double up = depth(from) - m;
  const double total = up + depth(to) - m;
  s = std::clamp(s, 0.0, total);
  if (s <= up) return ancestor_at(from, depth(from) - s);
  return ancestor_at(to, m + (s - up));
}

Line line_between(End minus, End plus) {
  const std::size_t k = common_prefix(minus, plus);
  if (k == kInfinite) throw std::invalid_argument("line ends coincide");
  return Line{std::move(minus), std::move(plus), k, 0.0};
}

Point eval(const Line& line, double t) {
  const double p = t + line.shift;
  const double top = static_cast<double>(line.top);
  if (p >= 0.0) return on_end(line.plus, top + p);
  return on_end(line.minus, top - p);
}

double line_position(const Line& line, const Point& point) {
  const double d = depth(point);
  const double top = static_cast<double>(line.top);
  if (common_prefix(point.word, line.plus) == point.word.size() && d >= top) return d - top;
  return top - d;
}

Line anchored_at(Line line, const Point& point) {
  line.shift = line_position(line, point);
  return line;
}

End walk_end(const Word& start, int arrival, std::string_view choices, int q) {
  Word v = start;
  auto step = [&](int choice) {
    // Admissible neighbours: children ascending, then the parent.
    const int children = v.empty() ? q + 1 : q;
    int index = 0;
    for (int c = 0; c < children; ++c) {
      if (arrival == c) continue;
      if (index++ == choice) {
        v.push_back(static_cast<char>(c));
        arrival = kFromParent;
        return;
      }
    }
    if (!v.empty() && arrival != kFromParent && index == choice) {
      arrival = static_cast<unsigned char>(v.back());
      v.pop_back();
      return;
    }
    throw std::invalid_argument("walk choice out of range");
  };
  for (char c : choices) step(static_cast<unsigned char>(c));
  while (arrival != kFromParent) step(0);
  return End(v, Word(1, '\0'));
}

End continue_beyond(const Point& x, const Point& y, int q) {
  const double m = meeting_depth(x, y);
  if (depth(y) > m) return walk_end(y.word, kFromParent, {}, q);
  if (y.back > 0.0) {
    Word parent = y.word.substr(0, y.word.size() - 1);
    return walk_end(parent, static_cast<unsigned char>(y.word.back()), {}, q);
  }
  // y is a vertex above x: x's word passes through y.
  return walk_end(y.word, static_cast<unsigned char>(x.word[y.word.size()]), {}, q);
}

}  // namespace gcb::tree
