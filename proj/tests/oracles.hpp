#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's geometry beyond constructing points.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "gcb/tree.hpp"

namespace oracle {

/// "0102" -> word with raw letters {0, 1, 0, 2}.
inline gcb::tree::Word word(const std::string& digits) {
  gcb::tree::Word w;
  for (char c : digits) w.push_back(static_cast<char>(c - '0'));
  return w;
}

/// Explicit finite piece of RegularTree(q): every vertex of depth <= max_depth
/// with its edges, and BFS distances.
class ExplicitTree {
 public:
  ExplicitTree(int q, int max_depth) {
    add(gcb::tree::Word{}, -1);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const auto w = words_[i];
      if (static_cast<int>(w.size()) == max_depth) continue;
      const int letters = w.empty() ? q + 1 : q;
      for (int c = 0; c < letters; ++c) add(w + static_cast<char>(c), static_cast<int>(i));
    }
  }

  const std::vector<gcb::tree::Word>& vertices() const { return words_; }

  int bfs(const gcb::tree::Word& a, const gcb::tree::Word& b) const {
    const std::size_t s = index_.at(a);
    const std::size_t t = index_.at(b);
    std::vector<int> dist(words_.size(), -1);
    std::queue<std::size_t> queue;
    dist[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop();
      if (u == t) return dist[u];
      for (auto v : adj_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push(v);
        }
      }
    }
    return -1;
  }

  /// Vertices at BFS distance exactly (or at most) n from the root.
  std::vector<gcb::tree::Word> sphere(int n) const {
    std::vector<gcb::tree::Word> out;
    for (const auto& w : words_) {
      if (static_cast<int>(w.size()) == n) out.push_back(w);
    }
    return out;
  }
  std::vector<gcb::tree::Word> ball(int n) const {
    std::vector<gcb::tree::Word> out;
    for (const auto& w : words_) {
      if (static_cast<int>(w.size()) <= n) out.push_back(w);
    }
    return out;
  }

 private:
  void add(const gcb::tree::Word& w, int parent) {
    index_[w] = words_.size();
    words_.push_back(w);
    adj_.emplace_back();
    if (parent >= 0) {
      adj_.back().push_back(static_cast<std::size_t>(parent));
      adj_[static_cast<std::size_t>(parent)].push_back(words_.size() - 1);
    }
  }

  std::vector<gcb::tree::Word> words_;
  std::map<gcb::tree::Word, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adj_;
};

using Matrix = std::vector<std::vector<double>>;

/// Largest subset with all pairwise distances > sep, by exhaustive search.
inline std::size_t max_separated_exhaustive(const Matrix& d, double sep) {
  const std::size_t n = d.size();
  std::size_t best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (chosen.size() + (n - i) <= best) return;
    if (i == n) {
      best = std::max(best, chosen.size());
      return;
    }
    bool ok = true;
    for (auto j : chosen) ok = ok && d[i][j] > sep;
    if (ok) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
    rec(i + 1);
  };
  rec(0);
  return best;
}

/// Smallest subset S with every point within r of S, by exhaustive search
/// over subsets of increasing size (n <= 25).
inline std::size_t min_cover_exhaustive(const Matrix& d, double r) {
  const std::size_t n = d.size();
  std::vector<std::uint32_t> reach(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] <= r) reach[i] |= 1u << j;
    }
  }
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1u;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t, std::uint32_t)> rec = [&](std::size_t from, std::uint32_t covered) {
      if (pick.size() == k) return covered == all;
      for (std::size_t i = from; i < n; ++i) {
        pick.push_back(i);
        if (rec(i + 1, covered | reach[i])) return true;
        pick.pop_back();
      }
      return false;
    };
    if (rec(0, 0)) return k;
  }
  return n;
}

/// Largest four-point defect over every ordered quadruple of the matrix.
inline double delta_exhaustive(const Matrix& d) {
  const std::size_t n = d.size();
  double best = 0.0;
  auto gp = [&](std::size_t w, std::size_t a, std::size_t b) { return 0.5 * (d[w][a] + d[w][b] - d[a][b]); };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t w = 0; w < n; ++w) {
          best = std::max(best, std::min(gp(w, x, y), gp(w, y, z)) - gp(w, x, z));
        }
  return best;
}

}  // namespace oracle
