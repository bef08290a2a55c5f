#pragma once

// Brute-force reference implementations used only by the tests. They follow the
// definitions directly and share no code paths with the library beyond Shape/Filling
// storage.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "skewfill.hpp"

namespace oracle {

using namespace skewfill;

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for (std::uint32_t m = 0; m < (1U << n); ++m) {
    if (std::popcount(m) != k) continue;
    std::vector<int> s;
    for (int t = 0; t < n; ++t)
      if (m >> t & 1U) s.push_back(t + 1);
    out.push_back(s);
  }
  return out;
}

/// Every column/row selection whose induced grid equals the pattern shape and whose
/// values dominate the pattern's.
inline std::vector<Occurrence> occurrences(const Filling& host, const Filling& pat) {
  std::vector<Occurrence> out;
  const Shape& hs = host.shape();
  const Shape& ps = pat.shape();
  for (const auto& cols : subsets(hs.width(), ps.width()))
    for (const auto& rows : subsets(hs.height(), ps.height())) {
      bool ok = true;
      for (int a = 0; a < ps.width() && ok; ++a)
        for (int b = 0; b < ps.height() && ok; ++b) {
          const bool in_p = ps.contains(a + 1, b + 1);
          const bool in_h = hs.contains(cols[a], rows[b]);
          if (in_p != in_h) ok = false;
          else if (in_p && host.at({cols[a], rows[b]}) < pat.at({a + 1, b + 1})) ok = false;
        }
      if (ok) out.push_back({cols, rows});
    }
  return out;
}

inline bool contains(const Filling& host, const Filling& pat) { return !oracle::occurrences(host, pat).empty(); }

inline bool contains_shape(const Shape& host, const Shape& pat) {
  return oracle::contains(Filling(host), Filling(pat));
}

/// S is skew iff its up-left closure minus S is closed under moving up and left.
inline bool is_skew(const Shape& s) {
  const int w = s.width(), h = s.height();
  auto in_closure = [&](int c, int r) {
    for (const auto& x : s.cells())
      if (x.col >= c && x.row <= r) return true;
    return false;
  };
  auto in_f2 = [&](int c, int r) { return in_closure(c, r) && !s.contains(c, r); };
  for (int c = 1; c <= w; ++c)
    for (int r = 1; r <= h; ++r) {
      if (!in_f2(c, r)) continue;
      if (c > 1 && !in_f2(c - 1, r)) return false;
      if (r < h && !in_f2(c, r + 1)) return false;
    }
  return true;
}

inline bool no_empty_lines(const Shape& s) {
  for (int r = 1; r <= s.height(); ++r)
    if (s.row_count(r) == 0) return false;
  for (int c = 1; c <= s.width(); ++c)
    if (s.col_count(c) == 0) return false;
  return true;
}

/// All n-cell skew shapes without empty rows or columns, from subsets of the n x n grid.
inline std::set<Shape> skew_catalog(int n) {
  std::set<Shape> out;
  const int total = n * n;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int t, int start) {
    if (t == n) {
      CellList cells;
      for (int v : pick) cells.push_back({v % n + 1, v / n + 1});
      Shape s = Shape::from_cells(cells);
      if (oracle::no_empty_lines(s) && oracle::is_skew(s)) out.insert(s);
      return;
    }
    for (int v = start; v <= total - (n - t); ++v) {
      pick[t] = v;
      rec(t + 1, v + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Longest chain among nonzero cells by subset search. A chain of length k is an
/// occurrence of iota_k (NE) or delta_k (SE): strictly monotone cells whose induced
/// k x k grid lies inside the shape.
inline int longest_chain(const Filling& f, Direction dir, const std::optional<Rect>& region = std::nullopt) {
  CellList pts;
  for (const auto& c : f.shape().cells())
    if (f.at(c) > 0 && (!region || region->contains(c))) pts.push_back(c);
  int best = 0;
  const int m = static_cast<int>(pts.size());
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    CellList sel;
    for (int t = 0; t < m; ++t)
      if (mask >> t & 1U) sel.push_back(pts[t]);
    if (static_cast<int>(sel.size()) <= best) continue;
    std::sort(sel.begin(), sel.end(), [](Cell a, Cell b) { return a.col < b.col; });
    bool ok = true;
    for (std::size_t t = 1; t < sel.size() && ok; ++t) {
      if (sel[t].col == sel[t - 1].col) ok = false;
      else if (dir == Direction::NE ? sel[t].row <= sel[t - 1].row : sel[t].row >= sel[t - 1].row) ok = false;
    }
    for (const auto& a : sel)
      for (const auto& b : sel)
        if (ok && !f.shape().contains(a.col, b.row)) ok = false;
    if (ok) best = static_cast<int>(sel.size());
  }
  return best;
}

inline bool nw_ferrers(const CellList& cells) {
  if (cells.empty()) return false;
  const Shape s = Shape::from_cells(cells);
  // every row starts at column 1, every column reaches the top row, rows shrink downwards
  for (int r = 1; r <= s.height(); ++r)
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, r) && ((c > 1 && !s.contains(c - 1, r)) || (r < s.height() && !s.contains(c, r + 1))))
        return false;
  return true;
}

inline bool se_ferrers(const CellList& cells) {
  if (cells.empty()) return false;
  const Shape s = Shape::from_cells(cells);
  for (int r = 1; r <= s.height(); ++r)
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, r) && ((c < s.width() && !s.contains(c + 1, r)) || (r > 1 && !s.contains(c, r - 1))))
        return false;
  return true;
}

/// Whether some choice of cuts gives a Ferrers decomposition satisfying (a)-(d).
inline bool decomposable(const Shape& s) {
  auto top_of_col = [&](int c) {
    int t = 0;
    for (const auto& x : s.cells())
      if (x.col == c) t = std::max(t, x.row);
    return t;
  };
  auto right_of_row = [&](int r) {
    int t = 0;
    for (const auto& x : s.cells())
      if (x.row == r) t = std::max(t, x.col);
    return t;
  };
  // rest: remaining cells; min_cut: the next vertical cut must be >= this (condition d)
  std::function<bool(const CellList&, int)> rec = [&](const CellList& rest, int min_cut) {
    if (oracle::nw_ferrers(rest)) return true;  // F_n = rest, G_n empty
    int lo = 1 << 30, hi = 0;
    for (const auto& x : rest) lo = std::min(lo, x.col), hi = std::max(hi, x.col);
    for (int c = std::max(lo, min_cut); c < hi; ++c) {
      CellList f, after;
      for (const auto& x : rest) (x.col <= c ? f : after).push_back(x);
      if (!oracle::nw_ferrers(f) || after.empty()) continue;
      if (oracle::se_ferrers(after)) return true;  // F_n |v G_n
      if (!(top_of_col(c) < top_of_col(c + 1))) continue;
      int rlo = 1 << 30, rhi = 0, f_top = 0;
      for (const auto& x : after) rlo = std::min(rlo, x.row), rhi = std::max(rhi, x.row);
      for (const auto& x : f) f_top = std::max(f_top, x.row);
      for (int r = rlo; r < rhi; ++r) {
        CellList g, next;
        for (const auto& x : after) (x.row <= r ? g : next).push_back(x);
        if (!oracle::se_ferrers(g) || next.empty()) continue;
        if (!(right_of_row(r) < right_of_row(r + 1))) continue;
        if (f_top > r) continue;
        int g_right = 0;
        for (const auto& x : g) g_right = std::max(g_right, x.col);
        if (rec(next, g_right)) return true;
      }
    }
    return false;
  };
  return rec(s.cells(), 0);
}

/// delta2 / iota2 / fd occurrences of a binary filling with the label of the top-right image.
inline std::vector<int> top_right_labels(const Filling& f, const Pattern& p) {
  std::vector<int> out;
  const Cell tr{p.shape().width(), p.shape().height()};
  for (const auto& occ : oracle::occurrences(f, p.filling()))
    out.push_back(f.shape().index_of({occ.cols[tr.col - 1], occ.rows[tr.row - 1]}) + 1);
  return out;
}

inline bool in_G(const Filling& f, int i) {
  for (int l : oracle::top_right_labels(f, Pattern::delta(2)))
    if (l > i) return false;
  for (const auto& p : {Pattern::iota(2), Pattern::fd()})
    for (int l : oracle::top_right_labels(f, p))
      if (l <= i) return false;
  return true;
}

}  // namespace oracle
