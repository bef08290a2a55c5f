#pragma once

// Shapes: finite sets of unit cells on the integer grid, kept translation-normalized.
//
// Coordinates follow the usual math convention: a cell is (col, row), both 1-based,
// row 1 at the bottom. Text grids list the TOP row first; parse_shape/render_shape
// do the flip.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "skewfill/errors.hpp"

namespace skewfill {

struct Cell {
  int col = 0;
  int row = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

/// Label order: rows bottom to top, left to right within a row.
struct LabelLess {
  constexpr bool operator()(const Cell& a, const Cell& b) const {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  }
};

using CellList = std::vector<Cell>;

/// Inclusive column/row bounds.
struct Rect {
  int col_lo = 1;
  int col_hi = 0;
  int row_lo = 1;
  int row_hi = 0;

  int width() const { return col_hi - col_lo + 1; }
  int height() const { return row_hi - row_lo + 1; }
  bool contains(Cell c) const {
    return c.col >= col_lo && c.col <= col_hi && c.row >= row_lo && c.row <= row_hi;
  }
  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

/// Column and row selections (both strictly ascending) witnessing a containment.
struct Occurrence {
  std::vector<int> cols;
  std::vector<int> rows;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

class Shape {
 public:
  Shape() = default;

  /// Builds the normalized shape of an arbitrary cell list (duplicates are merged).
  static Shape from_cells(CellList cells) {
    Shape s;
    if (cells.empty()) return s;
    int min_col = cells.front().col, min_row = cells.front().row;
    for (const auto& c : cells) {
      min_col = std::min(min_col, c.col);
      min_row = std::min(min_row, c.row);
    }
    for (auto& c : cells) {
      c.col -= min_col - 1;
      c.row -= min_row - 1;
    }
    std::sort(cells.begin(), cells.end(), LabelLess{});
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (const auto& c : cells) {
      s.width_ = std::max(s.width_, c.col);
      s.height_ = std::max(s.height_, c.row);
    }
    s.cells_ = std::move(cells);
    s.index_.assign(static_cast<std::size_t>(s.width_) * s.height_, -1);
    for (std::size_t i = 0; i < s.cells_.size(); ++i) {
      s.index_[s.slot(s.cells_[i].col, s.cells_[i].row)] = static_cast<int>(i);
    }
    return s;
  }

  /// Full w-by-h rectangle.
  static Shape rectangle(int w, int h) {
    CellList cells;
    for (int r = 1; r <= h; ++r)
      for (int c = 1; c <= w; ++c) cells.push_back({c, r});
    return from_cells(std::move(cells));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return static_cast<int>(cells_.size()); }
  bool empty() const { return cells_.empty(); }

  /// Cells in label order.
  const CellList& cells() const { return cells_; }

  bool contains(int col, int row) const {
    if (col < 1 || row < 1 || col > width_ || row > height_) return false;
    return index_[slot(col, row)] >= 0;
  }
  bool contains(Cell c) const { return contains(c.col, c.row); }

  /// Zero-based label index of a cell, or -1.
  int index_of(Cell c) const {
    if (!contains(c)) return -1;
    return index_[slot(c.col, c.row)];
  }

  int row_count(int row) const {
    int n = 0;
    for (int c = 1; c <= width_; ++c) n += contains(c, row);
    return n;
  }
  int col_count(int col) const {
    int n = 0;
    for (int r = 1; r <= height_; ++r) n += contains(col, r);
    return n;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.cells_ == b.cells_; }
  friend bool operator<(const Shape& a, const Shape& b) {
    return std::lexicographical_compare(
        a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(),
        [](const Cell& x, const Cell& y) { return LabelLess{}(x, y); });
  }

 private:
  std::size_t slot(int col, int row) const {
    return static_cast<std::size_t>(row - 1) * width_ + (col - 1);
  }

  int width_ = 0;
  int height_ = 0;
  CellList cells_;
  std::vector<int> index_;
};

inline Shape normalize(CellList cells) { return Shape::from_cells(std::move(cells)); }

// ---------------------------------------------------------------------------
// Text grid format

namespace detail {

inline std::vector<std::string> split_grid_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  // a blank line is only tolerated at the very end
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace detail

inline Shape parse_shape(std::string_view text) {
  auto lines = detail::split_grid_lines(text);
  if (lines.empty()) throw ParseError("shape grid is empty");
  const std::size_t w = lines.front().size();
  CellList cells;
  const int h = static_cast<int>(lines.size());
  for (int t = 0; t < h; ++t) {
    const auto& line = lines[t];
    if (line.empty()) throw ParseError("blank line inside shape grid");
    if (line.size() != w) throw ParseError("ragged shape grid at line " + std::to_string(t + 1));
    for (std::size_t c = 0; c < w; ++c) {
      if (line[c] == '#') {
        cells.push_back({static_cast<int>(c) + 1, h - t});
      } else if (line[c] != '.') {
        throw ParseError(std::string("invalid character '") + line[c] + "' in shape grid");
      }
    }
  }
  if (cells.empty()) throw ParseError("shape grid has no cells");
  return Shape::from_cells(std::move(cells));
}

inline std::string render_shape(const Shape& s) {
  std::string out;
  for (int r = s.height(); r >= 1; --r) {
    for (int c = 1; c <= s.width(); ++c) out.push_back(s.contains(c, r) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural predicates

/// Cell set induced by a column/row selection; may contain empty rows or columns.
inline Shape induced_subshape(const Shape& s, const std::vector<int>& cols,
                              const std::vector<int>& rows) {
  CellList cells;
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (s.contains(cols[i], rows[j]))
        cells.push_back({static_cast<int>(i) + 1, static_cast<int>(j) + 1});
  return Shape::from_cells(std::move(cells));
}

inline bool is_convex(const Shape& s) {
  for (int r = 1; r <= s.height(); ++r) {
    int first = 0, last = 0, n = 0;
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, r)) {
        if (!first) first = c;
        last = c;
        ++n;
      }
    if (n && last - first + 1 != n) return false;
  }
  for (int c = 1; c <= s.width(); ++c) {
    int first = 0, last = 0, n = 0;
    for (int r = 1; r <= s.height(); ++r)
      if (s.contains(c, r)) {
        if (!first) first = r;
        last = r;
        ++n;
      }
    if (n && last - first + 1 != n) return false;
  }
  return true;
}

inline bool is_intersection_free(const Shape& s) {
  std::vector<std::vector<bool>> cols(s.width() + 1, std::vector<bool>(s.height() + 1));
  for (const auto& c : s.cells()) cols[c.col][c.row] = true;
  auto subset = [&](int a, int b) {
    for (int r = 1; r <= s.height(); ++r)
      if (cols[a][r] && !cols[b][r]) return false;
    return true;
  };
  for (int a = 1; a <= s.width(); ++a)
    for (int b = a + 1; b <= s.width(); ++b)
      if (!subset(a, b) && !subset(b, a)) return false;
  return true;
}

inline bool is_connected(const Shape& s) {
  if (s.empty()) return true;
  std::vector<bool> seen(s.size());
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    Cell c = s.cells()[stack.back()];
    stack.pop_back();
    const Cell nbrs[4] = {{c.col - 1, c.row}, {c.col + 1, c.row}, {c.col, c.row - 1}, {c.col, c.row + 1}};
    for (const auto& n : nbrs) {
      int idx = s.index_of(n);
      if (idx >= 0 && !seen[idx]) {
        seen[idx] = true;
        ++reached;
        stack.push_back(idx);
      }
    }
  }
  return reached == s.size();
}

enum class Side { top, bottom, left, right };

/// True if the extreme cells of every column (top/bottom) or row (left/right) line up.
inline bool is_justified(const Shape& s, Side side) {
  std::optional<int> line;
  const bool by_col = side == Side::top || side == Side::bottom;
  const int outer = by_col ? s.width() : s.height();
  for (int k = 1; k <= outer; ++k) {
    std::optional<int> extreme;
    const int inner = by_col ? s.height() : s.width();
    for (int t = 1; t <= inner; ++t) {
      bool in = by_col ? s.contains(k, t) : s.contains(t, k);
      if (!in) continue;
      if (!extreme) extreme = t;
      if (side == Side::top || side == Side::right) extreme = std::max(*extreme, t);
      if (side == Side::bottom || side == Side::left) extreme = std::min(*extreme, t);
    }
    if (!extreme) continue;
    if (line && *line != *extreme) return false;
    line = extreme;
  }
  return true;
}

/// Skew shapes: convex, and whenever (i1,j2) and (i2,j1) are cells with i1<i2, j1<j2,
/// the whole rectangle between them is present. Convexity only matters for shapes
/// with empty interior rows or columns, which the rectangle rule alone lets through.
inline bool is_skew(const Shape& s) {
  if (!is_convex(s)) return false;
  for (const auto& a : s.cells())      // (i1, j2)
    for (const auto& b : s.cells()) {  // (i2, j1)
      if (!(a.col < b.col && b.row < a.row)) continue;
      for (int c = a.col; c <= b.col; ++c)
        for (int r = b.row; r <= a.row; ++r)
          if (!s.contains(c, r)) return false;
    }
  return true;
}

struct Component {
  Shape shape;
  Cell offset;  // host cell = component cell + offset
};

inline std::vector<Component> connected_components(const Shape& s) {
  std::vector<Component> out;
  std::vector<int> comp(s.size(), -1);
  int ncomp = 0;
  for (int start = 0; start < s.size(); ++start) {
    if (comp[start] >= 0) continue;
    CellList cells;
    std::vector<int> stack{start};
    comp[start] = ncomp;
    while (!stack.empty()) {
      Cell c = s.cells()[stack.back()];
      stack.pop_back();
      cells.push_back(c);
      const Cell nbrs[4] = {{c.col - 1, c.row}, {c.col + 1, c.row}, {c.col, c.row - 1}, {c.col, c.row + 1}};
      for (const auto& n : nbrs) {
        int idx = s.index_of(n);
        if (idx >= 0 && comp[idx] < 0) {
          comp[idx] = ncomp;
          stack.push_back(idx);
        }
      }
    }
    int min_col = cells.front().col, min_row = cells.front().row;
    for (const auto& c : cells) {
      min_col = std::min(min_col, c.col);
      min_row = std::min(min_row, c.row);
    }
    out.push_back({Shape::from_cells(std::move(cells)), {min_col - 1, min_row - 1}});
    ++ncomp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shape containment

/// Visits every occurrence of `pattern` in `host` under the exact (induced) semantics:
/// a selected position is a cell of host iff the corresponding position is a cell of
/// pattern. The visitor returns false to stop early. Occurrences arrive in
/// lexicographic (cols, rows) order.
template <class Visitor>
void for_each_shape_occurrence(const Shape& host, const Shape& pattern, Visitor&& visit) {
  if (pattern.empty()) {
    visit(Occurrence{});
    return;
  }
  const int pw = pattern.width(), ph = pattern.height();
  if (pw > host.width() || ph > host.height()) return;
  if (pw > 64) throw DomainError("pattern wider than 64 columns");

  std::vector<std::uint64_t> psig(ph + 1, 0);
  std::vector<int> pcol_count(pw + 1, 0);
  for (const auto& c : pattern.cells()) {
    psig[c.row] |= std::uint64_t{1} << (c.col - 1);
    ++pcol_count[c.col];
  }
  std::vector<int> hcol_count(host.width() + 1, 0);
  for (const auto& c : host.cells()) ++hcol_count[c.col];

  Occurrence occ;
  occ.cols.resize(pw);
  occ.rows.resize(ph);
  std::vector<std::uint64_t> hsig(host.height() + 1, 0);
  bool stop = false;

  std::function<void(int, int)> pick_rows = [&](int j, int start) {
    if (stop) return;
    if (j > ph) {
      if (!visit(static_cast<const Occurrence&>(occ))) stop = true;
      return;
    }
    for (int r = start; r <= host.height() - (ph - j); ++r) {
      if (hsig[r] != psig[j]) continue;
      occ.rows[j - 1] = r;
      pick_rows(j + 1, r + 1);
      if (stop) return;
    }
  };

  std::function<void(int, int)> pick_cols = [&](int t, int start) {
    if (stop) return;
    if (t > pw) {
      for (int r = 1; r <= host.height(); ++r) {
        std::uint64_t sig = 0;
        for (int i = 0; i < pw; ++i)
          if (host.contains(occ.cols[i], r)) sig |= std::uint64_t{1} << i;
        hsig[r] = sig;
      }
      pick_rows(1, 1);
      return;
    }
    for (int c = start; c <= host.width() - (pw - t); ++c) {
      if (hcol_count[c] < pcol_count[t]) continue;
      occ.cols[t - 1] = c;
      pick_cols(t + 1, c + 1);
      if (stop) return;
    }
  };
  pick_cols(1, 1);
}

inline std::vector<Occurrence> find_shape_occurrences(const Shape& host, const Shape& pattern) {
  std::vector<Occurrence> out;
  for_each_shape_occurrence(host, pattern, [&](const Occurrence& o) {
    out.push_back(o);
    return true;
  });
  return out;
}

inline bool contains_shape(const Shape& host, const Shape& pattern) {
  bool found = false;
  for_each_shape_occurrence(host, pattern, [&](const Occurrence&) {
    found = true;
    return false;
  });
  return found;
}

/// The dented shape: a 3x3 square missing its top-left and bottom-right cells.
inline const Shape& dented_shape() {
  static const Shape ds = Shape::from_cells({{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 3}, {3, 3}});
  return ds;
}

// ---------------------------------------------------------------------------
// Classification

struct ShapeProperties {
  bool connected = true;
  bool convex = true;
  bool intersection_free = true;
  bool moon = true;
  bool nw_ferrers = true;
  bool se_ferrers = true;
  bool top_justified = true;
  bool bottom_justified = true;
  bool left_justified = true;
  bool right_justified = true;
  bool skew = true;
  std::optional<bool> ds_free;  // only meaningful for skew shapes

  friend bool operator==(const ShapeProperties&, const ShapeProperties&) = default;
};

/// Every flag straight from its definition. The empty shape satisfies all of them.
inline ShapeProperties classify_shape(const Shape& s) {
  ShapeProperties p;
  p.connected = is_connected(s);
  p.convex = is_convex(s);
  p.intersection_free = is_intersection_free(s);
  p.moon = p.convex && p.intersection_free;
  p.top_justified = is_justified(s, Side::top);
  p.bottom_justified = is_justified(s, Side::bottom);
  p.left_justified = is_justified(s, Side::left);
  p.right_justified = is_justified(s, Side::right);
  p.nw_ferrers = p.moon && p.top_justified && p.left_justified;
  p.se_ferrers = p.moon && p.bottom_justified && p.right_justified;
  p.skew = is_skew(s);
  if (p.skew) p.ds_free = !contains_shape(s, dented_shape());
  return p;
}

// ---------------------------------------------------------------------------
// Rectangles

inline bool rect_inside(const Shape& s, const Rect& r) {
  for (int c = r.col_lo; c <= r.col_hi; ++c)
    for (int w = r.row_lo; w <= r.row_hi; ++w)
      if (!s.contains(c, w)) return false;
  return true;
}

/// True if the cell list exactly fills its bounding box (empty lists are not rectangles).
inline bool is_rectangle(const CellList& cells) {
  if (cells.empty()) return false;
  int c0 = cells[0].col, c1 = c0, r0 = cells[0].row, r1 = r0;
  for (const auto& c : cells) {
    c0 = std::min(c0, c.col);
    c1 = std::max(c1, c.col);
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& c : cells) seen.insert({c.col, c.row});
  return static_cast<long>(seen.size()) == static_cast<long>(c1 - c0 + 1) * (r1 - r0 + 1);
}

/// Maximal rectangles of a moon polyomino, one per distinct row length, by increasing width.
inline std::vector<Rect> maximal_rectangles(const Shape& m) {
  if (!classify_shape(m).moon) throw DomainError("maximal_rectangles needs a moon polyomino");
  std::vector<Rect> out;
  std::set<int> widths;
  for (int r = 1; r <= m.height(); ++r) widths.insert(m.row_count(r));
  widths.erase(0);
  for (int w : widths) {
    int row = 1;
    while (m.row_count(row) != w) ++row;
    int lo = 1;
    while (!m.contains(lo, row)) ++lo;
    Rect rect{lo, lo + w - 1, row, row};
    auto covers = [&](int r) {
      for (int c = rect.col_lo; c <= rect.col_hi; ++c)
        if (!m.contains(c, r)) return false;
      return true;
    };
    while (rect.row_lo > 1 && covers(rect.row_lo - 1)) --rect.row_lo;
    while (rect.row_hi < m.height() && covers(rect.row_hi + 1)) ++rect.row_hi;
    out.push_back(rect);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetries

inline Shape mirror_shape(const Shape& s) {
  CellList cells;
  for (const auto& c : s.cells()) cells.push_back({s.width() + 1 - c.col, c.row});
  return Shape::from_cells(std::move(cells));
}

inline Shape rotate180_shape(const Shape& s) {
  CellList cells;
  for (const auto& c : s.cells()) cells.push_back({s.width() + 1 - c.col, s.height() + 1 - c.row});
  return Shape::from_cells(std::move(cells));
}

/// Row intervals [first col, last col] bottom row first; requires every row to be a
/// nonempty interval.
inline std::vector<std::pair<int, int>> row_intervals(const Shape& s) {
  std::vector<std::pair<int, int>> out;
  for (int r = 1; r <= s.height(); ++r) {
    int lo = 0, hi = 0, n = 0;
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, r)) {
        if (!lo) lo = c;
        hi = c;
        ++n;
      }
    if (!n || hi - lo + 1 != n) throw DomainError("row " + std::to_string(r) + " is not an interval");
    out.push_back({lo, hi});
  }
  return out;
}

inline std::string format_row_intervals(const Shape& s) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& [a, b] : row_intervals(s)) {
    if (!first) os << ',';
    first = false;
    os << '(' << a << ',' << b << ')';
  }
  os << ']';
  return os.str();
}

inline Shape parse_row_intervals(std::string_view text) {
  CellList cells;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto expect = [&](char ch) {
    skip_ws();
    if (pos >= text.size() || text[pos] != ch)
      throw ParseError(std::string("row-interval notation: expected '") + ch + "'");
    ++pos;
  };
  auto number = [&] {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (start == pos) throw ParseError("row-interval notation: expected a number");
    return std::stoi(std::string(text.substr(start, pos - start)));
  };
  expect('[');
  int row = 0;
  skip_ws();
  if (pos < text.size() && text[pos] == ']') throw ParseError("row-interval notation: no rows");
  while (true) {
    expect('(');
    int a = number();
    expect(',');
    int b = number();
    expect(')');
    if (a < 1 || b < a) throw ParseError("row-interval notation: bad interval");
    ++row;
    for (int c = a; c <= b; ++c) cells.push_back({c, row});
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    expect(']');
    break;
  }
  skip_ws();
  if (pos != text.size()) throw ParseError("row-interval notation: trailing characters");
  return Shape::from_cells(std::move(cells));
}

}  // namespace skewfill
