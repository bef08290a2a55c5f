#pragma once

// Shape catalogs and filling enumeration.
//
// Skew shapes are generated in the row-interval encoding: row j (bottom first) spans
// columns [a_j, b_j] with a_j and b_j weakly increasing upwards and a_{j+1} <= b_j + 1
// (no empty column). Fillings of an N-cell shape are indexed by the mixed-radix
// number sum_t v_t (m+1)^t over label order, so for binary fillings the index is the
// support word with c_1 in bit 0.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skewfill/errors.hpp"
#include "skewfill/filling.hpp"
#include "skewfill/shape.hpp"
#include "skewfill/skew_structure.hpp"

namespace skewfill {

struct SkewShapeOptions {
  bool connected = false;
  bool ds_free = false;
};

/// Every normalized skew shape with exactly n cells and no empty row or column, each
/// once, in lexicographic order of the row-interval encoding.
inline std::vector<Shape> enum_skew_shapes(int n, SkewShapeOptions opts = {}) {
  if (n < 1) throw DomainError("enum_skew_shapes needs n >= 1");
  std::vector<Shape> out;
  std::vector<std::pair<int, int>> rows;
  std::function<void(int)> grow = [&](int left) {
    if (left == 0) {
      CellList cells;
      for (std::size_t j = 0; j < rows.size(); ++j)
        for (int c = rows[j].first; c <= rows[j].second; ++c) cells.push_back({c, static_cast<int>(j) + 1});
      Shape s = Shape::from_cells(std::move(cells));
      if (opts.ds_free && contains_shape(s, dented_shape())) return;
      out.push_back(std::move(s));
      return;
    }
    const auto [pa, pb] = rows.back();
    const int a_hi = opts.connected ? pb : pb + 1;
    for (int a = pa; a <= a_hi; ++a)
      for (int b = std::max(pb, a); b - a + 1 <= left; ++b) {
        rows.push_back({a, b});
        grow(left - (b - a + 1));
        rows.pop_back();
      }
  };
  for (int b = 1; b <= n; ++b) {
    rows = {{1, b}};
    grow(n - b);
  }
  return out;
}

inline std::vector<Shape> enum_skew_shapes_upto(int max_cells, SkewShapeOptions opts = {}) {
  std::vector<Shape> out;
  for (int n = 1; n <= max_cells; ++n) {
    auto part = enum_skew_shapes(n, opts);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// NW Ferrers shapes with n cells (one per integer partition), partitions in
/// lexicographically decreasing order.
inline std::vector<Shape> enum_nw_ferrers(int n) {
  std::vector<Shape> out;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int left, int max_part) {
    if (left == 0) {
      CellList cells;
      const int h = static_cast<int>(parts.size());
      for (int t = 0; t < h; ++t)
        for (int c = 1; c <= parts[t]; ++c) cells.push_back({c, h - t});
      out.push_back(Shape::from_cells(std::move(cells)));
      return;
    }
    for (int p = std::min(left, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// Moon polyominoes with n cells, sorted by cell list.
inline std::vector<Shape> enum_moon_polyominoes(int n) {
  if (n < 1) return {};
  // grow fixed polyominoes cell by cell; moon-ness is hereditary under removing a
  // suitable boundary cell, but filtering the full set keeps this obviously complete
  std::set<Shape> level{Shape::from_cells({{1, 1}})};
  for (int k = 2; k <= n; ++k) {
    std::set<Shape> next;
    for (const auto& s : level)
      for (const auto& c : s.cells()) {
        const Cell nbrs[4] = {{c.col - 1, c.row}, {c.col + 1, c.row}, {c.col, c.row - 1}, {c.col, c.row + 1}};
        for (const auto& nb : nbrs) {
          if (s.contains(nb)) continue;
          CellList cells = s.cells();
          cells.push_back({nb.col + 1, nb.row + 1});
          for (std::size_t t = 0; t + 1 < cells.size(); ++t) {
            cells[t].col += 1;
            cells[t].row += 1;
          }
          next.insert(Shape::from_cells(std::move(cells)));
        }
      }
    level = std::move(next);
  }
  std::vector<Shape> out;
  for (const auto& s : level)
    if (classify_shape(s).moon) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Filling enumeration

enum class FillMode { binary, sparse, transversal, integer };

inline std::string to_string(FillMode m) {
  switch (m) {
    case FillMode::binary: return "binary";
    case FillMode::sparse: return "sparse";
    case FillMode::transversal: return "transversal";
    case FillMode::integer: return "integer";
  }
  return "?";
}

inline FillMode parse_fill_mode(const std::string& s) {
  if (s == "binary") return FillMode::binary;
  if (s == "sparse") return FillMode::sparse;
  if (s == "transversal") return FillMode::transversal;
  if (s == "integer") return FillMode::integer;
  throw ParseError("unknown filling mode '" + s + "'");
}

struct EnumSpec {
  FillMode mode = FillMode::binary;
  int max_entry = 2;                 // integer mode only
  std::optional<int> max_total;      // integer mode only
  std::optional<SumVector> sums;     // required row/column sums
  std::vector<Pattern> avoid;        // patterns to avoid (all of them)
};

namespace detail {

// Recursive enumeration over cells c_N ... c_1 with values ascending, so fillings come
// out in increasing index order. Row/column sums, sparsity and the total cap prune.
template <class Visitor>
void enumerate_values(const Shape& s, int cap, const std::optional<SumVector>& sums,
                      std::optional<int> max_total, bool sparse, Visitor&& visit) {
  const int n = s.size();
  const auto& cells = s.cells();
  std::vector<int> values(n, 0);
  std::vector<int> row_left, col_left;
  if (sums) {
    if (static_cast<int>(sums->row_sums.size()) != s.height() ||
        static_cast<int>(sums->col_sums.size()) != s.width())
      throw DomainError("sum vector does not match the shape dimensions");
    row_left = sums->row_sums;
    col_left = sums->col_sums;
    for (int r = 1; r <= s.height(); ++r)
      if (s.row_count(r) == 0 && row_left[r - 1] != 0) return;
    for (int c = 1; c <= s.width(); ++c)
      if (s.col_count(c) == 0 && col_left[c - 1] != 0) return;
  }
  // first label index in each row/column = last one visited
  std::vector<int> first_in_row(s.height() + 1, -1), first_in_col(s.width() + 1, -1);
  for (int t = n - 1; t >= 0; --t) {
    first_in_row[cells[t].row] = t;
    first_in_col[cells[t].col] = t;
  }
  std::vector<int> row_used(s.height() + 1, 0), col_used(s.width() + 1, 0);
  int total = 0;
  bool stop = false;
  std::function<void(int)> rec = [&](int t) {
    if (stop) return;
    if (t < 0) {
      if (!visit(static_cast<const std::vector<int>&>(values))) stop = true;
      return;
    }
    const Cell c = cells[t];
    int hi = cap;
    if (sums) hi = std::min({hi, row_left[c.row - 1], col_left[c.col - 1]});
    if (max_total) hi = std::min(hi, *max_total - total);
    if (sparse && (row_used[c.row] || col_used[c.col])) hi = std::min(hi, 0);
    int lo = 0;
    if (sums) {
      // the last cell visited in a line must close it exactly
      if (first_in_row[c.row] == t) lo = std::max(lo, row_left[c.row - 1]);
      if (first_in_col[c.col] == t) lo = std::max(lo, col_left[c.col - 1]);
    }
    for (int v = lo; v <= hi; ++v) {
      values[t] = v;
      total += v;
      if (sums) {
        row_left[c.row - 1] -= v;
        col_left[c.col - 1] -= v;
      }
      if (sparse && v) {
        row_used[c.row] = 1;
        col_used[c.col] = 1;
      }
      rec(t - 1);
      if (sparse && v) {
        row_used[c.row] = 0;
        col_used[c.col] = 0;
      }
      if (sums) {
        row_left[c.row - 1] += v;
        col_left[c.col - 1] += v;
      }
      total -= v;
      if (stop) break;
    }
    values[t] = 0;
  };
  rec(n - 1);
}

}  // namespace detail

/// Visits every transversal of `s` (as label-ordered 0/1 values), rows bottom-up with
/// columns chosen left to right.
template <class Visitor>
void for_each_transversal(const Shape& s, Visitor&& visit) {
  if (s.height() != s.width()) throw DomainError("transversal mode needs height == width");
  const int n = s.size();
  std::vector<int> values(n, 0);
  std::vector<char> col_used(s.width() + 1, 0);
  std::vector<int> col_remaining(s.width() + 1, 0);
  for (const auto& c : s.cells()) ++col_remaining[c.col];
  bool stop = false;
  std::function<void(int)> rec = [&](int row) {
    if (stop) return;
    if (row > s.height()) {
      if (!visit(static_cast<const std::vector<int>&>(values))) stop = true;
      return;
    }
    // a column whose last chance is this row must be chosen here
    int forced = 0;
    for (int c = 1; c <= s.width(); ++c)
      if (!col_used[c] && col_remaining[c] == 0) return;
    for (int c = 1; c <= s.width(); ++c)
      if (!col_used[c] && col_remaining[c] == 1 && s.contains(c, row)) {
        if (forced) return;
        forced = c;
      }
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, row)) --col_remaining[c];
    for (int c = 1; c <= s.width(); ++c) {
      if (!s.contains(c, row) || col_used[c]) continue;
      if (forced && c != forced) continue;
      const int idx = s.index_of({c, row});
      col_used[c] = 1;
      values[idx] = 1;
      rec(row + 1);
      values[idx] = 0;
      col_used[c] = 0;
      if (stop) break;
    }
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, row)) ++col_remaining[c];
  };
  for (int r = 1; r <= s.height(); ++r)
    if (s.row_count(r) == 0) return;
  rec(1);
}

/// Visits fillings matching mode and sums; avoidance is applied too. Visitor gets a
/// Filling and returns false to stop.
template <class Visitor>
void for_each_filling(const Shape& s, const EnumSpec& spec, Visitor&& visit) {
  std::optional<PatternSet> avoid;
  if (!spec.avoid.empty()) avoid.emplace(s, spec.avoid);
  auto emit = [&](const std::vector<int>& values) {
    Filling f(s, values);
    if (avoid && avoid->contains_any(f)) return true;
    return visit(static_cast<const Filling&>(f));
  };
  switch (spec.mode) {
    case FillMode::transversal:
      if (spec.sums) {
        for_each_transversal(s, [&](const std::vector<int>& v) {
          Filling f(s, v);
          if (sum_vector(f) != *spec.sums) return true;
          return emit(v);
        });
      } else {
        for_each_transversal(s, emit);
      }
      return;
    case FillMode::binary:
      detail::enumerate_values(s, 1, spec.sums, std::nullopt, false, emit);
      return;
    case FillMode::sparse:
      detail::enumerate_values(s, 1, spec.sums, std::nullopt, true, emit);
      return;
    case FillMode::integer:
      if (spec.max_entry < 1) throw DomainError("integer mode needs max_entry >= 1");
      detail::enumerate_values(s, spec.max_entry, spec.sums, spec.max_total, false, emit);
      return;
  }
}

inline std::vector<Filling> enum_fillings(const Shape& s, const EnumSpec& spec) {
  std::vector<Filling> out;
  for_each_filling(s, spec, [&](const Filling& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

inline std::uint64_t count_avoiders(const Shape& s, const EnumSpec& spec) {
  std::uint64_t n = 0;
  for_each_filling(s, spec, [&](const Filling&) {
    ++n;
    return true;
  });
  return n;
}

/// Number of transversals of `s` avoiding `p`.
inline std::uint64_t transversal_count(const Shape& s, const Pattern& p) {
  EnumSpec spec;
  spec.mode = FillMode::transversal;
  spec.avoid = {p};
  return count_avoiders(s, spec);
}

/// Index-addressable unconstrained filling space (binary or integer with a cap).
class FillingSpace {
 public:
  FillingSpace(Shape s, int max_entry) : shape_(std::move(s)), radix_(max_entry + 1) {
    if (max_entry < 1) throw DomainError("max_entry must be at least 1");
    size_ = 1;
    for (int t = 0; t < shape_.size(); ++t) {
      if (size_ > UINT64_MAX / radix_) throw DomainError("filling space too large to index");
      size_ *= radix_;
    }
  }
  std::uint64_t size() const { return size_; }
  Filling at(std::uint64_t index) const {
    if (index >= size_) throw DomainError("filling index out of range");
    std::vector<int> values(shape_.size());
    for (auto& v : values) {
      v = static_cast<int>(index % radix_);
      index /= radix_;
    }
    return Filling(shape_, std::move(values));
  }

 private:
  Shape shape_;
  std::uint64_t radix_;
  std::uint64_t size_;
};

// ---------------------------------------------------------------------------
// Moon polyomino fillings with prescribed maximal-rectangle chain lengths

/// Width of a maximal rectangle -> required longest NE-chain inside it.
using LambdaSpec = std::map<int, int>;

inline LambdaSpec lambda_of(const Filling& f, const std::vector<Rect>& rects) {
  LambdaSpec l;
  for (const auto& r : rects) l[r.width()] = longest_chain(f, Direction::NE, r);
  return l;
}

inline LambdaSpec lambda_of(const Filling& f) { return lambda_of(f, maximal_rectangles(f.shape())); }

/// All fillings of the moon polyomino `m` (entries <= max_entry; 1 means binary) with
/// the given sums and longest NE-chain Lambda(R) in every maximal rectangle R.
inline std::vector<Filling> enum_FNE(const Shape& m, const LambdaSpec& lambda, const SumVector& sums,
                                     int max_entry = 1) {
  const auto rects = maximal_rectangles(m);  // throws on non-moon
  std::set<int> widths, keys;
  for (const auto& r : rects) widths.insert(r.width());
  for (const auto& [w, v] : lambda) keys.insert(w);
  if (widths != keys) throw DomainError("lambda keys must be exactly the maximal rectangle widths");
  std::vector<Filling> out;
  detail::enumerate_values(m, max_entry, sums, std::nullopt, false, [&](const std::vector<int>& v) {
    Filling f(m, v);
    if (lambda_of(f, rects) == lambda) out.push_back(std::move(f));
    return true;
  });
  return out;
}

/// Shape with columns permuted: column c moves to position perm[c-1].
inline Shape permute_columns(const Shape& s, const std::vector<int>& perm) {
  CellList cells;
  for (const auto& c : s.cells()) cells.push_back({perm[c.col - 1], c.row});
  return Shape::from_cells(std::move(cells));
}

// ---------------------------------------------------------------------------
// Catalog / count export

namespace detail {
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  return out + "\"";
}
}  // namespace detail

inline std::string count_csv_header() { return "shape,patterns,mode,count\n"; }

inline std::string count_csv_row(const Shape& s, const std::vector<Pattern>& avoid, FillMode mode,
                                 std::uint64_t count) {
  std::string pats;
  for (std::size_t t = 0; t < avoid.size(); ++t) pats += (t ? "+" : "") + avoid[t].name();
  return detail::csv_quote(format_row_intervals(s)) + "," + detail::csv_quote(pats) + "," + to_string(mode) +
         "," + std::to_string(count) + "\n";
}

}  // namespace skewfill
