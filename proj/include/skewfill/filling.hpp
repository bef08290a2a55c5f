#pragma once

// Fillings of shapes, filling containment and NE/SE chains.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewfill/errors.hpp"
#include "skewfill/shape.hpp"

namespace skewfill {

class Filling {
 public:
  Filling() = default;

  /// All-zero filling.
  explicit Filling(Shape s) : shape_(std::move(s)), values_(shape_.size(), 0) {}

  /// Values in label order of `s`.
  Filling(Shape s, std::vector<int> values) : shape_(std::move(s)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != shape_.size())
      throw DomainError("filling needs exactly one value per cell");
    for (int v : values_)
      if (v < 0) throw DomainError("filling values must be nonnegative");
  }

  static Filling from_ones(Shape s, const CellList& ones) {
    Filling f(std::move(s));
    for (const auto& c : ones) f.set(c, 1);
    return f;
  }

  /// Binary filling from a word whose bit t is the value of cell c_{t+1}.
  static Filling from_bits(Shape s, std::uint64_t bits) {
    if (s.size() > 64) throw DomainError("bit encoding limited to 64 cells");
    Filling f(std::move(s));
    for (int t = 0; t < f.shape_.size(); ++t) f.values_[t] = (bits >> t) & 1;
    return f;
  }

  const Shape& shape() const { return shape_; }
  std::span<const int> values() const { return values_; }

  int at(Cell c) const {
    int idx = shape_.index_of(c);
    if (idx < 0) throw DomainError("cell outside the shape");
    return values_[idx];
  }
  int at(int col, int row) const { return at(Cell{col, row}); }
  int at_index(int idx) const { return values_[idx]; }

  void set(Cell c, int v) {
    int idx = shape_.index_of(c);
    if (idx < 0) throw DomainError("cell outside the shape");
    if (v < 0) throw DomainError("filling values must be nonnegative");
    values_[idx] = v;
  }

  /// Support word: bit t set iff cell c_{t+1} is nonzero.
  std::uint64_t bits() const {
    if (shape_.size() > 64) throw DomainError("bit encoding limited to 64 cells");
    std::uint64_t b = 0;
    for (int t = 0; t < shape_.size(); ++t)
      if (values_[t]) b |= std::uint64_t{1} << t;
    return b;
  }

  CellList ones() const {
    CellList out;
    for (int t = 0; t < shape_.size(); ++t)
      if (values_[t]) out.push_back(shape_.cells()[t]);
    return out;
  }

  friend bool operator==(const Filling& a, const Filling& b) {
    return a.shape_ == b.shape_ && a.values_ == b.values_;
  }
  friend bool operator<(const Filling& a, const Filling& b) {
    if (a.shape_ == b.shape_) return a.values_ < b.values_;
    return a.shape_ < b.shape_;
  }

 private:
  Shape shape_;
  std::vector<int> values_;
};

struct FillingKind {
  bool binary = false;
  bool sparse = false;
  bool transversal = false;
  friend bool operator==(const FillingKind&, const FillingKind&) = default;
};

struct SumVector {
  std::vector<int> row_sums;  // index r-1 for row r
  std::vector<int> col_sums;  // index c-1 for column c
  friend bool operator==(const SumVector&, const SumVector&) = default;
  friend auto operator<=>(const SumVector&, const SumVector&) = default;
};

inline SumVector sum_vector(const Filling& f) {
  SumVector sv{std::vector<int>(f.shape().height(), 0), std::vector<int>(f.shape().width(), 0)};
  const auto& cells = f.shape().cells();
  for (std::size_t t = 0; t < cells.size(); ++t) {
    sv.row_sums[cells[t].row - 1] += f.at_index(static_cast<int>(t));
    sv.col_sums[cells[t].col - 1] += f.at_index(static_cast<int>(t));
  }
  return sv;
}

inline FillingKind filling_kind(const Filling& f) {
  FillingKind k;
  k.binary = std::all_of(f.values().begin(), f.values().end(), [](int v) { return v <= 1; });
  if (!k.binary) return k;
  // Row/column sums of a binary filling count its 1-cells; lines without cells are ignored.
  const auto sv = sum_vector(f);
  const auto& s = f.shape();
  k.sparse = true;
  k.transversal = true;
  for (int r = 1; r <= s.height(); ++r) {
    if (s.row_count(r) == 0) continue;
    k.sparse = k.sparse && sv.row_sums[r - 1] <= 1;
    k.transversal = k.transversal && sv.row_sums[r - 1] == 1;
  }
  for (int c = 1; c <= s.width(); ++c) {
    if (s.col_count(c) == 0) continue;
    k.sparse = k.sparse && sv.col_sums[c - 1] <= 1;
    k.transversal = k.transversal && sv.col_sums[c - 1] == 1;
  }
  k.transversal = k.transversal && k.sparse;
  return k;
}

// ---------------------------------------------------------------------------
// Text formats: digit grid ('.' = hole, top row first) and the numeric grid
// (comma-separated integers, 'x' = hole) for entries above 9.

inline Filling parse_filling(std::string_view text) {
  auto lines = detail::split_grid_lines(text);
  if (lines.empty()) throw ParseError("filling grid is empty");
  const bool numeric = text.find(',') != std::string_view::npos;
  std::vector<std::vector<std::optional<int>>> grid;
  for (const auto& line : lines) {
    std::vector<std::optional<int>> row;
    if (numeric) {
      std::size_t start = 0;
      while (true) {
        std::size_t end = line.find(',', start);
        std::string tok = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
        tok.erase(0, tok.find_first_not_of(" \t"));
        if (auto p = tok.find_last_not_of(" \t"); p != std::string::npos) tok.erase(p + 1);
        if (tok == "x") {
          row.push_back(std::nullopt);
        } else {
          if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("invalid numeric filling entry '" + tok + "'");
          row.push_back(std::stoi(tok));
        }
        if (end == std::string::npos) break;
        start = end + 1;
      }
    } else {
      for (char ch : line) {
        if (ch == '.') row.push_back(std::nullopt);
        else if (ch >= '0' && ch <= '9') row.push_back(ch - '0');
        else throw ParseError(std::string("invalid character '") + ch + "' in filling grid");
      }
    }
    if (row.empty()) throw ParseError("blank line inside filling grid");
    if (!grid.empty() && row.size() != grid.front().size())
      throw ParseError("ragged filling grid at line " + std::to_string(grid.size() + 1));
    grid.push_back(std::move(row));
  }
  const int h = static_cast<int>(grid.size());
  CellList cells;
  std::vector<std::pair<Cell, int>> entries;
  for (int t = 0; t < h; ++t)
    for (std::size_t c = 0; c < grid[t].size(); ++c)
      if (grid[t][c]) {
        Cell cell{static_cast<int>(c) + 1, h - t};
        cells.push_back(cell);
        entries.push_back({cell, *grid[t][c]});
      }
  if (cells.empty()) throw ParseError("filling grid has no cells");
  int min_col = cells[0].col, min_row = cells[0].row;
  for (const auto& c : cells) {
    min_col = std::min(min_col, c.col);
    min_row = std::min(min_row, c.row);
  }
  Filling f(Shape::from_cells(cells));
  for (const auto& [cell, v] : entries) f.set({cell.col - min_col + 1, cell.row - min_row + 1}, v);
  return f;
}

inline std::string render_filling(const Filling& f) {
  const auto& s = f.shape();
  const bool digits = std::all_of(f.values().begin(), f.values().end(), [](int v) { return v <= 9; });
  std::string out;
  for (int r = s.height(); r >= 1; --r) {
    for (int c = 1; c <= s.width(); ++c) {
      if (!digits && c > 1) out.push_back(',');
      if (!s.contains(c, r)) out += digits ? "." : "x";
      else if (digits) out.push_back(static_cast<char>('0' + f.at(c, r)));
      else out += std::to_string(f.at(c, r));
    }
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Patterns

/// A forbidden pattern: iota_k, delta_k, the filling fd of the dented shape, or an
/// explicit filling.
class Pattern {
 public:
  enum class Kind { iota, delta, fd, explicit_filling };

  static Pattern iota(int k) { return Pattern(Kind::iota, k, diagonal(k, true)); }
  static Pattern delta(int k) { return Pattern(Kind::delta, k, diagonal(k, false)); }
  static Pattern fd() {
    return Pattern(Kind::fd, 3, Filling::from_ones(dented_shape(), {{1, 1}, {2, 3}, {3, 2}}));
  }
  static Pattern from_filling(Filling f) { return Pattern(Kind::explicit_filling, 0, std::move(f)); }

  /// "iota<k>", "delta<k>" or "fd" (a space before k is accepted).
  static Pattern parse(std::string_view token) {
    std::string t;
    for (char ch : token)
      if (ch != ' ') t.push_back(ch);
    auto k_of = [&](std::size_t prefix) {
      std::string num = t.substr(prefix);
      if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad pattern token '" + std::string(token) + "'");
      int k = std::stoi(num);
      if (k < 1) throw ParseError("pattern size must be at least 1");
      return k;
    };
    if (t == "fd") return fd();
    if (t.rfind("iota", 0) == 0) return iota(k_of(4));
    if (t.rfind("delta", 0) == 0) return delta(k_of(5));
    throw ParseError("unknown pattern token '" + std::string(token) + "'");
  }

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  const Filling& filling() const { return filling_; }
  const Shape& shape() const { return filling_.shape(); }

  std::string name() const {
    switch (kind_) {
      case Kind::iota: return "iota" + std::to_string(k_);
      case Kind::delta: return "delta" + std::to_string(k_);
      case Kind::fd: return "fd";
      case Kind::explicit_filling: break;
    }
    std::string s = render_filling(filling_);
    for (auto& ch : s)
      if (ch == '\n') ch = '/';
    if (!s.empty()) s.pop_back();
    return "{" + s + "}";
  }

  /// Top-right cell of the pattern's bounding box.
  Cell top_right() const { return {shape().width(), shape().height()}; }

 private:
  Pattern(Kind kind, int k, Filling f) : kind_(kind), k_(k), filling_(std::move(f)) {}

  static Filling diagonal(int k, bool increasing) {
    if (k < 1) throw DomainError("pattern size must be at least 1");
    CellList ones;
    for (int i = 1; i <= k; ++i) ones.push_back({i, increasing ? i : k + 1 - i});
    return Filling::from_ones(Shape::rectangle(k, k), ones);
  }

  Kind kind_;
  int k_;
  Filling filling_;
};

/// Library lookup: "iota<k>", "delta<k>", "fd", or "ds" (the dented shape, all zeros).
inline Filling pattern_library(std::string_view name) {
  std::string t;
  for (char ch : name)
    if (ch != ' ') t.push_back(ch);
  if (t == "ds") return Filling(dented_shape());
  return Pattern::parse(name).filling();
}

// ---------------------------------------------------------------------------
// Containment

template <class Visitor>
void for_each_filling_occurrence(const Filling& host, const Filling& pattern, Visitor&& visit) {
  const auto& pcells = pattern.shape().cells();
  for_each_shape_occurrence(host.shape(), pattern.shape(), [&](const Occurrence& occ) {
    for (std::size_t t = 0; t < pcells.size(); ++t) {
      const int need = pattern.at_index(static_cast<int>(t));
      if (need == 0) continue;
      Cell img{occ.cols[pcells[t].col - 1], occ.rows[pcells[t].row - 1]};
      if (host.at(img) < need) return true;
    }
    return visit(occ);
  });
}

inline std::vector<Occurrence> find_filling_occurrences(const Filling& host, const Pattern& pattern) {
  std::vector<Occurrence> out;
  for_each_filling_occurrence(host, pattern.filling(), [&](const Occurrence& o) {
    out.push_back(o);
    return true;
  });
  return out;
}

inline bool contains_pattern(const Filling& host, const Pattern& pattern) {
  bool found = false;
  for_each_filling_occurrence(host, pattern.filling(), [&](const Occurrence&) {
    found = true;
    return false;
  });
  return found;
}

inline bool avoids(const Filling& host, const std::vector<Pattern>& patterns) {
  return std::none_of(patterns.begin(), patterns.end(),
                      [&](const Pattern& p) { return contains_pattern(host, p); });
}

/// Occurrences of one pattern in one shape, precompiled for fast repeated tests.
/// Each occurrence keeps the label indices of its images together with the value the
/// host must reach there; `mask` collects the images of cells that need a value >= 1.
struct CompiledOccurrence {
  std::uint64_t mask = 0;
  std::vector<std::pair<int, int>> needs;  // (label index, minimum value), only values >= 2
  int top_right = -1;                      // label index of the image of Pattern::top_right()
};

inline std::vector<CompiledOccurrence> compile_occurrences(const Shape& host, const Pattern& pattern) {
  if (host.size() > 64) throw DomainError("compiled occurrences limited to 64-cell hosts");
  std::vector<CompiledOccurrence> out;
  const auto& pcells = pattern.shape().cells();
  const Cell tr = pattern.top_right();
  for_each_shape_occurrence(host, pattern.shape(), [&](const Occurrence& occ) {
    CompiledOccurrence co;
    for (std::size_t t = 0; t < pcells.size(); ++t) {
      const int need = pattern.filling().at_index(static_cast<int>(t));
      const int idx = host.index_of({occ.cols[pcells[t].col - 1], occ.rows[pcells[t].row - 1]});
      if (need >= 1) co.mask |= std::uint64_t{1} << idx;
      if (need >= 2) co.needs.push_back({idx, need});
    }
    if (!pattern.shape().empty())
      co.top_right = host.index_of({occ.cols[tr.col - 1], occ.rows[tr.row - 1]});
    out.push_back(std::move(co));
    return true;
  });
  return out;
}

/// Avoidance test against a fixed pattern set on one shape.
class PatternSet {
 public:
  PatternSet(const Shape& host, const std::vector<Pattern>& patterns) {
    for (const auto& p : patterns)
      for (auto& co : compile_occurrences(host, p)) {
        if (co.needs.empty()) masks_.push_back(co.mask);
        else general_.push_back(std::move(co));
      }
  }

  /// `support` is the nonzero-support word of `values`.
  bool contains_any(std::uint64_t support, std::span<const int> values) const {
    for (auto m : masks_)
      if ((support & m) == m) return true;
    for (const auto& co : general_) {
      if ((support & co.mask) != co.mask) continue;
      bool ok = true;
      for (auto [idx, need] : co.needs) ok = ok && values[idx] >= need;
      if (ok) return true;
    }
    return false;
  }
  bool contains_any_binary(std::uint64_t bits) const {
    for (auto m : masks_)
      if ((bits & m) == m) return true;
    return false;  // patterns with entries >= 2 never occur in binary fillings
  }
  bool contains_any(const Filling& f) const { return contains_any(f.bits(), f.values()); }

 private:
  std::vector<std::uint64_t> masks_;
  std::vector<CompiledOccurrence> general_;
};

// ---------------------------------------------------------------------------
// Chains

enum class Direction { NE, SE };

/// Longest chain by exhaustive occurrence search: the largest k such that iota_k (NE)
/// or delta_k (SE) occurs. Works for any shape.
inline int longest_chain_exhaustive(const Filling& f, Direction dir) {
  int k = 0;
  while (k < std::min(f.shape().width(), f.shape().height())) {
    Pattern p = dir == Direction::NE ? Pattern::iota(k + 1) : Pattern::delta(k + 1);
    if (!contains_pattern(f, p)) break;
    ++k;
  }
  return k;
}

namespace detail {

// Longest strictly monotone chain among `pts` (sorted by label order), all assumed to
// lie in a common full rectangle.
inline int chain_in_rectangle(const CellList& pts, Direction dir) {
  std::vector<int> best(pts.size(), 1);
  int out = 0;
  for (std::size_t b = 0; b < pts.size(); ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      bool ok = pts[a].row < pts[b].row &&
                (dir == Direction::NE ? pts[a].col < pts[b].col : pts[a].col > pts[b].col);
      if (ok) best[b] = std::max(best[b], best[a] + 1);
    }
    out = std::max(out, best[b]);
  }
  return out;
}

}  // namespace detail

/// Length of the longest NE- or SE-chain of nonzero cells, optionally restricted to a
/// rectangle contained in the shape. On skew shapes a dynamic program is used: a SE
/// sequence always spans a full rectangle there, while a NE sequence needs its two
/// off-chain corners present. Other shapes fall back to exhaustive search.
inline int longest_chain(const Filling& f, Direction dir, const std::optional<Rect>& region = std::nullopt) {
  const auto& s = f.shape();
  if (region) {
    if (!rect_inside(s, *region)) throw DomainError("chain region is not contained in the shape");
    CellList pts;
    for (int r = region->row_lo; r <= region->row_hi; ++r)
      for (int c = region->col_lo; c <= region->col_hi; ++c)
        if (f.at(c, r)) pts.push_back({c, r});
    return detail::chain_in_rectangle(pts, dir);
  }
  if (!is_skew(s)) return longest_chain_exhaustive(f, dir);

  const CellList pts = f.ones();  // label order
  if (dir == Direction::SE) return detail::chain_in_rectangle(pts, dir);

  int out = pts.empty() ? 0 : 1;
  std::vector<int> best(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) {
    std::fill(best.begin(), best.end(), 0);
    best[a] = 1;
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const Cell& lo = pts[a];
      const Cell& hi = pts[b];
      if (!(lo.col < hi.col && lo.row < hi.row)) continue;
      if (!s.contains(lo.col, hi.row) || !s.contains(hi.col, lo.row)) continue;
      for (std::size_t x = a; x < b; ++x)
        if (best[x] && pts[x].col < hi.col && pts[x].row < hi.row)
          best[b] = std::max(best[b], best[x] + 1);
      out = std::max(out, best[b]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetries

inline Filling mirror_filling(const Filling& f) {
  const auto& s = f.shape();
  Filling out(mirror_shape(s));
  for (const auto& c : s.cells()) out.set({s.width() + 1 - c.col, c.row}, f.at(c));
  return out;
}

inline Filling rotate180_filling(const Filling& f) {
  const auto& s = f.shape();
  Filling out(rotate180_shape(s));
  for (const auto& c : s.cells()) out.set({s.width() + 1 - c.col, s.height() + 1 - c.row}, f.at(c));
  return out;
}

}  // namespace skewfill

template <>
struct std::hash<skewfill::Filling> {
  std::size_t operator()(const skewfill::Filling& f) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& c : f.shape().cells()) h = (h ^ (c.col * 131 + c.row)) * 1099511628211ull;
    for (int v : f.values()) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};
