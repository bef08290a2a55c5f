#pragma once

// Structure of dented-shape-free skew shapes: two independent freeness tests, the
// Ferrers decomposition F1 |v G1 |h F2 |v ... |v Gn, and the row/column sum
// permutations built from its special row and column blocks.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skewfill/errors.hpp"
#include "skewfill/shape.hpp"

namespace skewfill {

enum class DsFreeMethod { pattern, rectangle };

inline CellList quadrant(const Shape& s, Cell at, bool cols_le, bool rows_le) {
  CellList out;
  for (const auto& c : s.cells()) {
    bool in_col = cols_le ? c.col <= at.col : c.col >= at.col;
    bool in_row = rows_le ? c.row <= at.row : c.row >= at.row;
    if (in_col && in_row) out.push_back(c);
  }
  return out;
}

inline bool is_ds_free(const Shape& s, DsFreeMethod method) {
  if (!is_skew(s)) throw DomainError("dented-shape freeness is only defined for skew shapes");
  if (method == DsFreeMethod::pattern) return !contains_shape(s, dented_shape());
  for (const auto& c : s.cells()) {
    // S[<=i, >=j] or S[>=i, <=j] must be a rectangle
    if (!is_rectangle(quadrant(s, c, true, false)) && !is_rectangle(quadrant(s, c, false, true)))
      return false;
  }
  return true;
}

enum class BlockKind { nw, se };

struct Block {
  BlockKind kind = BlockKind::nw;
  CellList cells;  // host coordinates, label order
  friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks F1, G1, ..., Fn, Gn in order (Gn may be empty). Vertical cut c_i sits between
/// columns c_i and c_i+1 (F_i | G_i), horizontal cut r_i between rows r_i and r_i+1
/// (G_i | F_{i+1}).
struct Decomposition {
  std::vector<Block> blocks;
  std::vector<int> vertical_cuts;
  std::vector<int> horizontal_cuts;

  int n() const { return static_cast<int>(blocks.size() / 2); }
  const Block& F(int i) const { return blocks[2 * (i - 1)]; }
  const Block& G(int i) const { return blocks[2 * (i - 1) + 1]; }
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

namespace detail {

struct CellGrid {
  int w = 0, h = 0;
  std::vector<char> on;

  explicit CellGrid(const Shape& s) : w(s.width()), h(s.height()), on(static_cast<std::size_t>(w) * h, 0) {
    for (const auto& c : s.cells()) set(c, true);
  }
  bool get(int col, int row) const {
    if (col < 1 || row < 1 || col > w || row > h) return false;
    return on[static_cast<std::size_t>(row - 1) * w + col - 1];
  }
  void set(Cell c, bool v) { on[static_cast<std::size_t>(c.row - 1) * w + c.col - 1] = v; }
  bool any() const { return std::find(on.begin(), on.end(), 1) != on.end(); }
};

inline void sort_cells(CellList& cells) { std::sort(cells.begin(), cells.end(), LabelLess{}); }

}  // namespace detail

/// The inductive procedure: peel F1 = columns left of the leftmost cell of row j+1
/// (j = top of the first column), then G1 = the rectangle S[>=i, <=j] widened up to
/// the row below the bottom of column i'+1, and recurse on the rest. Runs on any
/// shape; returns nullopt as soon as a step is impossible. The result is not
/// validated.
inline std::optional<Decomposition> run_ferrers_procedure(const Shape& s) {
  if (s.empty()) return std::nullopt;
  detail::CellGrid rem(s);
  Decomposition d;
  auto cells_where = [&](auto pred) {
    CellList out;
    for (int r = 1; r <= rem.h; ++r)
      for (int c = 1; c <= rem.w; ++c)
        if (rem.get(c, r) && pred(c, r)) out.push_back({c, r});
    return out;
  };
  while (true) {
    int minc = 0, top = 0, rightmost = 0;
    for (int r = 1; r <= rem.h; ++r)
      for (int c = 1; c <= rem.w; ++c)
        if (rem.get(c, r)) {
          if (!minc || c < minc) minc = c;
          top = std::max(top, r);
          rightmost = std::max(rightmost, c);
        }
    if (!minc) return std::nullopt;
    int j = 0;
    for (int r = 1; r <= rem.h; ++r)
      if (rem.get(minc, r)) j = r;
    if (j == top) {
      d.blocks.push_back({BlockKind::nw, cells_where([](int, int) { return true; })});
      d.blocks.push_back({BlockKind::se, {}});
      return d;
    }
    int i = 0;
    for (int c = 1; c <= rem.w && !i; ++c)
      if (rem.get(c, j + 1)) i = c;
    if (!i || !rem.get(i, j)) return std::nullopt;
    CellList f = cells_where([&](int c, int) { return c < i; });
    if (f.empty()) return std::nullopt;
    CellList q = cells_where([&](int c, int r) { return c >= i && r <= j; });
    if (!is_rectangle(q)) return std::nullopt;
    int i2 = i, j2 = j;
    for (const auto& c : q) {
      i2 = std::max(i2, c.col);
      j2 = std::min(j2, c.row);
    }
    d.vertical_cuts.push_back(i - 1);
    if (i2 == rightmost) {
      d.blocks.push_back({BlockKind::nw, f});
      d.blocks.push_back({BlockKind::se, cells_where([&](int c, int) { return c >= i; })});
      return d;
    }
    int j3 = 0;
    for (int r = rem.h; r >= 1; --r)
      if (rem.get(i2 + 1, r)) j3 = r;
    if (!j3 || j3 <= j) return std::nullopt;
    CellList g = cells_where([&](int c, int r) { return c >= i && c <= i2 && r >= j2 && r <= j3 - 1; });
    d.horizontal_cuts.push_back(j3 - 1);
    for (const auto& c : f) rem.set(c, false);
    for (const auto& c : g) rem.set(c, false);
    d.blocks.push_back({BlockKind::nw, std::move(f)});
    d.blocks.push_back({BlockKind::se, std::move(g)});
    if (!rem.any()) return std::nullopt;
  }
}

/// Checks conditions (a)-(d), the concatenation geometry, the recorded cut lines, and
/// that the blocks tile the shape.
inline bool validate_decomposition(const Shape& s, const Decomposition& d) {
  if (d.blocks.size() < 2 || d.blocks.size() % 2) return false;
  const int n = d.n();
  for (std::size_t t = 0; t < d.blocks.size(); ++t)
    if (d.blocks[t].kind != (t % 2 ? BlockKind::se : BlockKind::nw)) return false;

  // tiling
  std::set<std::pair<int, int>> seen;
  std::size_t total = 0;
  for (const auto& b : d.blocks)
    for (const auto& c : b.cells) {
      if (!s.contains(c)) return false;
      seen.insert({c.col, c.row});
      ++total;
    }
  if (total != seen.size() || static_cast<int>(total) != s.size()) return false;

  // (a), (b)
  for (int i = 1; i <= n; ++i) {
    if (d.F(i).cells.empty()) return false;
    if (!classify_shape(normalize(d.F(i).cells)).nw_ferrers) return false;
    if (d.G(i).cells.empty()) {
      if (i < n) return false;
    } else if (!classify_shape(normalize(d.G(i).cells)).se_ferrers) {
      return false;
    }
  }

  auto top_in_col = [&](int c) {
    int t = 0;
    for (int r = 1; r <= s.height(); ++r)
      if (s.contains(c, r)) t = r;
    return t;
  };
  auto right_in_row = [&](int r) {
    int t = 0;
    for (int c = 1; c <= s.width(); ++c)
      if (s.contains(c, r)) t = c;
    return t;
  };
  struct Extent {
    int c0 = 1 << 30, c1 = 0, r0 = 1 << 30, r1 = 0;
  };
  auto extent = [](const CellList& cells) {
    Extent e;
    for (const auto& c : cells) {
      e.c0 = std::min(e.c0, c.col);
      e.c1 = std::max(e.c1, c.col);
      e.r0 = std::min(e.r0, c.row);
      e.r1 = std::max(e.r1, c.row);
    }
    return e;
  };

  std::vector<int> vcuts, hcuts;
  CellList rest = s.cells();
  auto minus = [](const CellList& a, const CellList& b) {
    std::set<std::pair<int, int>> drop;
    for (const auto& c : b) drop.insert({c.col, c.row});
    CellList out;
    for (const auto& c : a)
      if (!drop.count({c.col, c.row})) out.push_back(c);
    return out;
  };

  for (int i = 1; i <= n; ++i) {
    const auto& f = d.F(i).cells;
    const auto& g = d.G(i).cells;
    CellList after_f = minus(rest, f);
    if (after_f.size() + f.size() != rest.size()) return false;
    const Extent ef = extent(f);
    if (!after_f.empty()) {
      // vertical concatenation: F | (everything else)
      const Extent er = extent(after_f);
      if (er.c0 != ef.c1 + 1) return false;
      int bottom_of_last_col = 1 << 30;
      for (const auto& c : f)
        if (c.col == ef.c1) bottom_of_last_col = std::min(bottom_of_last_col, c.row);
      if (er.r0 < bottom_of_last_col) return false;
      vcuts.push_back(ef.c1);
    }
    if (g.empty()) {
      if (!after_f.empty()) return false;
      break;
    }
    CellList after_g = minus(after_f, g);
    if (after_g.size() + g.size() != after_f.size()) return false;
    if (i == n) {
      if (!after_g.empty()) return false;
      break;
    }
    // horizontal concatenation: G below, remainder above
    const Extent eg = extent(g);
    const Extent er = extent(after_g);
    if (after_g.empty() || er.r0 != eg.r1 + 1) return false;
    int left_of_top_row = 1 << 30;
    for (const auto& c : g)
      if (c.row == eg.r1) left_of_top_row = std::min(left_of_top_row, c.col);
    if (er.c0 < left_of_top_row) return false;
    hcuts.push_back(eg.r1);
    rest = std::move(after_g);
  }
  if (vcuts != d.vertical_cuts || hcuts != d.horizontal_cuts) return false;

  for (int i = 1; i < n; ++i) {
    // (c)
    const int c = vcuts[i - 1];
    if (!(top_in_col(c) < top_in_col(c + 1))) return false;
    const int r = hcuts[i - 1];
    if (!(right_in_row(r) < right_in_row(r + 1))) return false;
    // (d)
    if (i < static_cast<int>(vcuts.size()) && extent(d.G(i).cells).c1 > vcuts[i]) return false;
    if (extent(d.F(i).cells).r1 > r) return false;
  }
  return true;
}

/// Ferrers decomposition of a connected dented-shape-free skew shape.
inline Decomposition ferrers_decompose(const Shape& s) {
  if (s.empty()) throw DomainError("cannot decompose the empty shape");
  if (!is_connected(s)) throw DomainError("Ferrers decomposition needs a connected shape");
  if (!is_skew(s)) throw DomainError("Ferrers decomposition needs a skew shape");
  if (!is_ds_free(s, DsFreeMethod::pattern)) throw DomainError("shape contains the dented shape");
  auto d = run_ferrers_procedure(s);
  if (!d || !validate_decomposition(s, *d))
    throw DomainError("decomposition procedure failed on a dented-shape-free shape");
  return *d;
}

struct ComponentDecomposition {
  Cell offset;      // host cell = component cell + offset
  Decomposition d;  // in host coordinates
};

/// Decomposes each connected component separately (host coordinates).
inline std::vector<ComponentDecomposition> decompose_components(const Shape& s) {
  if (!is_skew(s)) throw DomainError("Ferrers decomposition needs a skew shape");
  std::vector<ComponentDecomposition> out;
  for (const auto& comp : connected_components(s)) {
    Decomposition d = ferrers_decompose(comp.shape);
    auto shift = [&](CellList& cells) {
      for (auto& c : cells) {
        c.col += comp.offset.col;
        c.row += comp.offset.row;
      }
    };
    for (auto& b : d.blocks) shift(b.cells);
    for (auto& c : d.vertical_cuts) c += comp.offset.col;
    for (auto& r : d.horizontal_cuts) r += comp.offset.row;
    out.push_back({comp.offset, std::move(d)});
  }
  return out;
}

struct SpecialBlocks {
  std::vector<std::vector<int>> row_blocks;  // rows meeting both F_i and G_i
  std::vector<std::vector<int>> col_blocks;  // columns meeting both G_i and F_{i+1}
  friend bool operator==(const SpecialBlocks&, const SpecialBlocks&) = default;
};

inline SpecialBlocks special_blocks(const Decomposition& d) {
  SpecialBlocks sb;
  auto rows_of = [](const CellList& cells) {
    std::set<int> out;
    for (const auto& c : cells) out.insert(c.row);
    return out;
  };
  auto cols_of = [](const CellList& cells) {
    std::set<int> out;
    for (const auto& c : cells) out.insert(c.col);
    return out;
  };
  auto meet = [](const std::set<int>& a, const std::set<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  for (int i = 1; i <= d.n(); ++i) {
    if (!d.G(i).cells.empty()) {
      auto rows = meet(rows_of(d.F(i).cells), rows_of(d.G(i).cells));
      if (!rows.empty()) sb.row_blocks.push_back(rows);
    }
    if (i < d.n()) {
      auto cols = meet(cols_of(d.G(i).cells), cols_of(d.F(i + 1).cells));
      if (!cols.empty()) sb.col_blocks.push_back(cols);
    }
  }
  return sb;
}

inline SpecialBlocks special_blocks(const Shape& s) {
  SpecialBlocks all;
  for (const auto& cd : decompose_components(s)) {
    auto sb = special_blocks(cd.d);
    all.row_blocks.insert(all.row_blocks.end(), sb.row_blocks.begin(), sb.row_blocks.end());
    all.col_blocks.insert(all.col_blocks.end(), sb.col_blocks.begin(), sb.col_blocks.end());
  }
  return all;
}

/// rho[r-1] is the image of row r, sigma[c-1] the image of column c (1-based values).
struct SumPermutations {
  std::vector<int> rho;
  std::vector<int> sigma;
  friend bool operator==(const SumPermutations&, const SumPermutations&) = default;
};

inline SumPermutations sum_permutations(const Shape& s) {
  if (!is_ds_free(s, DsFreeMethod::pattern)) throw DomainError("shape contains the dented shape");
  const SpecialBlocks sb = special_blocks(s);
  SumPermutations p;
  p.rho.resize(s.height());
  p.sigma.resize(s.width());
  for (int r = 1; r <= s.height(); ++r) p.rho[r - 1] = r;
  for (int c = 1; c <= s.width(); ++c) p.sigma[c - 1] = c;
  for (const auto& blk : sb.row_blocks)
    for (int r : blk) p.rho[r - 1] = blk.front() + blk.back() - r;
  for (const auto& blk : sb.col_blocks)
    for (int c : blk) p.sigma[c - 1] = blk.front() + blk.back() - c;
  return p;
}

/// Applies a line permutation to a sum vector: out[perm[t]-1] = in[t].
inline std::vector<int> permute_sums(const std::vector<int>& sums, const std::vector<int>& perm) {
  std::vector<int> out(sums.size());
  for (std::size_t t = 0; t < sums.size(); ++t) out[perm[t] - 1] = sums[t];
  return out;
}

/// Labeled grid (top row first, one token per column) followed by cut lines
/// "v <col>" / "h <row>". Components after the first are prefixed "<k>." in the grid
/// and "[k] " on cut lines.
inline std::string render_decomposition(const Shape& s, const std::vector<ComponentDecomposition>& comps) {
  std::map<std::pair<int, int>, std::string> tag;
  const bool multi = comps.size() > 1;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& d = comps[k].d;
    for (int i = 1; i <= d.n(); ++i) {
      const std::string prefix = multi ? std::to_string(k + 1) + "." : "";
      for (const auto& c : d.F(i).cells) tag[{c.col, c.row}] = prefix + "F" + std::to_string(i);
      for (const auto& c : d.G(i).cells) tag[{c.col, c.row}] = prefix + "G" + std::to_string(i);
    }
  }
  std::size_t width = 1;
  for (const auto& [pos, t] : tag) width = std::max(width, t.size());
  std::ostringstream os;
  for (int r = s.height(); r >= 1; --r) {
    for (int c = 1; c <= s.width(); ++c) {
      std::string t = s.contains(c, r) ? tag.at({c, r}) : ".";
      if (c < s.width()) t.resize(width, ' ');
      os << t << (c < s.width() ? " " : "");
    }
    os << '\n';
  }
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string prefix = multi ? "[" + std::to_string(k + 1) + "] " : "";
    for (int c : comps[k].d.vertical_cuts) os << prefix << "v " << c << '\n';
    for (int r : comps[k].d.horizontal_cuts) os << prefix << "h " << r << '\n';
  }
  return os.str();
}

}  // namespace skewfill
