#pragma once

// Step-by-step bijection between delta2-avoiding and {iota2, fd}-avoiding binary
// fillings of a skew shape.
//
// Cells carry labels c_1..c_N (rows bottom to top, left to right within a row); a
// binary filling is an N-bit word with c_{t+1} in bit t. G_i is the set of fillings
// with no delta2 occurrence whose top-right image has label > i and no iota2/fd
// occurrence whose top-right image has label <= i. Step i maps G_i onto G_{i+1}; it
// only touches the rectangle X whose top-right corner is c_{i+1}.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewfill/errors.hpp"
#include "skewfill/filling.hpp"
#include "skewfill/shape.hpp"

namespace skewfill {

struct StepAnatomy {
  int i = 0;
  bool row_break = false;
  Cell next{};                  // c_{i+1}
  CellList R;                   // left of c_{i+1} in its row, left to right
  CellList C;                   // below c_{i+1} in its column, bottom to top
  std::optional<Rect> A;        // columns(R) x rows(C); empty if R or C is
  Rect X{};                     // A + R + C + c_{i+1}
};

enum class StepSide { lower, upper };

struct ClassTag {
  StepSide side = StepSide::lower;
  int cls = 1;
};

struct TraceStep {
  int i = 0;
  bool row_break = false;
  int cls = 0;  // 0 on row breaks
  std::uint64_t before = 0;
  std::uint64_t after = 0;
};

using BijectionTrace = std::vector<TraceStep>;

inline std::string bit_string(std::uint64_t bits, int n) {
  std::string s(n, '0');
  for (int t = 0; t < n; ++t)
    if ((bits >> t) & 1U) s[t] = '1';
  return s;
}

inline std::string format_trace(const BijectionTrace& trace, int n) {
  std::ostringstream os;
  for (const auto& st : trace) {
    os << "i=" << st.i << " kind=" << (st.row_break ? "rowbreak" : "inrow") << " class=";
    if (st.row_break) os << "id";
    else os << st.cls;
    os << " before=" << bit_string(st.before, n) << " after=" << bit_string(st.after, n) << '\n';
  }
  return os.str();
}

class ChainBijection {
 public:
  explicit ChainBijection(Shape s) : shape_(std::move(s)) {
    if (!is_skew(shape_)) throw DomainError("chain bijection needs a skew shape");
    if (shape_.size() > 64) throw DomainError("chain bijection limited to 64 cells");
    n_ = shape_.size();
    for (const auto& co : compile_occurrences(shape_, Pattern::delta(2))) delta_.push_back({co.mask, co.top_right + 1});
    for (const auto& co : compile_occurrences(shape_, Pattern::iota(2))) low_.push_back({co.mask, co.top_right + 1});
    for (const auto& co : compile_occurrences(shape_, Pattern::fd())) low_.push_back({co.mask, co.top_right + 1});
    steps_.resize(n_ > 0 ? n_ : 1);
    for (int i = 1; i < n_; ++i) steps_[i] = build_step(i);
  }

  const Shape& shape() const { return shape_; }
  int size() const { return n_; }
  std::uint64_t space_size() const { return std::uint64_t{1} << n_; }
  const CellList& labels() const { return shape_.cells(); }

  /// Largest top-right label of a contained delta2 occurrence, 0 if none.
  int hi_delta(std::uint64_t b) const {
    int hi = 0;
    for (const auto& o : delta_)
      if ((b & o.mask) == o.mask) hi = std::max(hi, o.label);
    return hi;
  }
  /// Smallest top-right label of a contained iota2 or fd occurrence, N+1 if none.
  int lo_forbidden(std::uint64_t b) const {
    int lo = n_ + 1;
    for (const auto& o : low_)
      if ((b & o.mask) == o.mask) lo = std::min(lo, o.label);
    return lo;
  }
  bool in_G(std::uint64_t b, int i) const {
    check_index(i, 1, n_);
    return hi_delta(b) <= i && lo_forbidden(b) > i;
  }

  StepAnatomy anatomy(int i) const {
    check_index(i, 1, n_ - 1);
    const Step& st = steps_[i];
    const auto& cells = shape_.cells();
    StepAnatomy a;
    a.i = i;
    a.row_break = st.row_break;
    a.next = cells[st.p];
    if (st.row_break) return a;
    for (int idx : st.r) a.R.push_back(cells[idx]);
    for (int idx : st.c) a.C.push_back(cells[idx]);
    if (!a.R.empty() && !a.C.empty())
      a.A = Rect{a.R.front().col, a.R.back().col, a.C.front().row, a.C.back().row};
    a.X = st.x;
    return a;
  }

  /// Class 1..5 of b at step i on the given side; throws if b is outside that side's set.
  int class_of(std::uint64_t b, int i, StepSide side) const {
    check_index(i, 1, n_ - 1);
    if (side == StepSide::lower && !in_G(b, i)) throw DomainError("filling is not in G_i");
    if (side == StepSide::upper && !in_G(b, i + 1)) throw DomainError("filling is not in G_{i+1}");
    const Step& st = steps_[i];
    if (st.row_break) return 1;
    return side == StepSide::lower ? lower_class(st, b) : upper_class(st, b);
  }

  std::uint64_t forward(std::uint64_t b, int i) const {
    check_index(i, 1, n_ - 1);
    if (!in_G(b, i)) throw DomainError("step_forward needs a filling in G_i");
    return forward_unchecked(b, i, nullptr);
  }
  std::uint64_t backward(std::uint64_t b, int i) const {
    check_index(i, 1, n_ - 1);
    if (!in_G(b, i + 1)) throw DomainError("step_backward needs a filling in G_{i+1}");
    return backward_unchecked(b, i, nullptr);
  }

  /// Maps G_1 onto G_N. With check_post, every non-identity step is checked against
  /// the step postconditions and a violation throws std::logic_error.
  std::uint64_t full_forward(std::uint64_t b, BijectionTrace* trace = nullptr, bool check_post = false) const {
    if (!in_G(b, 1)) throw DomainError("full_forward needs a delta2-avoiding filling");
    for (int i = 1; i < n_; ++i) {
      int cls = 0;
      const std::uint64_t next = forward_unchecked(b, i, &cls);
      if (check_post && cls > 1) enforce(check_postconditions(b, next, i, true), i);
      if (trace) trace->push_back({i, steps_[i].row_break, cls, b, next});
      b = next;
    }
    return b;
  }
  std::uint64_t full_backward(std::uint64_t b, BijectionTrace* trace = nullptr, bool check_post = false) const {
    if (!in_G(b, n_)) throw DomainError("full_backward needs an {iota2, fd}-avoiding filling");
    for (int i = n_ - 1; i >= 1; --i) {
      int cls = 0;
      const std::uint64_t next = backward_unchecked(b, i, &cls);
      if (check_post && cls > 1) enforce(check_postconditions(b, next, i, false), i);
      if (trace) trace->push_back({i, steps_[i].row_break, cls, b, next});
      b = next;
    }
    return b;
  }

  /// Checks the structural properties every non-identity step must have. `before` is
  /// in G_i for a forward step and in G_{i+1} for a backward one. Returns a description
  /// of the first violated property.
  std::optional<std::string> check_postconditions(std::uint64_t before, std::uint64_t after, int i,
                                                  bool forward_step) const {
    const Step& st = steps_[i];
    if (st.row_break) {
      if (before != after) return "row-break step changed the filling";
      return std::nullopt;
    }
    if ((before ^ after) & ~st.xmask) return "cells outside X changed";
    auto bit = [](std::uint64_t w, int idx) { return static_cast<int>((w >> idx) & 1U); };
    // (1) row counts of X
    for (std::uint64_t m : st.x_rows)
      if (std::popcount(before & m) != std::popcount(after & m)) return "(1) a row of X changed its 1-count";
    // (2) nonzero columns of X
    for (std::uint64_t m : st.x_cols)
      if (((before & m) != 0) != ((after & m) != 0)) return "(2) a column of X changed zero/nonzero status";
    // (3) 1-cells of A weakly right of every 1-cell of R
    {
      int rightmost_r = -1;
      for (std::size_t j = 0; j < st.r.size(); ++j)
        if (bit(after, st.r[j])) rightmost_r = static_cast<int>(j);
      if (rightmost_r >= 0)
        for (int j = 0; j < rightmost_r; ++j)
          if (after & st.a_colmask[j]) return "(3) a 1-cell of A lies left of a 1-cell of R";
    }
    const int w = static_cast<int>(st.r.size());
    const int hgt = static_cast<int>(st.c.size());
    // cell index of A-or-C at (column offset j in 0..w, row offset t), j == w is C
    auto ac = [&](int j, int t) { return j == w ? st.c[t] : st.a[j][t]; };
    // cell index of A-or-R at (column offset j, row offset t in 0..hgt), t == hgt is R
    auto ar = [&](int j, int t) { return t == hgt ? st.r[j] : st.a[j][t]; };
    if (forward_step) {
      // (4) row witnesses in A+C, (5) column witnesses in A+R
      for (int j = 0; j <= w; ++j)
        for (int t = 0; t < hgt; ++t) {
          if (!bit(after, ac(j, t))) continue;
          bool ok = false;
          for (int j2 = 0; j2 <= j && !ok; ++j2) ok = bit(before, ac(j2, t));
          if (!ok) return "(4) a 1-cell of A+C has no weakly-left 1-cell in its row before the step";
        }
      for (int j = 0; j < w; ++j)
        for (int t = 0; t <= hgt; ++t) {
          if (!bit(after, ar(j, t))) continue;
          bool ok = false;
          for (int t2 = 0; t2 <= t && !ok; ++t2) ok = bit(before, ar(j, t2));
          if (!ok) return "(5) a 1-cell of A+R has no weakly-lower 1-cell in its column before the step";
        }
    } else {
      // (6) witnesses right in A+C and above in A+R
      for (int j = 0; j < w; ++j)
        for (int t = 0; t < hgt; ++t) {
          if (!bit(after, st.a[j][t])) continue;
          bool row_ok = false, col_ok = false;
          for (int j2 = j; j2 <= w && !row_ok; ++j2) row_ok = bit(before, ac(j2, t));
          for (int t2 = t; t2 <= hgt && !col_ok; ++t2) col_ok = bit(before, ar(j, t2));
          if (!row_ok || !col_ok) return "(6) a 1-cell of A lacks a witness to its right or above";
        }
      // (8) no new 1-cells in R or C
      if (after & ~before & (st.rmask | st.cmask)) return "(8) a 0-cell of R+C became a 1-cell";
    }
    // (7) subfilling of the nonzero columns of A+C
    auto nonzero_columns = [&](std::uint64_t b) {
      std::vector<std::uint64_t> out;
      for (int j = 0; j <= w; ++j) {
        std::uint64_t v = 0;
        for (int t = 0; t < hgt; ++t) v |= static_cast<std::uint64_t>(bit(b, ac(j, t))) << t;
        if (v) out.push_back(v);
      }
      return out;
    };
    if (nonzero_columns(before) != nonzero_columns(after)) return "(7) nonzero columns of A+C changed";
    return std::nullopt;
  }

 private:
  struct Occ {
    std::uint64_t mask;
    int label;
  };
  struct Step {
    bool row_break = true;
    int p = 0;                                  // index of c_{i+1}
    std::vector<int> r;                         // R indices by column offset
    std::vector<int> c;                         // C indices by row offset
    std::vector<std::vector<int>> a;            // A indices [column offset][row offset]
    std::vector<std::uint64_t> a_colmask;
    std::uint64_t rmask = 0, cmask = 0, amask = 0, xmask = 0;
    std::vector<std::uint64_t> x_rows, x_cols;
    Rect x{};
  };

  static void check_index(int i, int lo, int hi) {
    if (i < lo || i > hi) throw DomainError("step index out of range");
  }
  static void enforce(const std::optional<std::string>& violation, int i) {
    if (violation) throw std::logic_error("step " + std::to_string(i) + ": " + *violation);
  }
  static std::uint64_t one(int idx) { return std::uint64_t{1} << idx; }

  Step build_step(int i) const {
    const auto& cells = shape_.cells();
    Step st;
    st.p = i;
    const Cell p = cells[i];
    st.row_break = cells[i - 1].row != p.row;
    st.x = Rect{p.col, p.col, p.row, p.row};
    if (st.row_break) return st;
    int a_lo = p.col, r_lo = p.row;
    while (shape_.contains(a_lo - 1, p.row)) --a_lo;
    while (shape_.contains(p.col, r_lo - 1)) --r_lo;
    for (int c = a_lo; c < p.col; ++c) st.r.push_back(shape_.index_of({c, p.row}));
    for (int r = r_lo; r < p.row; ++r) st.c.push_back(shape_.index_of({p.col, r}));
    st.x = Rect{a_lo, p.col, r_lo, p.row};
    for (int c = a_lo; c < p.col; ++c) {
      std::vector<int> col;
      std::uint64_t m = 0;
      for (int r = r_lo; r < p.row; ++r) {
        const int idx = shape_.index_of({c, r});
        if (idx < 0) throw std::logic_error("rectangle X is not contained in the shape");
        col.push_back(idx);
        m |= one(idx);
      }
      st.a.push_back(std::move(col));
      st.a_colmask.push_back(m);
      st.amask |= m;
    }
    for (int idx : st.r) st.rmask |= one(idx);
    for (int idx : st.c) st.cmask |= one(idx);
    st.xmask = st.amask | st.rmask | st.cmask | one(st.p);
    for (int r = r_lo; r <= p.row; ++r) {
      std::uint64_t m = 0;
      for (int c = a_lo; c <= p.col; ++c) m |= one(shape_.index_of({c, r}));
      st.x_rows.push_back(m);
    }
    for (int c = a_lo; c <= p.col; ++c) {
      std::uint64_t m = 0;
      for (int r = r_lo; r <= p.row; ++r) m |= one(shape_.index_of({c, r}));
      st.x_cols.push_back(m);
    }
    return st;
  }

  // Column content helpers; the column at offset w (== number of A columns) is C.
  static std::uint64_t read_col(const Step& st, std::uint64_t b, int j) {
    const auto& idx = j == static_cast<int>(st.a.size()) ? st.c : st.a[j];
    std::uint64_t v = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) v |= ((b >> idx[t]) & 1U) << t;
    return v;
  }
  static std::uint64_t write_col(const Step& st, std::uint64_t b, int j, std::uint64_t v) {
    const auto& idx = j == static_cast<int>(st.a.size()) ? st.c : st.a[j];
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if ((v >> t) & 1U) b |= one(idx[t]);
      else b &= ~one(idx[t]);
    }
    return b;
  }
  static std::vector<int> nonzero_a_cols(const Step& st, std::uint64_t b) {
    std::vector<int> out;
    for (std::size_t j = 0; j < st.a.size(); ++j)
      if (b & st.a_colmask[j]) out.push_back(static_cast<int>(j));
    return out;
  }
  static bool overlaps(const Step& st, std::uint64_t b) {
    for (std::size_t j = 0; j < st.r.size(); ++j)
      if (((b >> st.r[j]) & 1U) && (b & st.a_colmask[j])) return true;
    return false;
  }

  static int lower_class(const Step& st, std::uint64_t b) {
    const bool p = (b >> st.p) & 1U;
    if (!p || !(b & st.amask)) return 1;
    if (b & st.cmask) return 2;
    if (overlaps(st, b)) return nonzero_a_cols(st, b).size() == 1 ? 3 : 4;
    return 5;
  }
  static int upper_class(const Step& st, std::uint64_t b) {
    if (!(b & st.cmask) || !(b & st.rmask)) return 1;
    if ((b >> st.p) & 1U) return 3;
    if (overlaps(st, b)) return std::popcount(b & st.rmask) == 1 ? 2 : 4;
    return 5;
  }

  // shifts the contents of columns cols[0..k-1] one step right along the list, the
  // last one moving into C, and clears cols[0]
  static std::uint64_t shift_right(const Step& st, std::uint64_t b, const std::vector<int>& cols) {
    const int w = static_cast<int>(st.a.size());
    std::vector<std::uint64_t> vals;
    for (int j : cols) vals.push_back(read_col(st, b, j));
    b = write_col(st, b, w, vals.back());
    for (std::size_t m = 0; m + 1 < cols.size(); ++m) b = write_col(st, b, cols[m + 1], vals[m]);
    return write_col(st, b, cols.front(), 0);
  }
  // inverse of shift_right
  static std::uint64_t shift_left(const Step& st, std::uint64_t b, const std::vector<int>& cols) {
    const int w = static_cast<int>(st.a.size());
    std::vector<std::uint64_t> vals;
    for (int j : cols) vals.push_back(read_col(st, b, j));
    for (std::size_t m = 0; m + 1 < cols.size(); ++m) b = write_col(st, b, cols[m], vals[m + 1]);
    b = write_col(st, b, cols.back(), read_col(st, b, w));
    return write_col(st, b, w, 0);
  }

  std::uint64_t forward_unchecked(std::uint64_t b, int i, int* cls_out) const {
    const Step& st = steps_[i];
    if (st.row_break) {
      if (cls_out) *cls_out = 0;
      return b;
    }
    const int cls = lower_class(st, b);
    if (cls_out) *cls_out = cls;
    const auto cols = nonzero_a_cols(st, b);
    const int w = static_cast<int>(st.a.size());
    switch (cls) {
      case 1:
        return b;
      case 2:
        return (b | one(st.r[cols.front()])) & ~one(st.p);
      case 3: {
        b = write_col(st, b, w, read_col(st, b, cols.front()));
        return write_col(st, b, cols.front(), 0);
      }
      case 4:
        b = shift_right(st, b, cols);
        return (b | one(st.r[cols[1]])) & ~one(st.p);
      default:
        b = shift_right(st, b, cols);
        return (b | one(st.r[cols[0]])) & ~one(st.p);
    }
  }

  std::uint64_t backward_unchecked(std::uint64_t b, int i, int* cls_out) const {
    const Step& st = steps_[i];
    if (st.row_break) {
      if (cls_out) *cls_out = 0;
      return b;
    }
    const int cls = upper_class(st, b);
    if (cls_out) *cls_out = cls;
    const int w = static_cast<int>(st.a.size());
    int rightmost_r = -1;
    for (int j = 0; j < w; ++j)
      if ((b >> st.r[j]) & 1U) rightmost_r = j;
    switch (cls) {
      case 1:
        return b;
      case 2:
        return (b & ~st.rmask) | one(st.p);
      case 3: {
        b = write_col(st, b, rightmost_r, read_col(st, b, w));
        return write_col(st, b, w, 0);
      }
      case 4: {
        auto cols = nonzero_a_cols(st, b);
        int c1 = -1;
        for (int j = cols.front() - 1; j >= 0; --j)
          if ((b >> st.r[j]) & 1U) {
            c1 = j;
            break;
          }
        if (c1 < 0) throw std::logic_error("class 4 backward step found no column C_1");
        cols.insert(cols.begin(), c1);
        const int c2 = cols[1];
        b = shift_left(st, b, cols);
        return (b & ~one(st.r[c2])) | one(st.p);
      }
      default: {
        auto cols = nonzero_a_cols(st, b);
        cols.insert(cols.begin(), rightmost_r);
        b = shift_left(st, b, cols);
        return (b & ~one(st.r[rightmost_r])) | one(st.p);
      }
    }
  }

  Shape shape_;
  int n_ = 0;
  std::vector<Occ> delta_, low_;
  std::vector<Step> steps_;  // indexed by i, entry 0 unused
};

// ---------------------------------------------------------------------------
// Filling-level API

inline CellList cell_labels(const Shape& s) {
  if (!is_skew(s)) throw DomainError("cell labels are defined for skew shapes");
  return s.cells();
}

inline bool occurrence_is_low(const Shape& s, const Occurrence& occ, const Pattern& pattern, int i) {
  const Shape& ps = pattern.shape();
  if (static_cast<int>(occ.cols.size()) != ps.width() || static_cast<int>(occ.rows.size()) != ps.height() ||
      !std::is_sorted(occ.cols.begin(), occ.cols.end()) || !std::is_sorted(occ.rows.begin(), occ.rows.end()))
    throw DomainError("invalid occurrence");
  for (int c : occ.cols)
    if (c < 1 || c > s.width()) throw DomainError("invalid occurrence");
  for (int r : occ.rows)
    if (r < 1 || r > s.height()) throw DomainError("invalid occurrence");
  if (induced_subshape(s, occ.cols, occ.rows) != ps) throw DomainError("selection does not induce the pattern shape");
  const Cell tr = pattern.top_right();
  const int idx = s.index_of({occ.cols[tr.col - 1], occ.rows[tr.row - 1]});
  return idx + 1 <= i;
}

namespace detail {
inline std::uint64_t binary_bits(const Filling& f) {
  for (int v : f.values())
    if (v > 1) throw DomainError("the chain bijection works on binary fillings");
  return f.bits();
}
}  // namespace detail

inline bool in_G(const Shape& s, const Filling& f, int i) {
  if (f.shape() != s) throw DomainError("filling does not live on the given shape");
  return ChainBijection(s).in_G(detail::binary_bits(f), i);
}

inline StepAnatomy step_anatomy(const Shape& s, int i) { return ChainBijection(s).anatomy(i); }

inline ClassTag class_of(const Filling& f, int i, StepSide side) {
  return {side, ChainBijection(f.shape()).class_of(detail::binary_bits(f), i, side)};
}

inline Filling step_forward(const Filling& f, int i) {
  ChainBijection cb(f.shape());
  return Filling::from_bits(f.shape(), cb.forward(detail::binary_bits(f), i));
}

inline Filling step_backward(const Filling& f, int i) {
  ChainBijection cb(f.shape());
  return Filling::from_bits(f.shape(), cb.backward(detail::binary_bits(f), i));
}

inline std::pair<Filling, BijectionTrace> full_forward(const Filling& f) {
  ChainBijection cb(f.shape());
  BijectionTrace trace;
  const auto out = cb.full_forward(detail::binary_bits(f), &trace, true);
  return {Filling::from_bits(f.shape(), out), std::move(trace)};
}

inline std::pair<Filling, BijectionTrace> full_backward(const Filling& f) {
  ChainBijection cb(f.shape());
  BijectionTrace trace;
  const auto out = cb.full_backward(detail::binary_bits(f), &trace, true);
  return {Filling::from_bits(f.shape(), out), std::move(trace)};
}

}  // namespace skewfill
