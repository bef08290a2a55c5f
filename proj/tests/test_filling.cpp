#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace skewfill;

namespace {

const Shape& ds() { return dented_shape(); }

Filling ones_on_ds(const CellList& ones) { return Filling::from_ones(ds(), ones); }

// c1=(1,1) c2=(2,1) c3=(1,2) c4=(2,2) c5=(3,2) c6=(2,3) c7=(3,3)
Filling by_labels(std::initializer_list<int> labels) {
  CellList ones;
  for (int l : labels) ones.push_back(ds().cells()[l - 1]);
  return ones_on_ds(ones);
}

}  // namespace

TEST(ParseFilling, Examples) {
  const Filling fd = parse_filling(".10\n001\n10.");
  EXPECT_EQ(fd.shape(), ds());
  EXPECT_EQ(fd, Pattern::fd().filling());
  EXPECT_EQ(fd.ones(), (CellList{{1, 1}, {3, 2}, {2, 3}}));

  const Filling one = parse_filling("1");
  EXPECT_EQ(one.shape().size(), 1);
  EXPECT_EQ(one.at(1, 1), 1);

  const Filling zero = parse_filling("00\n00");
  EXPECT_EQ(zero.shape(), Shape::rectangle(2, 2));
  EXPECT_TRUE(zero.ones().empty());
}

TEST(ParseFilling, Errors) {
  EXPECT_THROW(parse_filling("10\n1"), ParseError);
  EXPECT_THROW(parse_filling("1a"), ParseError);
  EXPECT_THROW(parse_filling(""), ParseError);
}

TEST(ParseFilling, NumericFormat) {
  const Filling f = parse_filling("x,12\n3,0");
  EXPECT_EQ(f.shape(), Shape::from_cells({{2, 2}, {1, 1}, {2, 1}}));
  EXPECT_EQ(f.at(2, 2), 12);
  EXPECT_EQ(f.at(1, 1), 3);
  EXPECT_EQ(parse_filling(render_filling(f)), f);
  EXPECT_EQ(render_filling(parse_filling(".10\n001\n10.\n")), ".10\n001\n10.\n");
}

TEST(FillingKind, Examples) {
  const auto fd = filling_kind(Pattern::fd().filling());
  EXPECT_TRUE(fd.binary && fd.sparse && fd.transversal);
  const auto zero = filling_kind(Filling(ds()));
  EXPECT_TRUE(zero.binary && zero.sparse);
  EXPECT_FALSE(zero.transversal);
  EXPECT_FALSE(filling_kind(parse_filling("2")).binary);
}

TEST(FillingKind, Hierarchy) {
  for (std::uint64_t b = 0; b < 128; ++b) {
    const auto k = filling_kind(Filling::from_bits(ds(), b));
    if (k.transversal) {
      EXPECT_TRUE(k.sparse);
    }
    if (k.sparse) {
      EXPECT_TRUE(k.binary);
    }
  }
}

TEST(SumVector, Examples) {
  const auto fd = sum_vector(Pattern::fd().filling());
  EXPECT_EQ(fd.row_sums, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(fd.col_sums, (std::vector<int>{1, 1, 1}));
  const auto zero = sum_vector(Filling(ds()));
  EXPECT_EQ(zero.row_sums, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(zero.col_sums, (std::vector<int>{0, 0, 0}));
  const auto f = sum_vector(by_labels({1, 2, 4}));
  EXPECT_EQ(f.row_sums, (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(f.col_sums, (std::vector<int>{1, 2, 0}));
}

TEST(FillingOccurrences, Examples) {
  const Filling t1 = ones_on_ds({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_EQ(find_filling_occurrences(t1, Pattern::iota(2)).size(), 2U);
  const Filling fd = Pattern::fd().filling();
  EXPECT_EQ(find_filling_occurrences(fd, Pattern::delta(2)), (std::vector<Occurrence>{{{2, 3}, {2, 3}}}));
  EXPECT_TRUE(find_filling_occurrences(fd, Pattern::iota(2)).empty());
}

TEST(FillingOccurrences, MatchesOracle) {
  const std::vector<Pattern> pats{Pattern::iota(2), Pattern::delta(2), Pattern::fd(), Pattern::iota(3),
                                  Pattern::delta(3), Pattern::from_filling(parse_filling("1.\n01"))};
  for (int n = 1; n <= 7; ++n)
    for (const auto& s : enum_skew_shapes(n))
      for (std::uint64_t b = 0; b < (1ULL << n); b += (n >= 6 ? 3 : 1)) {
        const Filling f = Filling::from_bits(s, b);
        for (const auto& p : pats) {
          auto got = find_filling_occurrences(f, p);
          auto want = oracle::occurrences(f, p.filling());
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          ASSERT_EQ(got, want) << format_row_intervals(s) << " bits=" << b << " " << p.name();
        }
      }
}

TEST(FillingOccurrences, IntegerValuesDominate) {
  const Filling host = parse_filling("02\n10");
  const Pattern p = Pattern::from_filling(parse_filling("02\n10"));
  EXPECT_TRUE(contains_pattern(host, p));
  EXPECT_FALSE(contains_pattern(parse_filling("01\n10"), p));
}

TEST(Avoids, Examples) {
  const Filling t3 = ones_on_ds({{1, 2}, {2, 1}, {3, 3}});
  EXPECT_TRUE(avoids(t3, {Pattern::iota(2), Pattern::fd()}));
  const Filling t2 = ones_on_ds({{1, 1}, {2, 3}, {3, 2}});
  EXPECT_TRUE(avoids(t2, {Pattern::iota(2)}));
  EXPECT_FALSE(avoids(t2, {Pattern::iota(2), Pattern::fd()}));
  const Filling zero(ds());
  EXPECT_TRUE(avoids(zero, {Pattern::iota(2), Pattern::delta(2), Pattern::fd(), Pattern::iota(1)}));
}

TEST(Avoids, PatternSetAgreesWithAvoids) {
  const std::vector<Pattern> set{Pattern::iota(2), Pattern::fd()};
  for (int n = 1; n <= 7; ++n)
    for (const auto& s : enum_skew_shapes(n)) {
      const PatternSet ps(s, set);
      for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
        const Filling f = Filling::from_bits(s, b);
        ASSERT_EQ(ps.contains_any_binary(b), !avoids(f, set));
      }
    }
}

TEST(Containment, Monotone) {
  for (const auto& s : enum_skew_shapes(6))
    for (std::uint64_t b = 0; b < 64; ++b) {
      const Filling f = Filling::from_bits(s, b);
      const bool had = contains_pattern(f, Pattern::iota(2));
      for (int t = 0; t < 6; ++t) {
        Filling g = f;
        g.set(s.cells()[t], f.at(s.cells()[t]) + 1);
        if (had) {
          ASSERT_TRUE(contains_pattern(g, Pattern::iota(2)));
        }
      }
    }
}

TEST(LongestChain, Examples) {
  EXPECT_EQ(longest_chain(by_labels({1, 2, 4}), Direction::NE), 2);
  const Filling fd = Pattern::fd().filling();
  EXPECT_EQ(longest_chain(fd, Direction::NE), 1);
  EXPECT_EQ(longest_chain(fd, Direction::SE), 2);
  EXPECT_EQ(longest_chain(Filling(ds()), Direction::NE), 0);
  EXPECT_EQ(longest_chain(Filling(ds()), Direction::SE), 0);
}

TEST(LongestChain, Region) {
  const Filling t1 = ones_on_ds({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_EQ(longest_chain(t1, Direction::NE, Rect{1, 2, 1, 2}), 2);
  EXPECT_EQ(longest_chain(t1, Direction::NE, Rect{1, 1, 1, 2}), 1);
  EXPECT_THROW(longest_chain(t1, Direction::NE, Rect{1, 3, 1, 1}), DomainError);
}

TEST(LongestChain, AgreesWithAvoidanceAndOracle) {
  for (int n = 1; n <= 8; ++n)
    for (const auto& s : enum_skew_shapes(n))
      for (std::uint64_t b = 0; b < (1ULL << n); b += (n == 8 ? 7 : 1)) {
        const Filling f = Filling::from_bits(s, b);
        const int ne = longest_chain(f, Direction::NE), se = longest_chain(f, Direction::SE);
        ASSERT_EQ(ne, oracle::longest_chain(f, Direction::NE)) << format_row_intervals(s) << " " << b;
        ASSERT_EQ(se, oracle::longest_chain(f, Direction::SE)) << format_row_intervals(s) << " " << b;
        for (int k = 1; k <= 3; ++k) {
          ASSERT_EQ(avoids(f, {Pattern::iota(k)}), ne < k);
          ASSERT_EQ(avoids(f, {Pattern::delta(k)}), se < k);
        }
      }
}

TEST(LongestChain, ExhaustiveFallbackAgrees) {
  const Shape moon = Shape::from_cells({{1, 1}, {2, 1}, {3, 1}, {2, 2}, {1, 0}});
  for (std::uint64_t b = 0; b < (1ULL << moon.size()); ++b) {
    const Filling f = Filling::from_bits(moon, b);
    EXPECT_EQ(longest_chain(f, Direction::NE), oracle::longest_chain(f, Direction::NE));
  }
}

TEST(LongestChain, Symmetries) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& s : enum_skew_shapes(n))
      for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
        const Filling f = Filling::from_bits(s, b);
        const Filling rot = rotate180_filling(f), mir = mirror_filling(f);
        ASSERT_EQ(longest_chain(rot, Direction::NE), longest_chain(f, Direction::NE));
        ASSERT_EQ(longest_chain(rot, Direction::SE), longest_chain(f, Direction::SE));
        ASSERT_EQ(oracle::longest_chain(mir, Direction::NE), longest_chain(f, Direction::SE));
      }
}

TEST(LongestChain, TwoChainsDoNotConcatenate) {
  // 4x4 square without its top-left and bottom-right corners: the two 3-chains on the
  // diagonal overlap, but their union spans the missing corners.
  const Shape s = parse_shape(".###\n####\n####\n###.");
  ASSERT_TRUE(is_skew(s));
  const Filling f = Filling::from_ones(s, {{1, 1}, {2, 2}, {3, 3}, {4, 4}});
  EXPECT_EQ(longest_chain(f, Direction::NE, Rect{1, 3, 1, 3}), 3);
  EXPECT_EQ(longest_chain(f, Direction::NE, Rect{2, 4, 2, 4}), 3);
  EXPECT_EQ(longest_chain(f, Direction::NE), 3);
  EXPECT_EQ(oracle::longest_chain(f, Direction::NE), 3);
  EXPECT_FALSE(contains_pattern(f, Pattern::iota(4)));
}

TEST(PatternLibrary, Examples) {
  EXPECT_EQ(pattern_library("iota1"), pattern_library("delta1"));
  EXPECT_EQ(pattern_library("iota1"), parse_filling("1"));
  EXPECT_EQ(pattern_library("delta2"), parse_filling("10\n01"));
  EXPECT_EQ(pattern_library("iota2"), parse_filling("01\n10"));
  EXPECT_EQ(pattern_library("fd"), parse_filling(".10\n001\n10."));
  EXPECT_EQ(pattern_library("ds").shape(), ds());
  EXPECT_THROW(pattern_library("iota0"), ParseError);
  EXPECT_THROW(pattern_library("zeta2"), ParseError);
}
