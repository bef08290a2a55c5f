#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace skewfill;

namespace {

Shape staircase() { return Shape::from_cells({{1, 1}, {2, 1}, {2, 2}, {3, 2}}); }

CellList sorted(CellList c) {
  std::sort(c.begin(), c.end(), LabelLess{});
  return c;
}

}  // namespace

TEST(DsFree, Examples) {
  for (auto m : {DsFreeMethod::pattern, DsFreeMethod::rectangle}) {
    EXPECT_FALSE(is_ds_free(dented_shape(), m));
    EXPECT_TRUE(is_ds_free(staircase(), m));
    for (const auto& f : enum_nw_ferrers(6)) EXPECT_TRUE(is_ds_free(f, m));
  }
  EXPECT_THROW(is_ds_free(Shape::from_cells({{1, 2}, {2, 1}}), DsFreeMethod::pattern), DomainError);
}

TEST(DsFree, RectangleWitnessAtCentre) {
  const Shape& ds = dented_shape();
  const Cell c{2, 2};
  EXPECT_FALSE(is_rectangle(quadrant(ds, c, true, false)));
  EXPECT_FALSE(is_rectangle(quadrant(ds, c, false, true)));
}

TEST(DsFree, MethodsAgreeAndMatchOracle) {
  for (int n = 1; n <= 9; ++n)
    for (const auto& s : enum_skew_shapes(n)) {
      const bool a = is_ds_free(s, DsFreeMethod::pattern);
      ASSERT_EQ(a, is_ds_free(s, DsFreeMethod::rectangle)) << format_row_intervals(s);
      if (n <= 8) {
        ASSERT_EQ(a, !oracle::contains_shape(s, dented_shape())) << format_row_intervals(s);
      }
    }
}

TEST(FerrersDecompose, Staircase) {
  const auto d = ferrers_decompose(staircase());
  ASSERT_EQ(d.n(), 2);
  EXPECT_EQ(d.F(1).cells, (CellList{{1, 1}}));
  EXPECT_EQ(d.G(1).cells, (CellList{{2, 1}}));
  EXPECT_EQ(sorted(d.F(2).cells), (CellList{{2, 2}, {3, 2}}));
  EXPECT_TRUE(d.G(2).cells.empty());
  EXPECT_TRUE(validate_decomposition(staircase(), d));
}

TEST(FerrersDecompose, TrivialCases) {
  for (const auto& f : enum_nw_ferrers(5)) {
    const auto d = ferrers_decompose(f);
    ASSERT_EQ(d.n(), 1);
    EXPECT_EQ(sorted(d.F(1).cells), f.cells());
    EXPECT_TRUE(d.G(1).cells.empty());
  }
  const auto row = ferrers_decompose(Shape::rectangle(4, 1));
  ASSERT_EQ(row.n(), 1);
  EXPECT_EQ(row.F(1).cells.size(), 4U);
}

TEST(FerrersDecompose, Errors) {
  EXPECT_THROW(ferrers_decompose(dented_shape()), DomainError);
  EXPECT_THROW(ferrers_decompose(Shape::from_cells({{1, 1}, {2, 2}})), DomainError);
  EXPECT_THROW(ferrers_decompose(Shape::from_cells({{1, 2}, {2, 1}})), DomainError);
  EXPECT_THROW(ferrers_decompose(Shape{}), DomainError);
}

TEST(ValidateDecomposition, RejectsBrokenInputs) {
  const Shape s = staircase();
  const auto d = ferrers_decompose(s);
  auto swapped = d;
  std::swap(swapped.blocks[1], swapped.blocks[2]);
  EXPECT_FALSE(validate_decomposition(s, swapped));
  auto missing = d;
  missing.blocks[2].cells.pop_back();
  EXPECT_FALSE(validate_decomposition(s, missing));
  auto extra = d;
  extra.blocks[0].cells.push_back({2, 1});
  EXPECT_FALSE(validate_decomposition(s, extra));
}

TEST(FerrersDecompose, ExistsExactlyForDsFreeShapes) {
  for (int n = 1; n <= 9; ++n)
    for (const auto& s : enum_skew_shapes(n, {true, false})) {
      const bool free = is_ds_free(s, DsFreeMethod::pattern);
      const auto d = run_ferrers_procedure(s);
      const bool ok = d && validate_decomposition(s, *d);
      ASSERT_EQ(free, ok) << format_row_intervals(s);
      if (n <= 8) {
        ASSERT_EQ(free, oracle::decomposable(s)) << format_row_intervals(s);
      }
      if (!ok) continue;
      for (const auto& b : d->blocks) {
        if (b.cells.empty()) continue;
        const bool want = b.kind == BlockKind::nw ? oracle::nw_ferrers(b.cells) : oracle::se_ferrers(b.cells);
        ASSERT_TRUE(want) << format_row_intervals(s);
      }
    }
}

TEST(SumPermutations, Examples) {
  const auto sb = special_blocks(staircase());
  EXPECT_EQ(sb.row_blocks, (std::vector<std::vector<int>>{{1}}));
  EXPECT_EQ(sb.col_blocks, (std::vector<std::vector<int>>{{2}}));
  const auto p = sum_permutations(staircase());
  EXPECT_EQ(p.rho, (std::vector<int>{1, 2}));
  EXPECT_EQ(p.sigma, (std::vector<int>{1, 2, 3}));

  for (const auto& f : enum_nw_ferrers(5)) {
    const auto q = sum_permutations(f);
    for (int r = 1; r <= f.height(); ++r) EXPECT_EQ(q.rho[r - 1], r);
    for (int c = 1; c <= f.width(); ++c) EXPECT_EQ(q.sigma[c - 1], c);
  }

  const Shape two_col = Shape::from_cells({{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}});
  const auto d = ferrers_decompose(two_col);
  EXPECT_EQ(sorted(d.F(1).cells), (CellList{{1, 1}, {1, 2}}));
  EXPECT_EQ(sorted(d.G(1).cells), (CellList{{2, 1}, {2, 2}, {2, 3}}));
  const auto tp = sum_permutations(two_col);
  EXPECT_EQ(tp.rho, (std::vector<int>{2, 1, 3}));
  EXPECT_EQ(tp.sigma, (std::vector<int>{1, 2}));
}

TEST(SumPermutations, Involutions) {
  for (int n = 1; n <= 9; ++n)
    for (const auto& s : enum_skew_shapes(n, {false, true})) {
      const auto p = sum_permutations(s);
      for (std::size_t t = 0; t < p.rho.size(); ++t) ASSERT_EQ(p.rho[p.rho[t] - 1], static_cast<int>(t) + 1);
      for (std::size_t t = 0; t < p.sigma.size(); ++t) ASSERT_EQ(p.sigma[p.sigma[t] - 1], static_cast<int>(t) + 1);
      const auto sb = special_blocks(s);
      for (const auto& blk : sb.row_blocks)
        for (std::size_t t = 1; t < blk.size(); ++t) ASSERT_EQ(blk[t], blk[t - 1] + 1);
    }
}

TEST(DecomposeComponents, DisconnectedShape) {
  const Shape s = Shape::from_cells({{1, 1}, {2, 2}, {3, 2}});
  const auto comps = decompose_components(s);
  ASSERT_EQ(comps.size(), 2U);
  EXPECT_EQ(comps[1].d.F(1).cells, (CellList{{2, 2}, {3, 2}}));
  const std::string text = render_decomposition(s, comps);
  EXPECT_NE(text.find("2.F1"), std::string::npos);
}

TEST(RenderDecomposition, Staircase) {
  const Shape s = staircase();
  EXPECT_EQ(render_decomposition(s, decompose_components(s)), ".  F2 F2\nF1 G1 .\nv 1\nh 1\n");
}
