#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "blockenc/errors.hpp"
#include "blockenc/families.hpp"
#include "blockenc/structure.hpp"

using namespace blockenc;

namespace {

StructureSpec identity_spec(int n) {
  StructureSpec s;
  s.n = n;
  s.values.assign(n, 1.0);
  s.m_extent = 1;
  s.row_map = [](int d, int) { return d; };
  s.col_map = [](int d, int) { return d; };
  s.in_range = [](int, int) { return true; };
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

void expect_bijection(const std::vector<int>& p) {
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> iota(p.size());
  std::iota(iota.begin(), iota.end(), 0);
  EXPECT_EQ(sorted, iota);
}

}  // namespace

TEST(DeriveCounts, Checkerboard) {
  EXPECT_EQ(derive_counts(checkerboard(4, 1, 2)), (Counts{2, 8, 4, 4}));
}

TEST(DeriveCounts, Tridiagonal) {
  TridiagonalOptions full;
  full.simplified = false;
  EXPECT_EQ(derive_counts(tridiagonal(8, std::vector<double>(15, 1.0), full)), (Counts{15, 2, 3, 3}));
}

TEST(DeriveCounts, SingleEntry) {
  StructureSpec s = identity_spec(1);
  EXPECT_EQ(derive_counts(s), (Counts{1, 1, 1, 1}));
}

TEST(DeriveCounts, Errors) {
  StructureSpec collide = identity_spec(4);
  collide.row_map = [](int, int) { return 0; };
  collide.col_map = [](int, int) { return 0; };
  EXPECT_EQ(code_of([&] { derive_counts(collide); }), ErrorCode::LabelCollision);
  StructureSpec oob = identity_spec(4);
  oob.row_map = [](int d, int) { return d + 1; };
  EXPECT_EQ(code_of([&] { derive_counts(oob); }), ErrorCode::OutOfBounds);
  StructureSpec bad_n = identity_spec(4);
  bad_n.n = 6;
  EXPECT_EQ(code_of([&] { derive_counts(bad_n); }), ErrorCode::BadN);
}

TEST(PadShape, TridiagonalPadsDAndS) {
  const PaddedShape s = pad_shape(15, 2, 3, 3, 8);
  EXPECT_EQ(s.D_pad, 16);
  EXPECT_EQ(s.S, 4);
  EXPECT_EQ(s.M_pad, 2);
  EXPECT_EQ(s.D_pad * s.M_pad, 8 * s.S);
}

TEST(PadShape, BinaryTreePadsMAndS) {
  const PaddedShape s = pad_shape(3, 14, 4, 4, 8);
  EXPECT_EQ(s.M_pad, 16);
  EXPECT_EQ(s.S, 6);
  EXPECT_EQ(s.D_pad, 3);
}

TEST(PadShape, CheckerboardUnchanged) {
  const PaddedShape s = pad_shape(2, 8, 4, 4, 4);
  EXPECT_EQ(s.D_pad, 2);
  EXPECT_EQ(s.M_pad, 8);
  EXPECT_EQ(s.S, 4);
  EXPECT_EQ(s.label_dim(), 16);
}

TEST(PadShape, PropertyMDEqualsNS) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 << std::uniform_int_distribution<int>(0, 5)(rng);
    const int s = std::uniform_int_distribution<int>(1, n)(rng);
    const int d = std::uniform_int_distribution<int>(1, n * s)(rng);
    const int m = std::uniform_int_distribution<int>(1, (n * s + d - 1) / d)(rng);
    const PaddedShape p = pad_shape(d, m, s, s, n);
    EXPECT_EQ(static_cast<long long>(p.D_pad) * p.M_pad, static_cast<long long>(n) * p.S);
    EXPECT_GE(p.D_pad, d);
    EXPECT_GE(p.M_pad, m);
    EXPECT_GE(p.S, s);
    EXPECT_TRUE(is_power_of_two(p.s_register_dim));
    EXPECT_EQ(p.d_register_dim * p.m_register_dim, p.label_dim());
  }
}

TEST(CompleteOracles, ToeplitzColumnSlotIsD) {
  const Compiled c = compile(toeplitz(8, 1, {0.5, -1, 0.25, 0.75}));
  for (int d = 0; d < 4; ++d) {
    for (int m = 0; m < 8; ++m) {
      if (!c.spec.valid(d, m)) continue;
      const int x = c.shape.label_index(d, m);
      EXPECT_EQ(c.tables.col_perm[x], c.shape.slot_index(m, d));
    }
  }
  // O_r bijection: (d, m) -> (i = d - k + m, s_r) with s_r = d as well.
  for (int d = 0; d < 4; ++d)
    for (int m = 0; m < 8; ++m)
      if (c.spec.valid(d, m))
        EXPECT_EQ(c.tables.row_perm[c.shape.label_index(d, m)], c.shape.slot_index(d - 1 + m, d));
  expect_bijection(c.tables.col_perm);
  expect_bijection(c.tables.row_perm);
}

TEST(CompleteOracles, IdentitySpec) {
  const Compiled c = compile(identity_spec(8));
  for (int d = 0; d < 8; ++d) EXPECT_EQ(c.tables.col_perm[c.shape.label_index(d, 0)], d);
}

TEST(CompleteOracles, RoundTripOnEveryFamily) {
  std::vector<StructureSpec> specs{checkerboard(8, 1, 2, true), toeplitz(16, 2, {1, 2, 3, 4, 5}),
                                   tridiagonal(8, std::vector<double>(15, 1.0)),
                                   binary_tree(16, 1, 2, 3), binary_tree(8, 1, 2, 3, true, true)};
  for (const auto& spec : specs) {
    const Compiled c = compile(spec);
    expect_bijection(c.tables.col_perm);
    expect_bijection(c.tables.row_perm);
    std::vector<int> inv(c.tables.col_perm.size());
    for (size_t x = 0; x < inv.size(); ++x) inv[c.tables.col_perm[x]] = static_cast<int>(x);
    for (size_t x = 0; x < inv.size(); ++x) EXPECT_EQ(inv[c.tables.col_perm[x]], static_cast<int>(x));
    if (c.tables.transpose_perm) {
      const auto& t = *c.tables.transpose_perm;
      for (size_t x = 0; x < t.size(); ++x) EXPECT_EQ(t[t[x]], static_cast<int>(x));
    }
    // In-range labels land on the row/column prescribed by the maps.
    for (int d = 0; d < spec.num_values(); ++d)
      for (int m = 0; m < spec.m_extent; ++m)
        if (spec.valid(d, m)) {
          const int x = c.shape.label_index(d, m);
          EXPECT_EQ(c.tables.col_perm[x] % spec.n, spec.col_map(d, m));
          EXPECT_EQ(c.tables.row_perm[x] % spec.n, spec.row_map(d, m));
        }
  }
}

TEST(CompleteOracles, PrepFactorKeepsSlotsInsideDBlocks) {
  const Compiled c = compile(checkerboard(8, 1, 2));
  const int t_reg = c.shape.s_register_dim / c.shape.d_register_dim;
  for (int x = 0; x < c.shape.label_dim(); ++x) {
    const int d = x / c.shape.m_register_dim;
    EXPECT_EQ(c.tables.col_perm[x] / c.shape.block_dim / t_reg, d);
    EXPECT_EQ(c.tables.row_perm[x] / c.shape.block_dim / t_reg, d);
  }
}

TEST(CompleteOracles, RangeFlags) {
  const Compiled cb = compile(checkerboard(4, 1, 2, true));
  std::set<int> flagged;
  for (int d = 0; d < 2; ++d)
    for (int m = 0; m < 8; ++m)
      if (cb.tables.range_flags[cb.shape.label_index(d, m)]) flagged.insert(d * 100 + m);
  EXPECT_EQ(flagged, (std::set<int>{0, 7}));

  TridiagonalOptions full;
  full.simplified = false;
  const Compiled tri = compile(tridiagonal(8, std::vector<double>(15, 1.0), full));
  for (int d = 0; d < 16; ++d)
    for (int m = 0; m < 2; ++m) {
      const bool out = (d % 2 == 0 && m == 1) || d == 15;
      EXPECT_EQ(tri.tables.range_flags[tri.shape.label_index(d, m)] != 0, out) << d << "," << m;
    }
}

TEST(CompleteOracles, RejectsBrokenTranspose) {
  StructureSpec s = toeplitz(4, 0, {1, 2});
  s.transpose = [](int d, int m) { return Label{d, m}; };
  EXPECT_EQ(code_of([&] { compile(s); }), ErrorCode::BadShape);
}

TEST(Helpers, PowersOfTwo) {
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_TRUE(is_power_of_two(64));
  EXPECT_FALSE(is_power_of_two(0));
  EXPECT_FALSE(is_power_of_two(12));
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(3), 2);
  EXPECT_EQ(ceil_log2(8), 3);
}
