#include "blockenc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "blockenc/errors.hpp"

namespace blockenc {

bool is_power_of_two(long long x) { return x > 0 && (x & (x - 1)) == 0; }

int ceil_log2(long long x) {
  int k = 0;
  while ((1LL << k) < x) ++k;
  return k;
}

double StructureSpec::max_abs_value() const {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, std::abs(v));
  return mx;
}

bool StructureSpec::valid(int d, int m) const {
  return d >= 0 && d < num_values() && m >= 0 && m < m_extent && in_range(d, m);
}

namespace {

void check_spec_shape(const StructureSpec& spec) {
  if (!is_power_of_two(spec.n)) throw Error(ErrorCode::BadN, "N must be a power of two");
  if (spec.values.empty()) throw Error(ErrorCode::BadShape, "empty value list");
  if (spec.m_extent <= 0) throw Error(ErrorCode::BadShape, "m_extent must be positive");
  if (!spec.row_map || !spec.col_map || !spec.in_range) {
    throw Error(ErrorCode::BadShape, "row_map, col_map and in_range are required");
  }
}

}  // namespace

Counts derive_counts(const StructureSpec& spec) {
  check_spec_shape(spec);
  const int n = spec.n;
  std::vector<char> hit(static_cast<size_t>(n) * n, 0);
  std::vector<int> per_col(n, 0), per_row(n, 0);
  Counts c;
  c.D = spec.num_values();
  for (int d = 0; d < c.D; ++d) {
    int mult = 0;
    for (int m = 0; m < spec.m_extent; ++m) {
      if (!spec.in_range(d, m)) continue;
      const int i = spec.row_map(d, m);
      const int j = spec.col_map(d, m);
      if (i < 0 || i >= n || j < 0 || j >= n) {
        throw Error(ErrorCode::OutOfBounds, "label (" + std::to_string(d) + "," +
                                                std::to_string(m) + ") leaves [0,N)");
      }
      char& h = hit[static_cast<size_t>(i) * n + j];
      if (h) {
        throw Error(ErrorCode::LabelCollision, "entry (" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") labelled twice");
      }
      h = 1;
      ++mult;
      ++per_col[j];
      ++per_row[i];
    }
    c.M = std::max(c.M, mult);
  }
  c.S_c = *std::max_element(per_col.begin(), per_col.end());
  c.S_r = *std::max_element(per_row.begin(), per_row.end());
  return c;
}

PaddedShape pad_shape(int D, int M, int S_c, int S_r, int N, int m_extent) {
  if (D <= 0 || M <= 0 || N <= 0) throw Error(ErrorCode::BadShape, "counts must be positive");
  PaddedShape shape;
  shape.S_c = S_c;
  shape.S_r = S_r;
  shape.block_dim = N;
  const int s0 = std::max({S_c, S_r, 1});
  bool found = false;
  for (int s = s0; !found; ++s) {
    const long long total = static_cast<long long>(N) * s;
    for (long long dp = D; dp <= total; ++dp) {
      if (total % dp == 0 && total / dp >= M) {
        shape.S = s;
        shape.D_pad = static_cast<int>(dp);
        shape.M_pad = static_cast<int>(total / dp);
        found = true;
        break;
      }
    }
  }
  const int m_need = std::max(shape.M_pad, m_extent);
  const long long d_reg = 1LL << ceil_log2(shape.D_pad);
  const long long m_reg = 1LL << ceil_log2(m_need);
  const long long s_reg = 1LL << ceil_log2(shape.S);
  const long long label = std::max(static_cast<long long>(N) * s_reg, d_reg * m_reg);
  shape.s_register_dim = static_cast<int>(label / N);
  shape.d_register_dim = static_cast<int>(d_reg);
  shape.m_register_dim = static_cast<int>(label / d_reg);
  return shape;
}

namespace {

// Assigns slots for one side (columns or rows) and completes the bijection.
std::vector<int> complete_side(const StructureSpec& spec, const PaddedShape& shape,
                               const LabelMap& index_map, const std::optional<LabelMap>& slot,
                               const LabelMap* prep_t, std::vector<int>& support) {
  const int label = shape.label_dim();
  const int n = shape.block_dim;
  std::vector<int> perm(label, -1);
  std::vector<char> used(label, 0);
  std::vector<int> rank(n, 0);
  std::set<int> slots;
  int t_reg = 0;
  if (prep_t) {
    if (shape.s_register_dim % shape.d_register_dim != 0) {
      throw Error(ErrorCode::PrepIncompatible, "s register does not split into d and t parts");
    }
    t_reg = shape.s_register_dim / shape.d_register_dim;
  }
  for (int d = 0; d < spec.num_values(); ++d) {
    for (int m = 0; m < spec.m_extent; ++m) {
      if (!spec.valid(d, m)) continue;
      const int j = index_map(d, m);
      int s;
      if (prep_t) {
        const int t = (*prep_t)(d, m);
        if (t < 0 || t >= t_reg) {
          throw Error(ErrorCode::PrepIncompatible, "prep factor outside [0, S/D)");
        }
        s = d * t_reg + t;
      } else if (slot) {
        s = (*slot)(d, m);
      } else {
        s = rank[j]++;
      }
      if (s < 0 || s >= shape.s_register_dim) {
        throw Error(ErrorCode::BadShape, "slot outside the s register");
      }
      const int y = shape.slot_index(j, s);
      if (used[y]) {
        throw Error(prep_t ? ErrorCode::PrepIncompatible : ErrorCode::LabelCollision,
                    "two labels share slot (" + std::to_string(j) + "," + std::to_string(s) + ")");
      }
      used[y] = 1;
      perm[shape.label_index(d, m)] = y;
      slots.insert(s);
    }
  }
  support.assign(slots.begin(), slots.end());

  // Group index: the d block when PREP needs d to pass through, else one group.
  auto in_group = [&](int x) { return prep_t ? x / shape.m_register_dim : 0; };
  auto out_group = [&](int y) { return prep_t ? (y / n) / t_reg : 0; };
  std::map<int, std::vector<int>> free_in, free_out;
  for (int x = 0; x < label; ++x) {
    if (perm[x] < 0) free_in[in_group(x)].push_back(x);
  }
  for (int y = 0; y < label; ++y) {
    if (!used[y]) free_out[out_group(y)].push_back(y);
  }
  for (auto& [g, xs] : free_in) {
    auto& ys = free_out[g];
    if (ys.size() != xs.size()) {
      throw Error(ErrorCode::PrepIncompatible, "d block cannot be completed to a bijection");
    }
    for (size_t k = 0; k < xs.size(); ++k) perm[xs[k]] = ys[k];
  }
  return perm;
}

}  // namespace

OracleTables complete_oracles(const StructureSpec& spec, const PaddedShape& shape) {
  check_spec_shape(spec);
  if (shape.block_dim != spec.n) throw Error(ErrorCode::DimMismatch, "shape does not match N");
  if (spec.num_values() > shape.d_register_dim ||
      spec.m_extent > shape.m_register_dim) {
    throw Error(ErrorCode::BadShape, "label box exceeds the padded registers");
  }
  OracleTables t;
  const LabelMap* tc = spec.prep_factor ? &spec.prep_factor->t_c : nullptr;
  const LabelMap* tr = spec.prep_factor ? &spec.prep_factor->t_r : nullptr;
  t.col_perm = complete_side(spec, shape, spec.col_map, spec.col_slot, tc, t.col_support);
  t.row_perm = complete_side(spec, shape, spec.row_map, spec.row_slot, tr, t.row_support);

  const int label = shape.label_dim();
  t.range_flags.assign(label, 0);
  for (int x = 0; x < label; ++x) {
    const int d = x / shape.m_register_dim;
    const int m = x % shape.m_register_dim;
    t.range_flags[x] = spec.valid(d, m) ? 0 : 1;
  }

  if (spec.transpose) {
    std::vector<int> tp(label);
    for (int x = 0; x < label; ++x) tp[x] = x;
    for (int x = 0; x < label; ++x) {
      if (t.range_flags[x]) continue;
      const int d = x / shape.m_register_dim;
      const int m = x % shape.m_register_dim;
      const Label img = (*spec.transpose)(d, m);
      const Label back = (*spec.transpose)(img.d, img.m);
      if (img.d >= spec.num_values() || spec.values[img.d] != spec.values[d] ||
          !spec.valid(img.d, img.m) || !(back == Label{d, m}) ||
          spec.row_map(img.d, img.m) != spec.col_map(d, m) ||
          spec.col_map(img.d, img.m) != spec.row_map(d, m)) {
        throw Error(ErrorCode::BadShape, "transpose is not a value-preserving involution");
      }
      tp[x] = shape.label_index(img.d, img.m);
    }
    t.transpose_perm = std::move(tp);
  }
  return t;
}

Compiled compile(const StructureSpec& spec) {
  Compiled c;
  c.spec = spec;
  c.counts = derive_counts(spec);
  c.shape = pad_shape(c.counts.D, c.counts.M, c.counts.S_c, c.counts.S_r, spec.n, spec.m_extent);
  c.tables = complete_oracles(spec, c.shape);
  return c;
}

}  // namespace blockenc
