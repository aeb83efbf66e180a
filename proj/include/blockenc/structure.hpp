#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace blockenc {

struct Label {
  int d = 0;
  int m = 0;
  bool operator==(const Label&) const = default;
};

using LabelMap = std::function<int(int d, int m)>;
using LabelPredicate = std::function<bool(int d, int m)>;
using LabelInvolution = std::function<Label(int d, int m)>;

// t_c/t_r place an entry inside the slots of its own value index:
// s_c = d * (S/D) + t_c. Present only when the labelling commutes with PREP.
struct PrepFactor {
  LabelMap t_c;
  LabelMap t_r;
};

// Arithmetic description of an N x N matrix whose nonzeros are labelled by
// (d, m): d selects the value A_d, m enumerates its repetitions.
struct StructureSpec {
  int n = 0;
  std::vector<double> values;
  int m_extent = 0;  // labels use m in [0, m_extent)
  LabelMap row_map;
  LabelMap col_map;
  LabelPredicate in_range;
  std::optional<LabelInvolution> transpose;
  std::optional<PrepFactor> prep_factor;
  // Explicit slot conventions; enumeration rank is used when absent.
  std::optional<LabelMap> col_slot;
  std::optional<LabelMap> row_slot;
  std::string family = "custom";

  [[nodiscard]] int num_values() const { return static_cast<int>(values.size()); }
  [[nodiscard]] double max_abs_value() const;
  // in_range restricted to the declared label box.
  [[nodiscard]] bool valid(int d, int m) const;
};

struct Counts {
  int D = 0;
  int M = 0;
  int S_c = 0;
  int S_r = 0;
  bool operator==(const Counts&) const = default;
};

Counts derive_counts(const StructureSpec& spec);

struct PaddedShape {
  int D_pad = 0;
  int M_pad = 0;
  int S_c = 0;  // true column sparsity (diffusion support size)
  int S_r = 0;
  int S = 0;    // padded so that M_pad * D_pad = N * S
  int s_register_dim = 1;
  int block_dim = 1;
  int d_register_dim = 1;
  int m_register_dim = 1;

  // Label register: x = d * m_register_dim + m, equivalently y = s * N + j.
  [[nodiscard]] int label_dim() const { return s_register_dim * block_dim; }
  [[nodiscard]] int label_index(int d, int m) const { return d * m_register_dim + m; }
  [[nodiscard]] int slot_index(int j, int s) const { return s * block_dim + j; }
};

PaddedShape pad_shape(int D, int M, int S_c, int S_r, int N, int m_extent = 0);

struct OracleTables {
  std::vector<int> col_perm;  // label index -> slot index (j, s_c)
  std::vector<int> row_perm;  // label index -> slot index (i, s_r)
  std::vector<std::uint8_t> range_flags;
  std::optional<std::vector<int>> transpose_perm;
  std::vector<int> col_support;  // slot values hit by valid labels
  std::vector<int> row_support;
};

OracleTables complete_oracles(const StructureSpec& spec, const PaddedShape& shape);

// Spec plus everything derived from it.
struct Compiled {
  StructureSpec spec;
  Counts counts;
  PaddedShape shape;
  OracleTables tables;
};

Compiled compile(const StructureSpec& spec);

[[nodiscard]] bool is_power_of_two(long long x);
[[nodiscard]] int ceil_log2(long long x);

}  // namespace blockenc
