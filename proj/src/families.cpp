#include "blockenc/families.hpp"

#include <algorithm>
#include <cmath>

#include "blockenc/errors.hpp"

namespace blockenc {

namespace {

void require_power_of_two(int n, int min_n, const char* family) {
  if (n < min_n || !is_power_of_two(n)) {
    throw Error(ErrorCode::BadN, std::string(family) + ": N must be a power of two >= " +
                                     std::to_string(min_n));
  }
}

void require_count(const std::vector<double>& values, std::size_t count, const char* family) {
  if (values.size() != count) {
    throw Error(ErrorCode::BadShape, std::string(family) + ": expected " + std::to_string(count) +
                                         " values, got " + std::to_string(values.size()));
  }
}

double max_abs(const std::vector<double>& values) {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) throw Error(ErrorCode::AllZeroValues, "all values are zero");
  return mx;
}

std::vector<int> shift_perm(int n, int shift) {
  std::vector<int> p(n);
  for (int j = 0; j < n; ++j) p[j] = ((j + shift) % n + n) % n;
  return p;
}

BlockEncoding custom_encoding(Matrix u, RegisterLayout layout, double alpha, double loading,
                              std::string scheme, bool hermitian) {
  BlockEncoding enc;
  enc.unitary = std::move(u);
  for (const auto& r : layout.registers()) {
    if (r.name != "block") enc.flags.push_back(r.name);
  }
  enc.layout = std::move(layout);
  enc.alpha = alpha;
  enc.tag = SchemeTag::custom;
  enc.hermitian = hermitian;
  enc.cost = make_cost(std::move(scheme), loading, alpha, enc.flag_qubits());
  return enc;
}

}  // namespace

StructureSpec checkerboard(int n, double a0, double a1, bool zero_corners) {
  require_power_of_two(n, 2, "checkerboard");
  const int half = n / 2;
  StructureSpec spec;
  spec.family = "checkerboard";
  spec.n = n;
  spec.values = {a0, a1};
  spec.m_extent = n * n / 2;
  const int last = spec.m_extent - 1;
  spec.row_map = [half](int, int m) { return m / half; };
  spec.col_map = [half](int d, int m) { return 2 * (m % half) + ((d + m / half) % 2); };
  spec.in_range = [zero_corners, last](int d, int m) {
    return !(zero_corners && d == 0 && (m == 0 || m == last));
  };
  spec.transpose = [half](int d, int m) {
    const int i = m / half;
    const int j = 2 * (m % half) + ((d + i) % 2);
    return Label{d, half * j + i / 2};
  };
  spec.prep_factor = PrepFactor{[n](int, int m) { return m / n; },
                                [half](int, int m) { return m % half; }};
  return spec;
}

StructureSpec toeplitz(int n, int k, std::vector<double> values, bool circulant) {
  require_power_of_two(n, 1, "toeplitz");
  const int d_count = static_cast<int>(values.size());
  if (d_count < 1 || d_count > n) throw Error(ErrorCode::BadShape, "toeplitz: need 1 <= D <= N");
  if (k < 0 || k >= d_count) throw Error(ErrorCode::BadShape, "toeplitz: need 0 <= k < D");
  StructureSpec spec;
  spec.family = circulant ? "circulant" : "toeplitz";
  spec.n = n;
  spec.values = std::move(values);
  spec.m_extent = n;
  if (circulant) {
    spec.row_map = [n, k](int d, int m) { return ((d - k + m) % n + n) % n; };
    spec.in_range = [](int, int) { return true; };
  } else {
    spec.row_map = [k](int d, int m) { return d - k + m; };
    spec.in_range = [n, k](int d, int m) { return d - k + m >= 0 && d - k + m < n; };
  }
  spec.col_map = [](int, int m) { return m; };
  spec.prep_factor = PrepFactor{[](int, int) { return 0; }, [](int, int) { return 0; }};
  return spec;
}

StructureSpec tridiagonal(int n, std::vector<double> values, TridiagonalOptions options) {
  require_power_of_two(n, options.simplified ? 4 : 2, "tridiagonal");
  require_count(values, static_cast<std::size_t>(2 * n - 1), "tridiagonal");
  StructureSpec spec;
  spec.family = "tridiagonal";
  spec.n = n;
  spec.values = std::move(values);
  if (options.simplified) spec.values.push_back(0.0);
  spec.m_extent = 2;
  spec.row_map = [n](int d, int m) { return (d / 2 + m) % n; };
  spec.col_map = [n](int d, int m) { return (d / 2 + (m == 0 ? d % 2 : 0)) % n; };
  spec.in_range = [](int d, int m) { return !(d % 2 == 0 && m == 1); };
  if (options.with_transpose) {
    spec.transpose = [](int d, int m) { return Label{d, d % 2 == 1 ? 1 - m : m}; };
  }
  if (options.fixed_slots) {
    const LabelMap slot = [](int d, int m) { return 2 * m + d % 2; };
    spec.col_slot = slot;
    spec.row_slot = slot;
  }
  return spec;
}

StructureSpec binary_tree(int n, double a0, double a1, double a2, bool fixed_slots,
                          bool compact) {
  require_power_of_two(n, 4, "binary-tree");
  StructureSpec spec;
  spec.family = "binary-tree";
  spec.n = n;
  const int half = n / 2;
  if (compact) {
    spec.values = {a0, a1, a2, a2};
    spec.m_extent = n;
    spec.in_range = [half](int d, int m) {
      switch (d) {
        case 0: return m == 0 || m >= half;
        case 1: return m >= 1 && m < half;
        default: return m >= 1;
      }
    };
    spec.row_map = [](int d, int m) { return d == 2 ? m / 2 : m; };
    spec.col_map = [](int d, int m) { return d == 3 ? m / 2 : m; };
    spec.transpose = [](int d, int m) { return Label{d < 2 ? d : 5 - d, m}; };
    if (fixed_slots) {
      spec.row_slot = [](int d, int m) { return d < 2 ? 0 : (d == 2 ? 2 + m % 2 : 1); };
      spec.col_slot = [](int d, int m) { return d < 2 ? 0 : (d == 2 ? 1 : 2 + m % 2); };
    }
    return spec;
  }
  spec.values = {a0, a1, a2};
  spec.m_extent = 2 * n;
  spec.in_range = [n, half](int d, int m) {
    switch (d) {
      case 0: return m == 0 || (m >= half && m < n);
      case 1: return m >= 1 && m < half;
      case 2: return m >= 1 && m < 2 * n && m != n;
      default: return false;
    }
  };
  spec.row_map = [n](int d, int m) { return d < 2 ? m : (m < n ? m / 2 : m - n); };
  spec.col_map = [n](int d, int m) { return d < 2 ? m : (m < n ? m : (m - n) / 2); };
  spec.transpose = [n](int d, int m) {
    return Label{d, d == 2 ? (m < n ? m + n : m - n) : m};
  };
  if (fixed_slots) {
    spec.row_slot = [n](int d, int m) { return d < 2 ? 0 : (m < n ? 2 + m % 2 : 1); };
    spec.col_slot = [n](int d, int m) { return d < 2 ? 0 : (m < n ? 1 : 2 + (m - n) % 2); };
  }
  return spec;
}

RealMatrix checkerboard_dense(int n, double a0, double a1, bool zero_corners) {
  require_power_of_two(n, 2, "checkerboard");
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i + j) % 2 == 0 ? a0 : a1;
  if (zero_corners) {
    a(0, 0) = 0.0;
    a(n - 1, n - 1) = 0.0;
  }
  return a;
}

RealMatrix toeplitz_dense(int n, int k, const std::vector<double>& values, bool circulant) {
  RealMatrix a = RealMatrix::Zero(n, n);
  const int d_count = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int d = i - j + k;
      if (circulant) d = ((d % n) + n) % n;
      if (d >= 0 && d < d_count) a(i, j) = values[d];
    }
  }
  return a;
}

RealMatrix tridiagonal_dense(int n, const std::vector<double>& values) {
  require_count(values, static_cast<std::size_t>(2 * n - 1), "tridiagonal");
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = values[2 * i];
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = values[2 * i + 1];
    a(i + 1, i) = values[2 * i + 1];
  }
  return a;
}

RealMatrix binary_tree_dense(int n, double a0, double a1, double a2) {
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int c = 0; c < n; ++c) a(c, c) = (c == 0 || c >= n / 2) ? a0 : a1;
  for (int c = 1; c < n; ++c) {
    a(c / 2, c) = a2;
    a(c, c / 2) = a2;
  }
  return a;
}

BlockEncoding checkerboard_base_circuit(int n, double a0, double a1) {
  require_power_of_two(n, 2, "checkerboard");
  const int half = n / 2;
  const std::vector<double> values{a0, a1};
  const double mx = max_abs(values);
  RegisterLayout layout({{"data", Role::data, 2},
                         {"g", Role::s, 2},
                         {"hlo", Role::s, half},
                         {"block", Role::block, n}});
  const auto gh = layout.qubits({"g", "hlo"});
  const auto g = layout.qubits("g");
  const auto hlo = layout.qubits("hlo");
  const auto blk = layout.qubits("block");
  const std::vector<int> block_hi(blk.begin(), blk.end() - 1);
  const int block0 = blk.back();

  std::vector<int> swap(half * half);
  for (int h = 0; h < half; ++h)
    for (int b = 0; b < half; ++b) swap[h * half + b] = b * half + h;
  std::vector<int> swap_targets = hlo;
  swap_targets.insert(swap_targets.end(), block_hi.begin(), block_hi.end());
  std::vector<int> rot_targets = layout.qubits("data");
  rot_targets.insert(rot_targets.end(), g.begin(), g.end());

  std::vector<int> range(n);
  for (int i = 0; i < n; ++i) range[i] = i;
  const Matrix h = diffusion(n, range, n);
  std::vector<PlacedBlock> blocks;
  blocks.push_back({h, gh, {}});
  if (half > 1) blocks.push_back({permutation_unitary(swap), swap_targets, {}});
  blocks.push_back({pauli_x(), {block0}, {{g[0], true}}});
  blocks.push_back({multiplexed_rotation(values, mx, 1.0, true, 2), rot_targets, {}});
  blocks.push_back({h.adjoint(), gh, {}});
  return custom_encoding(compose(layout, blocks), layout, n * mx, 2.0, "checkerboard_direct",
                         false);
}

BlockEncoding toeplitz_merged_circuit(int n, int k, const std::vector<double>& values,
                                      bool circulant) {
  const StructureSpec spec = toeplitz(n, k, values, circulant);
  const double mx = max_abs(spec.values);
  const int d_count = spec.num_values();
  const int d_reg = 1 << ceil_log2(d_count);
  RegisterLayout layout({{"data", Role::data, 2},
                         {"del", Role::del, circulant ? 1 : 2},
                         {"s", Role::s, d_reg},
                         {"block", Role::block, n}});
  std::vector<int> support(d_count);
  for (int d = 0; d < d_count; ++d) support[d] = d;
  const Matrix h = diffusion(d_count, support, d_reg);

  const int span = circulant ? n : 2 * n;
  std::vector<int> adder(static_cast<std::size_t>(span / n) * d_reg * n);
  for (int del = 0; del < span / n; ++del) {
    for (int s = 0; s < d_reg; ++s) {
      for (int j = 0; j < n; ++j) {
        const int v = del * n + j;
        const int w = ((v + s - k) % span + span) % span;
        adder[(del * d_reg + s) * n + j] = ((w / n) * d_reg + s) * n + w % n;
      }
    }
  }
  std::vector<int> rot_targets = layout.qubits({"data", "s"});
  std::vector<PlacedBlock> blocks;
  blocks.push_back({h, layout.qubits("s"), {}});
  blocks.push_back({multiplexed_rotation(spec.values, mx, 1.0, true, d_reg), rot_targets, {}});
  blocks.push_back({permutation_unitary(adder), layout.qubits({"del", "s", "block"}), {}});
  blocks.push_back({h.adjoint(), layout.qubits("s"), {}});
  return custom_encoding(compose(layout, blocks), layout, d_count * mx, d_count,
                         "toeplitz_merged", false);
}

namespace {

struct TridiagonalParts {
  RegisterLayout layout;
  std::vector<double> values;
  double mx = 0.0;
  Matrix h3;
  std::vector<int> s, s1, s0, block, data;
};

TridiagonalParts tridiagonal_parts(int n, const std::vector<double>& values) {
  require_power_of_two(n, 4, "tridiagonal");
  require_count(values, static_cast<std::size_t>(2 * n - 1), "tridiagonal");
  TridiagonalParts p;
  p.values = values;
  p.values.push_back(0.0);
  p.mx = max_abs(p.values);
  p.layout = RegisterLayout({{"data", Role::data, 2},
                             {"s1", Role::s, 2},
                             {"s0", Role::s, 2},
                             {"block", Role::block, n}});
  p.h3 = diffusion(3, {0, 1, 3}, 4);
  p.s = p.layout.qubits({"s1", "s0"});
  p.s1 = p.layout.qubits("s1");
  p.s0 = p.layout.qubits("s0");
  p.block = p.layout.qubits("block");
  p.data = p.layout.qubits("data");
  return p;
}

std::vector<int> rotation_targets(const TridiagonalParts& p) {
  std::vector<int> t = p.data;
  t.insert(t.end(), p.block.begin(), p.block.end());
  t.push_back(p.s0[0]);
  return t;
}

}  // namespace

BlockEncoding tridiagonal_nodel_circuit(int n, const std::vector<double>& values) {
  const TridiagonalParts p = tridiagonal_parts(n, values);
  const int d_dim = 2 * n;
  std::vector<PlacedBlock> blocks;
  blocks.push_back({p.h3, p.s, {}});
  blocks.push_back({permutation_unitary(shift_perm(n, -1)), p.block,
                    {{p.s1[0], false}, {p.s0[0], true}}});
  blocks.push_back(
      {multiplexed_rotation(p.values, p.mx, 1.0, true, d_dim), rotation_targets(p), {}});
  blocks.push_back({permutation_unitary(shift_perm(n, 1)), p.block, {{p.s1[0], true}}});
  blocks.push_back({p.h3.adjoint(), p.s, {}});
  return custom_encoding(compose(p.layout, blocks), p.layout, 3 * p.mx, d_dim,
                         "tridiagonal_nodel", false);
}

BlockEncoding tridiagonal_hermitian_circuit(int n, const std::vector<double>& values) {
  const TridiagonalParts p = tridiagonal_parts(n, values);
  const int d_dim = 2 * n;
  std::vector<PlacedBlock> blocks;
  blocks.push_back({p.h3, p.s, {}});
  blocks.push_back({permutation_unitary(shift_perm(n, -1)), p.block,
                    {{p.s1[0], false}, {p.s0[0], true}}});
  blocks.push_back({pauli_z(), p.data, {}});
  blocks.push_back(
      {multiplexed_rotation(p.values, p.mx, 1.0, true, d_dim), rotation_targets(p), {}});
  blocks.push_back({pauli_x(), p.s1, {{p.s0[0], true}}});
  blocks.push_back({permutation_unitary(shift_perm(n, 1)), p.block,
                    {{p.s1[0], false}, {p.s0[0], true}}});
  blocks.push_back({p.h3.adjoint(), p.s, {}});
  return custom_encoding(compose(p.layout, blocks), p.layout, 3 * p.mx, d_dim,
                         "tridiagonal_hermitian", true);
}

StructureSpec make_family(const FamilyArgs& args) {
  const auto& v = args.values;
  if (args.family == "checkerboard") {
    require_count(v, 2, "checkerboard");
    return checkerboard(args.n, v[0], v[1], args.zero_corners);
  }
  if (args.family == "toeplitz") return toeplitz(args.n, args.k, v, args.circulant);
  if (args.family == "circulant") return toeplitz(args.n, args.k, v, true);
  if (args.family == "tridiagonal") {
    TridiagonalOptions opts;
    opts.simplified = args.simplified;
    return tridiagonal(args.n, v, opts);
  }
  if (args.family == "binary-tree") {
    require_count(v, 3, "binary-tree");
    return binary_tree(args.n, v[0], v[1], v[2], true, args.compact);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family: " + args.family);
}

RealMatrix direct_dense(const FamilyArgs& args) {
  const auto& v = args.values;
  if (args.family == "checkerboard") {
    require_count(v, 2, "checkerboard");
    return checkerboard_dense(args.n, v[0], v[1], args.zero_corners);
  }
  if (args.family == "toeplitz") return toeplitz_dense(args.n, args.k, v, args.circulant);
  if (args.family == "circulant") return toeplitz_dense(args.n, args.k, v, true);
  if (args.family == "tridiagonal") return tridiagonal_dense(args.n, v);
  if (args.family == "binary-tree") {
    require_count(v, 3, "binary-tree");
    return binary_tree_dense(args.n, v[0], v[1], v[2]);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family: " + args.family);
}

FamilyArgs family_args_from_json(const nlohmann::json& j) {
  FamilyArgs a;
  try {
    a.family = j.at("family").get<std::string>();
    a.n = j.at("n").get<int>();
    if (j.contains("values")) a.values = j.at("values").get<std::vector<double>>();
    a.k = j.value("k", 0);
    a.circulant = j.value("circulant", false);
    a.zero_corners = j.value("zero_corners", false);
    a.simplified = j.value("simplified", true);
    a.compact = j.value("compact", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad family json: ") + e.what());
  }
  return a;
}

nlohmann::json to_json(const FamilyArgs& a) {
  return nlohmann::json{{"family", a.family},         {"n", a.n},
                        {"values", a.values},         {"k", a.k},
                        {"circulant", a.circulant},   {"zero_corners", a.zero_corners},
                        {"simplified", a.simplified}, {"compact", a.compact}};
}

}  // namespace blockenc
