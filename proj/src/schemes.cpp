#include "blockenc/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "blockenc/errors.hpp"
#include "blockenc/sva.hpp"
#include "blockenc/verify.hpp"

namespace blockenc {

const char* to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::base: return "base";
    case SchemeTag::hermitian_base: return "hermitian_base";
    case SchemeTag::preamplified: return "preamplified";
    case SchemeTag::hermitian_preamplified: return "hermitian_preamplified";
    case SchemeTag::prep_unprep: return "prep_unprep";
    case SchemeTag::hermitianized: return "hermitianized";
    case SchemeTag::custom: return "custom";
  }
  return "unknown";
}

int BlockEncoding::flag_qubits() const {
  int q = 0;
  for (const auto& f : flags) q += layout.qubit_count(f);
  return q;
}

int BlockEncoding::block_dim() const { return layout.get("block").dim; }

namespace {

void check_inputs(const StructureSpec& spec, const OracleTables& tables, const PaddedShape& shape) {
  if (shape.block_dim != spec.n || static_cast<int>(tables.col_perm.size()) != shape.label_dim()) {
    throw Error(ErrorCode::DimMismatch, "tables do not match the padded shape");
  }
  if (spec.max_abs_value() == 0.0) throw Error(ErrorCode::AllZeroValues, "all values are zero");
}

std::vector<std::string> flag_names(const RegisterLayout& layout) {
  std::vector<std::string> out;
  for (const auto& r : layout.registers()) {
    if (r.role != Role::block) out.push_back(r.name);
  }
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Leading qubits of the label register hold d.
std::vector<int> d_qubits(const RegisterLayout& layout, const PaddedShape& shape) {
  const auto label = layout.qubits({"s", "block"});
  return {label.begin(), label.begin() + ceil_log2(shape.d_register_dim)};
}

Matrix perm(const std::vector<int>& p) { return permutation_unitary(p); }
Matrix perm_inverse(const std::vector<int>& p) { return permutation_unitary(p).adjoint(); }

RealMatrix real_block(const Matrix& m, Eigen::Index rows, Eigen::Index cols) {
  const Matrix b = m.topLeftCorner(rows, cols);
  if (b.size() > 0 && b.imag().cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::ComplexLeak, "flagged block is not real");
  }
  return b.real();
}

double base_alpha(const StructureSpec& spec, const OracleTables& tables) {
  return std::sqrt(static_cast<double>(tables.col_support.size()) * tables.row_support.size()) *
         spec.max_abs_value();
}

BlockEncoding finish(Matrix u, RegisterLayout layout, double alpha, SchemeTag tag,
                     double data_loading, const std::string& scheme_name) {
  BlockEncoding enc;
  enc.unitary = std::move(u);
  enc.layout = std::move(layout);
  enc.flags = flag_names(enc.layout);
  enc.alpha = alpha;
  enc.tag = tag;
  enc.cost = make_cost(scheme_name, data_loading, alpha, enc.flag_qubits());
  return enc;
}

RegisterLayout base_layout(const PaddedShape& shape, bool with_del) {
  std::vector<Register> regs{{"data", Role::data, 2}};
  if (with_del) regs.push_back({"del", Role::del, 2});
  regs.push_back({"s", Role::s, shape.s_register_dim});
  regs.push_back({"block", Role::block, shape.block_dim});
  return RegisterLayout(std::move(regs));
}

RegisterLayout split_rest_layout(const PaddedShape& shape) {
  return RegisterLayout({{"data0", Role::data0, 2},
                         {"data1", Role::data1, 2},
                         {"del", Role::del, 2},
                         {"s", Role::s, shape.s_register_dim},
                         {"block", Role::block, shape.block_dim}});
}

RegisterLayout amplified_layout(const PaddedShape& shape) {
  return RegisterLayout({{"amp_c", Role::amp, 2},
                         {"amp_r", Role::amp, 2},
                         {"data0", Role::data0, 2},
                         {"data1", Role::data1, 2},
                         {"del", Role::del, 2},
                         {"s", Role::s, shape.s_register_dim},
                         {"block", Role::block, shape.block_dim}});
}

// Unitary on amp (x) rest whose amp = 0 block is g placed in the top-left corner.
Matrix dilate(const RealMatrix& g, Eigen::Index rest_dim) {
  Eigen::JacobiSVD<RealMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sigma = svd.singularValues();
  if (sigma.size() > 0 && sigma.maxCoeff() > 1.0 + 1e-9) {
    throw Error(ErrorCode::SingularValueOutOfRange, "factor is not a contraction");
  }
  sigma = sigma.cwiseMin(1.0);
  const Eigen::VectorXd shrink = (1.0 - (1.0 - sigma.array().square()).sqrt()).matrix();
  RealMatrix gt = RealMatrix::Zero(rest_dim, rest_dim);
  gt.topLeftCorner(g.rows(), g.cols()) =
      svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
  RealMatrix left = RealMatrix::Identity(rest_dim, rest_dim);
  left.topLeftCorner(g.rows(), g.rows()) -=
      svd.matrixU() * shrink.asDiagonal() * svd.matrixU().transpose();
  RealMatrix right = RealMatrix::Identity(rest_dim, rest_dim);
  right.topLeftCorner(g.cols(), g.cols()) -=
      svd.matrixV() * shrink.asDiagonal() * svd.matrixV().transpose();
  RealMatrix w(2 * rest_dim, 2 * rest_dim);
  w << gt, left, right, -gt.transpose();
  return w.cast<Complex>();
}

struct Amplified {
  RealMatrix block;
  double gamma = 1.0;
  bool fallback = false;
};

Amplified amplify_factor(const RealMatrix& k, std::optional<double> gamma_override,
                         const AmplificationParams& params) {
  Amplified a;
  const double top = k.size() ? Eigen::JacobiSVD<RealMatrix>(k).singularValues()(0) : 0.0;
  a.gamma = gamma_override ? *gamma_override : std::pow(2.0, -0.25) / top;
  if (!(a.gamma > 1.0)) {
    a.gamma = 1.0;
    a.fallback = true;
    a.block = k;
    return a;
  }
  const DegreeSearch search = min_degree_search(a.gamma, params.delta, params.epsilon);
  a.block = amplify_singular_values(k, search.poly);
  return a;
}

void check_params(const AmplificationParams& params) {
  if (!(params.delta > 0.0 && params.delta < 0.5) ||
      !(params.epsilon > 0.0 && params.epsilon < 0.5) || params.p < 0.0 || params.p > 1.0) {
    throw Error(ErrorCode::InfeasibleParameters, "amplification parameters out of range");
  }
}

}  // namespace

bool delete_flag_idle(const StructureSpec& spec, const OracleTables& tables,
                      const PaddedShape& shape) {
  const int n = shape.block_dim;
  auto contains = [](const std::vector<int>& v, int s) {
    return std::binary_search(v.begin(), v.end(), s);
  };
  for (int x = 0; x < shape.label_dim(); ++x) {
    if (!tables.range_flags[x]) continue;
    const int d = x / shape.m_register_dim;
    const double v = d < spec.num_values() ? spec.values[d] : 1.0;
    if (v != 0.0 && contains(tables.col_support, tables.col_perm[x] / n) &&
        contains(tables.row_support, tables.row_perm[x] / n)) {
      return false;
    }
  }
  return true;
}

BlockEncoding build_base(const StructureSpec& spec, const OracleTables& tables,
                         const PaddedShape& shape, const BaseOptions& options) {
  check_inputs(spec, tables, shape);
  if (options.omit_delete && !delete_flag_idle(spec, tables, shape)) {
    throw Error(ErrorCode::InvalidArgument, "out-of-range labels reach populated slots");
  }
  const bool with_del = !options.omit_delete;
  const RegisterLayout layout = base_layout(shape, with_del);
  const auto s = layout.qubits("s");
  const auto label = layout.qubits({"s", "block"});
  const int sc = static_cast<int>(tables.col_support.size());
  const int sr = static_cast<int>(tables.row_support.size());
  std::vector<PlacedBlock> blocks;
  blocks.push_back({diffusion(sc, tables.col_support, shape.s_register_dim, options.completion), s, {}});
  blocks.push_back({perm_inverse(tables.col_perm), label, {}});
  if (with_del) {
    blocks.push_back({range_controlled_not(tables.range_flags), concat(layout.qubits("del"), label), {}});
  }
  blocks.push_back({multiplexed_rotation(spec.values, spec.max_abs_value(), 1.0, true,
                                         shape.d_register_dim),
                    concat(layout.qubits("data"), d_qubits(layout, shape)), {}});
  blocks.push_back({perm(tables.row_perm), label, {}});
  blocks.push_back(
      {diffusion(sr, tables.row_support, shape.s_register_dim, options.completion).adjoint(), s, {}});
  return finish(compose(layout, blocks), layout, base_alpha(spec, tables), SchemeTag::base,
                spec.num_values(), "base");
}

BlockEncoding build_hermitian_base(const StructureSpec& spec, const OracleTables& tables,
                                   const PaddedShape& shape, const BaseOptions& options) {
  check_inputs(spec, tables, shape);
  if (!tables.transpose_perm) throw Error(ErrorCode::NoTransposeOracle, "spec has no transpose");
  if (tables.col_support.size() != tables.row_support.size()) {
    throw Error(ErrorCode::NotSymmetric, "S_c differs from S_r");
  }
  if (options.omit_delete && !delete_flag_idle(spec, tables, shape)) {
    throw Error(ErrorCode::InvalidArgument, "out-of-range labels reach populated slots");
  }
  const bool with_del = !options.omit_delete;
  const RegisterLayout layout = base_layout(shape, with_del);
  const auto s = layout.qubits("s");
  const auto label = layout.qubits({"s", "block"});
  const auto data = layout.qubits("data");
  const int sc = static_cast<int>(tables.col_support.size());
  const Matrix h = diffusion(sc, tables.col_support, shape.s_register_dim, options.completion);
  std::vector<PlacedBlock> blocks;
  blocks.push_back({h, s, {}});
  blocks.push_back({perm_inverse(tables.col_perm), label, {}});
  if (with_del) {
    blocks.push_back({range_controlled_not(tables.range_flags), concat(layout.qubits("del"), label), {}});
  }
  blocks.push_back({pauli_z(), data, {}});
  blocks.push_back({multiplexed_rotation(spec.values, spec.max_abs_value(), 1.0, true,
                                         shape.d_register_dim),
                    concat(data, d_qubits(layout, shape)), {}});
  blocks.push_back({perm(*tables.transpose_perm), label, {}});
  blocks.push_back({perm(tables.col_perm), label, {}});
  blocks.push_back({h.adjoint(), s, {}});
  BlockEncoding enc = finish(compose(layout, blocks), layout, sc * spec.max_abs_value(),
                             SchemeTag::hermitian_base, spec.num_values(), "hermitian_base");
  enc.hermitian = true;
  return enc;
}

BlockEncoding build_prep_unprep(const StructureSpec& spec, const OracleTables& tables,
                                const PaddedShape& shape, double p, Completion completion) {
  check_inputs(spec, tables, shape);
  if (!spec.prep_factor) throw Error(ErrorCode::PrepIncompatible, "no prep_factor certificate");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p outside (0,1]");
  const int D = spec.num_values();
  const int sc = static_cast<int>(tables.col_support.size());
  const int sr = static_cast<int>(tables.row_support.size());
  if (!is_power_of_two(D) || D > sc || D > sr || sc % D != 0 || sr % D != 0 ||
      !is_power_of_two(sc / D) || !is_power_of_two(sr / D) || shape.d_register_dim != D) {
    throw Error(ErrorCode::NotDivisible, "D, S_c/D and S_r/D must be powers of two with D <= S");
  }
  const int t_reg = shape.s_register_dim / shape.d_register_dim;
  if (t_reg < std::max(sc, sr) / D) throw Error(ErrorCode::NotDivisible, "t register too small");

  const RegisterLayout layout({{"del", Role::del, 2},
                               {"s", Role::s, shape.s_register_dim},
                               {"block", Role::block, shape.block_dim}});
  const auto s = layout.qubits("s");
  const auto label = layout.qubits({"s", "block"});
  const std::vector<int> dq(s.begin(), s.begin() + ceil_log2(D));
  const std::vector<int> tq(s.begin() + ceil_log2(D), s.end());
  auto range = [](int n) {
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) v[k] = k;
    return v;
  };
  const Matrix prep = prep_isometry(spec.values, p, true, D, completion);
  const Matrix unprep = p == 0.5
                            ? Matrix(prep.adjoint() * sign_oracle(spec.values, D))
                            : Matrix(prep_isometry(spec.values, 1.0 - p, false, D, completion).adjoint());
  std::vector<PlacedBlock> blocks;
  blocks.push_back({prep, dq, {}});
  blocks.push_back({diffusion(sc / D, range(sc / D), t_reg, completion), tq, {}});
  blocks.push_back({perm_inverse(tables.col_perm), label, {}});
  blocks.push_back({range_controlled_not(tables.range_flags), concat(layout.qubits("del"), label), {}});
  blocks.push_back({perm(tables.row_perm), label, {}});
  blocks.push_back({unprep, dq, {}});
  blocks.push_back({diffusion(sr / D, range(sr / D), t_reg, completion).adjoint(), tq, {}});
  return finish(compose(layout, blocks), layout, prep_alpha(spec.values, sc, sr, p),
                SchemeTag::prep_unprep, p == 0.5 ? D : 2.0 * D, "prep");
}

FactorBlocks preamplified_factor_blocks(const StructureSpec& spec, const OracleTables& tables,
                                        const PaddedShape& shape, double p) {
  check_inputs(spec, tables, shape);
  const RegisterLayout rest = split_rest_layout(shape);
  const auto s = rest.qubits("s");
  const auto label = rest.qubits({"s", "block"});
  const auto del_label = concat(rest.qubits("del"), label);
  const auto dq = d_qubits(rest, shape);
  const double mx = spec.max_abs_value();
  const int sc = static_cast<int>(tables.col_support.size());
  const int sr = static_cast<int>(tables.row_support.size());
  // The range CNOT sits inside both factors so neither flagged block carries
  // out-of-range labels.
  const Matrix uc_dag = compose(
      rest, {{diffusion(sc, tables.col_support, shape.s_register_dim), s, {}},
             {perm_inverse(tables.col_perm), label, {}},
             {range_controlled_not(tables.range_flags), del_label, {}},
             {multiplexed_rotation(spec.values, mx, p, true, shape.d_register_dim),
              concat(rest.qubits("data0"), dq), {}}});
  const Matrix ur = compose(
      rest, {{range_controlled_not(tables.range_flags), del_label, {}},
             {multiplexed_rotation(spec.values, mx, 1.0 - p, false, shape.d_register_dim),
              concat(rest.qubits("data1"), dq), {}},
             {perm(tables.row_perm), label, {}},
             {diffusion(sr, tables.row_support, shape.s_register_dim).adjoint(), s, {}}});
  FactorBlocks f;
  f.column = real_block(uc_dag, shape.label_dim(), shape.block_dim);
  f.row = real_block(ur, shape.block_dim, shape.label_dim());
  return f;
}

BlockEncoding build_preamplified(const StructureSpec& spec, const OracleTables& tables,
                                 const PaddedShape& shape, const AmplificationParams& params) {
  check_params(params);
  const FactorBlocks k = preamplified_factor_blocks(spec, tables, shape, params.p);
  const Amplified col = amplify_factor(k.column, params.gamma_c, params);
  const Amplified row = amplify_factor(k.row, params.gamma_r, params);

  const RegisterLayout layout = amplified_layout(shape);
  const auto rest = layout.qubits({"data0", "data1", "del", "s", "block"});
  const Eigen::Index rest_dim = 8LL * shape.label_dim();
  const Matrix u = compose(layout, {{dilate(col.block, rest_dim), concat(layout.qubits("amp_c"), rest), {}},
                                    {dilate(row.block, rest_dim), concat(layout.qubits("amp_r"), rest), {}}});
  const double alpha = base_alpha(spec, tables) / (col.gamma * row.gamma);
  const double loading = spec.num_values() * amp_cost(col.gamma, row.gamma, params.delta, params.epsilon);
  BlockEncoding enc = finish(u, layout, alpha, SchemeTag::preamplified, loading, "preamplified");
  enc.epsilon = params.epsilon;
  enc.gamma_c = col.gamma;
  enc.gamma_r = row.gamma;
  if (col.fallback || row.fallback) enc.cost.note = "gamma below one: factor left unamplified";
  return enc;
}

BlockEncoding build_hermitian_preamplified(const StructureSpec& spec, const OracleTables& tables,
                                           const PaddedShape& shape,
                                           const AmplificationParams& params) {
  check_params(params);
  check_inputs(spec, tables, shape);
  if (!tables.transpose_perm) throw Error(ErrorCode::NoTransposeOracle, "spec has no transpose");
  if (params.p != 0.5) throw Error(ErrorCode::InvalidArgument, "Hermitian preamplification needs p = 1/2");
  if (tables.col_support.size() != tables.row_support.size()) {
    throw Error(ErrorCode::NotSymmetric, "S_c differs from S_r");
  }
  const RegisterLayout rest_layout = split_rest_layout(shape);
  const auto rs = rest_layout.qubits("s");
  const auto rlabel = rest_layout.qubits({"s", "block"});
  const auto rdata1 = rest_layout.qubits("data1");
  const int sc = static_cast<int>(tables.col_support.size());
  const Matrix uc_dag = compose(
      rest_layout,
      {{diffusion(sc, tables.col_support, shape.s_register_dim), rs, {}},
       {perm_inverse(tables.col_perm), rlabel, {}},
       {range_controlled_not(tables.range_flags), concat(rest_layout.qubits("del"), rlabel), {}},
       {multiplexed_rotation(spec.values, spec.max_abs_value(), 0.5, false, shape.d_register_dim),
        concat(rdata1, d_qubits(rest_layout, shape)), {}},
       {pauli_z(), rdata1, {}}});
  const RealMatrix kc = real_block(uc_dag, shape.label_dim(), shape.block_dim);
  const Amplified col = amplify_factor(kc, params.gamma_c, params);

  const RegisterLayout layout = amplified_layout(shape);
  const auto rest = layout.qubits({"data0", "data1", "del", "s", "block"});
  const auto amp_c = layout.qubits("amp_c");
  const auto label = layout.qubits({"s", "block"});
  const auto dq = d_qubits(layout, shape);
  const Matrix w = dilate(col.block, 8LL * shape.label_dim());
  const Control idle{amp_c[0], false};
  const Control leaked{amp_c[0], true};
  // The leaked branch is parked on amp_r so it cannot return to the flagged block.
  const Matrix u = compose(
      layout, {{w, concat(amp_c, rest), {}},
               {sign_oracle(spec.values, shape.d_register_dim), dq, {idle}},
               {perm(*tables.transpose_perm), label, {idle}},
               {swap_gate(), layout.qubits({"data0", "data1"}), {idle}},
               {pauli_x(), layout.qubits("amp_r"), {leaked}},
               {w.adjoint(), concat(amp_c, rest), {}}});
  const double alpha = sc * spec.max_abs_value() / (col.gamma * col.gamma);
  const double loading =
      spec.num_values() * amp_cost(col.gamma, col.gamma, params.delta, params.epsilon) +
      spec.num_values();
  BlockEncoding enc =
      finish(u, layout, alpha, SchemeTag::hermitian_preamplified, loading, "hermitian_preamplified");
  enc.hermitian = true;
  enc.epsilon = params.epsilon;
  enc.gamma_c = enc.gamma_r = col.gamma;
  if (col.fallback) enc.cost.note = "gamma below one: factor left unamplified";
  return enc;
}

BlockEncoding hermitianize(const BlockEncoding& enc) {
  const RealMatrix b = extract_block(enc);
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > Tolerances::hermiticity) {
    throw Error(ErrorCode::NotSymmetric, "encoded matrix is not symmetric");
  }
  int nested = 0;
  for (const auto& r : enc.layout.registers()) nested += r.role == Role::herm_flag;
  const std::string name = "herm" + std::to_string(nested);
  const Eigen::Index n = enc.unitary.rows();
  if (2 * n > kMaxDenseDim) throw Error(ErrorCode::TooLarge, "hermitianized dimension exceeds 2^13");
  const Matrix& u = enc.unitary;
  const Matrix ud = u.adjoint();
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = 0.5 * (u + ud);
  h.topRightCorner(n, n) = 0.5 * (ud - u);
  h.bottomLeftCorner(n, n) = 0.5 * (u - ud);
  h.bottomRightCorner(n, n) = -0.5 * (u + ud);

  BlockEncoding out;
  out.unitary = std::move(h);
  out.layout = enc.layout.prepended({name, Role::herm_flag, 2});
  out.flags = enc.flags;
  out.flags.insert(out.flags.begin(), name);
  out.alpha = enc.alpha;
  out.tag = SchemeTag::hermitianized;
  out.hermitian = true;
  out.epsilon = enc.epsilon;
  out.gamma_c = enc.gamma_c;
  out.gamma_r = enc.gamma_r;
  out.cost = make_cost("hermitianized_" + enc.cost.scheme, 2 * enc.cost.data_loading, enc.alpha,
                       out.flag_qubits(), enc.cost.note);
  return out;
}

}  // namespace blockenc
