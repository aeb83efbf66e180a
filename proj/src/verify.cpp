#include "blockenc/verify.hpp"

#include <algorithm>
#include <cmath>

#include "blockenc/errors.hpp"

namespace blockenc {

RealMatrix dense_from_structure(const StructureSpec& spec) {
  derive_counts(spec);  // validates bounds and collisions
  RealMatrix a = RealMatrix::Zero(spec.n, spec.n);
  for (int d = 0; d < spec.num_values(); ++d) {
    for (int m = 0; m < spec.m_extent; ++m) {
      if (spec.in_range(d, m)) a(spec.row_map(d, m), spec.col_map(d, m)) = spec.values[d];
    }
  }
  return a;
}

RealMatrix extract_block(const BlockEncoding& enc) {
  long long stride = 1;
  bool after_block = false;
  int n = 0;
  for (const auto& r : enc.layout.registers()) {
    const bool flagged = std::find(enc.flags.begin(), enc.flags.end(), r.name) != enc.flags.end();
    if (r.name == "block") {
      after_block = true;
      n = r.dim;
    } else if (!flagged) {
      throw Error(ErrorCode::InvalidArgument, "register " + r.name + " is neither flag nor block");
    } else if (after_block) {
      stride *= r.dim;
    }
  }
  if (!after_block) throw Error(ErrorCode::InvalidArgument, "layout has no block register");
  if (enc.unitary.rows() != enc.layout.total_dim()) {
    throw Error(ErrorCode::DimMismatch, "unitary does not match layout");
  }
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = enc.unitary(i * stride, j * stride);
  if (b.imag().cwiseAbs().maxCoeff() > Tolerances::imaginary_leak) {
    throw Error(ErrorCode::ComplexLeak, "flagged block has an imaginary part");
  }
  return b.real();
}

RealMatrix label_sum_block(const StructureSpec& spec, const OracleTables& tables,
                           const PaddedShape& shape) {
  const int n = shape.block_dim;
  const Matrix hc = diffusion(static_cast<int>(tables.col_support.size()), tables.col_support,
                              shape.s_register_dim);
  const Matrix hr = diffusion(static_cast<int>(tables.row_support.size()), tables.row_support,
                              shape.s_register_dim);
  const double mx = spec.max_abs_value();
  RealMatrix b = RealMatrix::Zero(n, n);
  for (int x = 0; x < shape.label_dim(); ++x) {
    if (tables.range_flags[x]) continue;
    const int d = x / shape.m_register_dim;
    const int yc = tables.col_perm[x];
    const int yr = tables.row_perm[x];
    b(yr % n, yc % n) += spec.values[d] / mx * hc(yc / n, 0).real() * hr(yr / n, 0).real();
  }
  return b;
}

double spectral_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<RealMatrix>(a).singularValues()(0);
}

Report check_encoding(const BlockEncoding& enc, const RealMatrix& target) {
  Report r;
  const RealMatrix b = extract_block(enc);
  if (b.rows() != target.rows() || b.cols() != target.cols()) {
    throw Error(ErrorCode::DimMismatch, "target does not match the encoded block");
  }
  r.predicted_alpha = enc.alpha;
  const double bb = b.squaredNorm();
  r.measured_alpha = bb > 0 ? (b.array() * target.array()).sum() / bb : 0.0;
  r.max_abs_error = (enc.alpha * b - target).cwiseAbs().maxCoeff();
  r.unitarity_defect = unitarity_defect(enc.unitary);
  r.hermiticity_defect = hermiticity_defect(enc.unitary);
  r.hermitian_required = enc.hermitian;
  const double eps = enc.epsilon;
  r.block_tolerance = eps > 0 ? (2 * eps + eps * eps) * enc.alpha : Tolerances::exact_block;
  r.alpha_tolerance = eps > 0 ? 2 * eps + eps * eps : Tolerances::alpha_relative;

  if (r.max_abs_error > r.block_tolerance) r.failures.push_back("block error above tolerance");
  if (std::abs(r.measured_alpha / r.predicted_alpha - 1.0) > r.alpha_tolerance) {
    r.failures.push_back("measured alpha differs from prediction");
  }
  if (r.unitarity_defect > Tolerances::unitarity) r.failures.push_back("unitary check failed");
  if (r.hermitian_required && r.hermiticity_defect > Tolerances::hermiticity) {
    r.failures.push_back("Hermiticity check failed");
  }
  r.passed = r.failures.empty();
  return r;
}

Report check_encoding(const BlockEncoding& enc, const StructureSpec& spec) {
  return check_encoding(enc, dense_from_structure(spec));
}

nlohmann::json to_json(const Report& r) {
  return nlohmann::json{{"max_abs_error", r.max_abs_error},
                        {"measured_alpha", r.measured_alpha},
                        {"predicted_alpha", r.predicted_alpha},
                        {"unitarity_defect", r.unitarity_defect},
                        {"hermiticity_defect", r.hermiticity_defect},
                        {"hermitian_required", r.hermitian_required},
                        {"block_tolerance", r.block_tolerance},
                        {"alpha_tolerance", r.alpha_tolerance},
                        {"passed", r.passed},
                        {"failures", r.failures}};
}

}  // namespace blockenc
