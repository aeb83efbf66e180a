#include "blockenc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "blockenc/errors.hpp"
#include "blockenc/structure.hpp"

namespace blockenc {

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
  std::set<std::string> names;
  for (const auto& r : regs_) {
    if (!is_power_of_two(r.dim)) throw Error(ErrorCode::DimMismatch, "register " + r.name + " dim");
    if (!names.insert(r.name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate register " + r.name);
    }
  }
}

long long RegisterLayout::total_dim() const {
  long long d = 1;
  for (const auto& r : regs_) d *= r.dim;
  return d;
}

int RegisterLayout::total_qubits() const {
  int q = 0;
  for (const auto& r : regs_) q += ceil_log2(r.dim);
  return q;
}

bool RegisterLayout::has(const std::string& name) const {
  return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
}

const Register& RegisterLayout::get(const std::string& name) const {
  for (const auto& r : regs_) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "no register named " + name);
}

std::vector<int> RegisterLayout::qubits(const std::string& name) const {
  int first = 0;
  for (const auto& r : regs_) {
    const int q = ceil_log2(r.dim);
    if (r.name == name) {
      std::vector<int> out(q);
      for (int k = 0; k < q; ++k) out[k] = first + k;
      return out;
    }
    first += q;
  }
  throw Error(ErrorCode::InvalidArgument, "no register named " + name);
}

std::vector<int> RegisterLayout::qubits(std::initializer_list<std::string> names) const {
  std::vector<int> out;
  for (const auto& n : names) {
    auto q = qubits(n);
    out.insert(out.end(), q.begin(), q.end());
  }
  return out;
}

int RegisterLayout::qubit_count(const std::string& name) const { return ceil_log2(get(name).dim); }

RegisterLayout RegisterLayout::prepended(Register r) const {
  std::vector<Register> regs;
  regs.push_back(std::move(r));
  regs.insert(regs.end(), regs_.begin(), regs_.end());
  return RegisterLayout(std::move(regs));
}

void apply_block(Matrix& u, int total_qubits, const PlacedBlock& block) {
  const int t = static_cast<int>(block.targets.size());
  const Eigen::Index k = Eigen::Index{1} << t;
  if (block.op.rows() != k || block.op.cols() != k) {
    throw Error(ErrorCode::DimMismatch, "block dim " + std::to_string(block.op.rows()) +
                                            " vs " + std::to_string(t) + " target qubits");
  }
  std::set<int> seen;
  auto bit_of = [&](int q) {
    if (q < 0 || q >= total_qubits || !seen.insert(q).second) {
      throw Error(ErrorCode::DimMismatch, "bad or repeated qubit index");
    }
    return Eigen::Index{1} << (total_qubits - 1 - q);
  };
  std::vector<Eigen::Index> offset(k, 0);
  Eigen::Index target_mask = 0;
  for (int a = 0; a < t; ++a) {
    const Eigen::Index bit = bit_of(block.targets[a]);
    target_mask |= bit;
    for (Eigen::Index l = 0; l < k; ++l) {
      if ((l >> (t - 1 - a)) & 1) offset[l] |= bit;
    }
  }
  Eigen::Index ctrl_mask = 0, ctrl_value = 0;
  for (const auto& c : block.controls) {
    const Eigen::Index bit = bit_of(c.qubit);
    ctrl_mask |= bit;
    if (c.value) ctrl_value |= bit;
  }

  struct Entry {
    Eigen::Index col;
    Complex v;
  };
  std::vector<std::vector<Entry>> rows(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      if (block.op(a, b) != Complex(0.0, 0.0)) rows[a].push_back({b, block.op(a, b)});
    }
  }

  const Eigen::Index n = u.rows();
  std::vector<Eigen::Index> bases;
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    if ((idx & target_mask) == 0 && (idx & ctrl_mask) == ctrl_value) bases.push_back(idx);
  }
  std::vector<Complex> in(k), out(k);
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Complex* col = u.col(c).data();
    for (Eigen::Index base : bases) {
      for (Eigen::Index l = 0; l < k; ++l) in[l] = col[base + offset[l]];
      for (Eigen::Index a = 0; a < k; ++a) {
        Complex acc(0.0, 0.0);
        for (const auto& e : rows[a]) acc += e.v * in[e.col];
        out[a] = acc;
      }
      for (Eigen::Index l = 0; l < k; ++l) col[base + offset[l]] = out[l];
    }
  }
}

Matrix compose(const RegisterLayout& layout, const std::vector<PlacedBlock>& blocks) {
  const long long n = layout.total_dim();
  if (n > kMaxDenseDim) {
    throw Error(ErrorCode::TooLarge, "total dimension " + std::to_string(n) + " exceeds 2^13");
  }
  Matrix u = Matrix::Identity(n, n);
  for (const auto& b : blocks) apply_block(u, layout.total_qubits(), b);
  return u;
}

Matrix complete_unitary(const Eigen::VectorXd& first_column, Completion order) {
  const Eigen::Index dim = first_column.size();
  std::vector<Eigen::VectorXd> basis{first_column.normalized()};
  for (Eigen::Index step = 0; step < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++step) {
    const Eigen::Index e = order == Completion::forward ? step : dim - 1 - step;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    const double nv = v.norm();
    if (nv > 1e-8) basis.push_back(v / nv);
  }
  Matrix u(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) u.col(c) = basis[c].cast<Complex>();
  return u;
}

Matrix hadamard() {
  Matrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

Matrix pauli_z() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

Matrix swap_gate() { return permutation_unitary({0, 2, 1, 3}); }

Matrix rotation_x(double theta) {
  Matrix r(2, 2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  r << c, Complex(0, -s), Complex(0, -s), c;
  return r;
}

Matrix diffusion(int s_eff, const std::vector<int>& support, int dim, Completion order) {
  std::set<int> unique(support.begin(), support.end());
  if (s_eff <= 0 || static_cast<int>(unique.size()) != s_eff || s_eff > dim ||
      (!unique.empty() && (*unique.begin() < 0 || *unique.rbegin() >= dim))) {
    throw Error(ErrorCode::SupportTooLarge, "support of size " + std::to_string(support.size()) +
                                                " does not fit register of dim " +
                                                std::to_string(dim));
  }
  // A contiguous power-of-two support is a string of Hadamards on the low qubits.
  if (is_power_of_two(s_eff) && *unique.rbegin() == s_eff - 1) {
    Matrix h = Matrix::Ones(1, 1);
    for (int k = 1; k < s_eff; k <<= 1) {
      Matrix next(h.rows() * 2, h.cols() * 2);
      const Matrix hd = hadamard();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) next.block(a * h.rows(), b * h.cols(), h.rows(), h.cols()) = hd(a, b) * h;
      h = next;
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (int blk = 0; blk < dim / s_eff; ++blk) out.block(blk * s_eff, blk * s_eff, s_eff, s_eff) = h;
    return out;
  }
  Eigen::VectorXd first = Eigen::VectorXd::Zero(dim);
  for (int s : unique) first[s] = 1.0 / std::sqrt(static_cast<double>(s_eff));
  return complete_unitary(first, order);
}

namespace {

double powabs(double v, double e) { return std::pow(std::abs(v), e); }

}  // namespace

Matrix multiplexed_rotation(const std::vector<double>& values, double norm, double exponent,
                            bool signed_values, int d_dim) {
  if (norm <= 0.0) throw Error(ErrorCode::InvalidArgument, "norm must be positive");
  if (static_cast<int>(values.size()) > d_dim) throw Error(ErrorCode::DimMismatch, "d register too small");
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(d_dim);
  Matrix u = Matrix::Zero(dim, dim);
  const double scale = std::pow(norm, exponent);
  for (int d = 0; d < d_dim; ++d) {
    double v = 1.0;
    if (d < static_cast<int>(values.size())) {
      v = powabs(values[d], exponent) / scale;
      if (signed_values && values[d] < 0) v = -v;
    }
    if (std::abs(v) > 1.0 + 1e-12) {
      throw Error(ErrorCode::OutOfUnitRange, "value index " + std::to_string(d) + " exceeds norm");
    }
    v = std::clamp(v, -1.0, 1.0);
    const double sn = std::sqrt(std::max(0.0, 1.0 - v * v));
    u(d, d) = v;
    u(d_dim + d, d_dim + d) = v;
    u(d, d_dim + d) = Complex(0.0, -sn);
    u(d_dim + d, d) = Complex(0.0, -sn);
  }
  return u;
}

Matrix permutation_unitary(const std::vector<int>& perm) {
  const Eigen::Index dim = static_cast<Eigen::Index>(perm.size());
  std::vector<char> hit(dim, 0);
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const int y = perm[x];
    if (y < 0 || y >= dim || hit[y]) throw Error(ErrorCode::NotBijective, "table is not a permutation");
    hit[y] = 1;
    u(y, x) = 1.0;
  }
  return u;
}

Matrix range_controlled_not(const std::vector<std::uint8_t>& flags) {
  const int label = static_cast<int>(flags.size());
  std::vector<int> perm(2 * static_cast<size_t>(label));
  for (int f = 0; f < 2; ++f) {
    for (int x = 0; x < label; ++x) perm[f * label + x] = ((f ^ flags[x]) * label) + x;
  }
  return permutation_unitary(perm);
}

Matrix prep_isometry(const std::vector<double>& values, double p, bool signed_values, int dim,
                     Completion order) {
  if (static_cast<int>(values.size()) > dim) throw Error(ErrorCode::DimMismatch, "register too small");
  Eigen::VectorXd first = Eigen::VectorXd::Zero(dim);
  for (size_t d = 0; d < values.size(); ++d) {
    if (values[d] == 0.0) continue;
    first[d] = powabs(values[d], p);
    if (signed_values && values[d] < 0) first[d] = -first[d];
  }
  if (first.norm() == 0.0) throw Error(ErrorCode::AllZeroValues, "no nonzero value to prepare");
  return complete_unitary(first / first.norm(), order);
}

Matrix sign_oracle(const std::vector<double>& values, int dim) {
  Matrix u = Matrix::Identity(dim, dim);
  for (size_t d = 0; d < values.size(); ++d) {
    if (values[d] < 0) u(d, d) = -1.0;
  }
  return u;
}

double unitarity_defect(const Matrix& u) {
  Matrix g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& u) { return (u - u.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace blockenc
