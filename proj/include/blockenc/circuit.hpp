#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace blockenc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Largest total dimension the dense backend accepts.
inline constexpr int kMaxDenseDim = 1 << 13;

enum class Role { data, data0, data1, del, s, block, herm_flag, amp };

struct Register {
  std::string name;
  Role role;
  int dim;  // power of two; 1 means no qubits
};

class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> regs);

  [[nodiscard]] const std::vector<Register>& registers() const { return regs_; }
  [[nodiscard]] long long total_dim() const;
  [[nodiscard]] int total_qubits() const;
  [[nodiscard]] bool has(const std::string& name) const;
  [[nodiscard]] const Register& get(const std::string& name) const;
  // Qubit indices of a register, most significant first. Qubit 0 is the most
  // significant qubit of the full index.
  [[nodiscard]] std::vector<int> qubits(const std::string& name) const;
  [[nodiscard]] std::vector<int> qubits(std::initializer_list<std::string> names) const;
  [[nodiscard]] int qubit_count(const std::string& name) const;
  [[nodiscard]] RegisterLayout prepended(Register r) const;

 private:
  std::vector<Register> regs_;
};

struct Control {
  int qubit;
  bool value = true;
};

struct PlacedBlock {
  Matrix op;
  std::vector<int> targets;  // op's local index reads these qubits msb first
  std::vector<Control> controls;
};

// Product of the embedded blocks, first block applied first.
Matrix compose(const RegisterLayout& layout, const std::vector<PlacedBlock>& blocks);

// Applies one embedded block in place: u <- E * u.
void apply_block(Matrix& u, int total_qubits, const PlacedBlock& block);

// Order in which standard basis vectors feed the Gram-Schmidt completion.
enum class Completion { forward, reverse };

Matrix complete_unitary(const Eigen::VectorXd& first_column, Completion order = Completion::forward);

Matrix diffusion(int s_eff, const std::vector<int>& support, int dim,
                 Completion order = Completion::forward);

// Block diagonal over d (data qubit most significant): R_X(2 arccos v_d).
Matrix multiplexed_rotation(const std::vector<double>& values, double norm, double exponent,
                            bool signed_values, int d_dim);

Matrix permutation_unitary(const std::vector<int>& perm);

// X on the del qubit (most significant) where flags[x] = 1.
Matrix range_controlled_not(const std::vector<std::uint8_t>& flags);

Matrix prep_isometry(const std::vector<double>& values, double p, bool signed_values, int dim,
                     Completion order = Completion::forward);

// Diagonal +-1 per sgn A_d, identity on padding.
Matrix sign_oracle(const std::vector<double>& values, int dim);

Matrix hadamard();
Matrix pauli_x();
Matrix pauli_z();
Matrix swap_gate();
Matrix rotation_x(double theta);

double unitarity_defect(const Matrix& u);
double hermiticity_defect(const Matrix& u);

}  // namespace blockenc
