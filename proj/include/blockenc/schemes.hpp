#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockenc/circuit.hpp"
#include "blockenc/estimator.hpp"
#include "blockenc/structure.hpp"

namespace blockenc {

enum class SchemeTag {
  base,
  hermitian_base,
  preamplified,
  hermitian_preamplified,
  prep_unprep,
  hermitianized,
  custom,
};

const char* to_string(SchemeTag tag);

struct BlockEncoding {
  Matrix unitary;
  RegisterLayout layout;
  std::vector<std::string> flags;  // every register except "block"
  double alpha = 1.0;
  CostRecord cost;
  SchemeTag tag = SchemeTag::custom;
  bool hermitian = false;
  double epsilon = 0.0;  // relative accuracy of amplified factors, 0 if exact
  double gamma_c = 1.0;
  double gamma_r = 1.0;

  [[nodiscard]] int flag_qubits() const;
  [[nodiscard]] int block_dim() const;
};

struct BaseOptions {
  Completion completion = Completion::forward;
  // Drop the delete qubit; allowed only when out-of-range labels never reach
  // populated slots with a nonzero loaded value.
  bool omit_delete = false;
};

BlockEncoding build_base(const StructureSpec& spec, const OracleTables& tables,
                         const PaddedShape& shape, const BaseOptions& options = {});

BlockEncoding build_hermitian_base(const StructureSpec& spec, const OracleTables& tables,
                                   const PaddedShape& shape, const BaseOptions& options = {});

BlockEncoding build_prep_unprep(const StructureSpec& spec, const OracleTables& tables,
                                const PaddedShape& shape, double p = 0.5,
                                Completion completion = Completion::forward);

struct AmplificationParams {
  std::optional<double> gamma_c;  // computed from the factor's singular values when empty
  std::optional<double> gamma_r;
  double delta = 1.0 - 0.8408964152537145;  // 1 - 2^{-1/4}
  double epsilon = 1e-3;
  double p = 0.5;
};

BlockEncoding build_preamplified(const StructureSpec& spec, const OracleTables& tables,
                                 const PaddedShape& shape, const AmplificationParams& params = {});

BlockEncoding build_hermitian_preamplified(const StructureSpec& spec, const OracleTables& tables,
                                           const PaddedShape& shape,
                                           const AmplificationParams& params = {});

BlockEncoding hermitianize(const BlockEncoding& enc);

// True when no out-of-range label can contribute to the block without the
// delete flag.
bool delete_flag_idle(const StructureSpec& spec, const OracleTables& tables,
                      const PaddedShape& shape);

// Flagged blocks of the split column factor U_c^dag (label x N) and row factor U_r.
struct FactorBlocks {
  RealMatrix column;  // label_dim x N
  RealMatrix row;     // N x label_dim
};

FactorBlocks preamplified_factor_blocks(const StructureSpec& spec, const OracleTables& tables,
                                        const PaddedShape& shape, double p);

}  // namespace blockenc
