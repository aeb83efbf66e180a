#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "blockenc/circuit.hpp"
#include "blockenc/schemes.hpp"
#include "blockenc/structure.hpp"

namespace blockenc {

struct Tolerances {
  static constexpr double exact_block = 1e-9;
  static constexpr double alpha_relative = 1e-9;
  static constexpr double unitarity = 1e-10;
  static constexpr double hermiticity = 1e-10;
  static constexpr double imaginary_leak = 1e-10;
  static constexpr double identity_sum = 1e-12;
};

RealMatrix dense_from_structure(const StructureSpec& spec);

// B[i][j] = <flags = 0, i| U |flags = 0, j>.
RealMatrix extract_block(const BlockEncoding& enc);

// Block of the base circuit obtained by summing over labels with the oracle
// tables and diffusion amplitudes, without building any unitary.
RealMatrix label_sum_block(const StructureSpec& spec, const OracleTables& tables,
                           const PaddedShape& shape);

double spectral_norm(const RealMatrix& a);

struct Report {
  double max_abs_error = 0.0;
  double measured_alpha = 0.0;
  double predicted_alpha = 0.0;
  double unitarity_defect = 0.0;
  double hermiticity_defect = 0.0;
  double block_tolerance = 0.0;
  double alpha_tolerance = 0.0;
  bool hermitian_required = false;
  bool passed = false;
  std::vector<std::string> failures;
};

Report check_encoding(const BlockEncoding& enc, const RealMatrix& target);
Report check_encoding(const BlockEncoding& enc, const StructureSpec& spec);

nlohmann::json to_json(const Report& r);

}  // namespace blockenc
