#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "blockenc/circuit.hpp"
#include "blockenc/schemes.hpp"
#include "blockenc/structure.hpp"

namespace blockenc {

StructureSpec checkerboard(int n, double a0, double a1, bool zero_corners = false);

StructureSpec toeplitz(int n, int k, std::vector<double> values, bool circulant = false);

struct TridiagonalOptions {
  bool with_transpose = true;
  // Loads an extra zero value for d = 2N-1 so that no label ever needs deleting.
  bool simplified = true;
  // Slots s = 2m + (d mod 2), i.e. valid labels use s in {0, 1, 3}.
  bool fixed_slots = true;
};

// values: diagonal entries at even d, off-diagonal entries at odd d (2N-1 total).
StructureSpec tridiagonal(int n, std::vector<double> values, TridiagonalOptions options = {});

// Extended binary tree on N nodes: node c > 0 has parent c / 2. Root and
// leaves carry a0, internal nodes a1, edges a2. The default labelling uses
// m < 2N for edges; compact stores the upper edges under d = 3 (value a2
// again) so that the label register, and hence the s register, stays minimal.
StructureSpec binary_tree(int n, double a0, double a1, double a2, bool fixed_slots = true,
                          bool compact = false);

// Oracle-free constructors writing entries straight from each definition.
RealMatrix checkerboard_dense(int n, double a0, double a1, bool zero_corners = false);
RealMatrix toeplitz_dense(int n, int k, const std::vector<double>& values, bool circulant = false);
RealMatrix tridiagonal_dense(int n, const std::vector<double>& values);
RealMatrix binary_tree_dense(int n, double a0, double a1, double a2);

// Hand-built circuits used to cross-check the generic pipeline.
BlockEncoding checkerboard_base_circuit(int n, double a0, double a1);
BlockEncoding toeplitz_merged_circuit(int n, int k, const std::vector<double>& values,
                                      bool circulant = false);
BlockEncoding tridiagonal_nodel_circuit(int n, const std::vector<double>& values);
BlockEncoding tridiagonal_hermitian_circuit(int n, const std::vector<double>& values);

struct FamilyArgs {
  std::string family;  // checkerboard | toeplitz | tridiagonal | binary-tree
  int n = 0;
  std::vector<double> values;
  int k = 0;
  bool circulant = false;
  bool zero_corners = false;
  bool simplified = true;
  bool compact = false;
};

StructureSpec make_family(const FamilyArgs& args);
RealMatrix direct_dense(const FamilyArgs& args);

FamilyArgs family_args_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilyArgs& args);

}  // namespace blockenc
