#pragma once

#include <string>
#include <vector>

#include "blockenc/circuit.hpp"
#include "blockenc/structure.hpp"

namespace blockenc {

enum class LoadingMethod { qrom, select_swap, plain_multiplexed };

const char* to_string(LoadingMethod m);

struct ToffoliModel {
  long long qrom_toffoli = 0;
  int qrom_ancilla = 0;
  long long select_swap_toffoli = 0;
  int select_swap_ancilla = 0;
  long long rotations = 0;
  long long cnots = 0;
  LoadingMethod chosen = LoadingMethod::qrom;
};

ToffoliModel loading_model(long long D, int ancilla_budget);

struct CostRecord {
  std::string scheme;
  double data_loading = 0.0;
  std::string data_loading_label;  // non-empty when the entry is symbolic
  double subnormalisation = 0.0;
  int flag_qubits = 0;
  double figure_of_merit = 0.0;
  ToffoliModel toffoli;
  std::string note;
};

CostRecord make_cost(std::string scheme, double data_loading, double subnormalisation,
                     int flag_qubits, std::string note = {});

double mu_p(const RealMatrix& a, double p);

// Largest over columns of sum_i |A_ij|^q, and over rows of sum_j |A_ij|^q;
// zero entries do not contribute.
double max_column_power_sum(const RealMatrix& a, double q);
double max_row_power_sum(const RealMatrix& a, double q);

inline constexpr double kDefaultEpsilon = 1e-3;
double default_delta();  // 1 - 2^{-1/4}

struct AmpFactor {
  double gamma_c = 1.0;
  double gamma_r = 1.0;
  double amp = 0.0;
  bool clipped_c = false;
  bool clipped_r = false;
};

// gamma_c/gamma_r from column and row power sums; clipped at 1 from below.
AmpFactor amp_factor(const RealMatrix& a, int s_c, int s_r, double max_abs, double p,
                     double delta, double epsilon);
AmpFactor amp_factor(const RealMatrix& a, const StructureSpec& spec, double p, double delta,
                     double epsilon);

double amp_cost(double gamma_c, double gamma_r, double delta, double epsilon);

// sqrt(S_c S_r)/D * sqrt(sum |A_d|^{2p} * sum |A_d|^{2-2p})
double prep_alpha(const std::vector<double>& values, int s_c, int s_r, double p);

struct CostTable {
  std::vector<CostRecord> rows;
  std::vector<std::string> notes;
};

CostTable table_rows(const StructureSpec& spec, double p, double epsilon = kDefaultEpsilon,
                     double delta = -1.0);

}  // namespace blockenc
