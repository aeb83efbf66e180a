#include "blockenc/estimator.hpp"

#include <climits>
#include <cmath>

#include "blockenc/errors.hpp"
#include "blockenc/verify.hpp"

namespace blockenc {

const char* to_string(LoadingMethod m) {
  switch (m) {
    case LoadingMethod::qrom: return "qrom";
    case LoadingMethod::select_swap: return "select_swap";
    case LoadingMethod::plain_multiplexed: return "plain_multiplexed";
  }
  return "unknown";
}

ToffoliModel loading_model(long long D, int ancilla_budget) {
  if (D < 1) throw Error(ErrorCode::InvalidArgument, "D must be at least 1");
  ToffoliModel t;
  t.qrom_toffoli = std::max(D - 2, 0LL);
  t.qrom_ancilla = ceil_log2(D);
  const auto root = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(D))));
  t.select_swap_toffoli = root;
  t.select_swap_ancilla = static_cast<int>(root);
  t.rotations = D;
  t.cnots = D;
  if (ancilla_budget >= t.qrom_ancilla + t.select_swap_ancilla) {
    t.chosen = LoadingMethod::select_swap;
  } else if (ancilla_budget >= t.qrom_ancilla) {
    t.chosen = LoadingMethod::qrom;
  } else {
    t.chosen = LoadingMethod::plain_multiplexed;
  }
  return t;
}

CostRecord make_cost(std::string scheme, double data_loading, double subnormalisation,
                     int flag_qubits, std::string note) {
  CostRecord r;
  r.scheme = std::move(scheme);
  r.data_loading = data_loading;
  r.subnormalisation = subnormalisation;
  r.flag_qubits = flag_qubits;
  r.figure_of_merit = data_loading * subnormalisation;
  r.note = std::move(note);
  return r;
}

double max_column_power_sum(const RealMatrix& a, double q) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) s += std::pow(std::abs(a(i, j)), q);
    }
    best = std::max(best, s);
  }
  return best;
}

double max_row_power_sum(const RealMatrix& a, double q) {
  return max_column_power_sum(a.transpose(), q);
}

double mu_p(const RealMatrix& a, double p) {
  if (p < 0.0 || p > 1.0) throw Error(ErrorCode::InvalidArgument, "p outside [0,1]");
  return std::sqrt(max_row_power_sum(a, 2 * p) * max_column_power_sum(a, 2 - 2 * p));
}

double default_delta() { return 1.0 - std::pow(2.0, -0.25); }

double amp_cost(double gamma_c, double gamma_r, double delta, double epsilon) {
  return 3.0 * (gamma_c / delta * std::log(gamma_c / epsilon) +
                gamma_r / delta * std::log(gamma_r / epsilon));
}

AmpFactor amp_factor(const RealMatrix& a, int s_c, int s_r, double max_abs, double p,
                     double delta, double epsilon) {
  if (!(delta > 0.0 && delta < 0.5) || !(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::InfeasibleParameters, "delta and epsilon must lie in (0, 1/2)");
  }
  AmpFactor f;
  const double root2 = std::sqrt(2.0);
  f.gamma_c = std::pow(max_abs, p) * std::sqrt(s_c / (root2 * max_column_power_sum(a, 2 * p)));
  f.gamma_r = std::pow(max_abs, 1 - p) * std::sqrt(s_r / (root2 * max_row_power_sum(a, 2 - 2 * p)));
  if (f.gamma_c < 1.0) {
    f.gamma_c = 1.0;
    f.clipped_c = true;
  }
  if (f.gamma_r < 1.0) {
    f.gamma_r = 1.0;
    f.clipped_r = true;
  }
  f.amp = amp_cost(f.gamma_c, f.gamma_r, delta, epsilon);
  return f;
}

AmpFactor amp_factor(const RealMatrix& a, const StructureSpec& spec, double p, double delta,
                     double epsilon) {
  const Counts c = derive_counts(spec);
  return amp_factor(a, c.S_c, c.S_r, spec.max_abs_value(), p, delta, epsilon);
}

double prep_alpha(const std::vector<double>& values, int s_c, int s_r, double p) {
  double sp = 0.0, sq = 0.0;
  for (double v : values) {
    if (v == 0.0) continue;
    sp += std::pow(std::abs(v), 2 * p);
    sq += std::pow(std::abs(v), 2 - 2 * p);
  }
  if (sp == 0.0) throw Error(ErrorCode::AllZeroValues, "no nonzero value");
  const double d = static_cast<double>(values.size());
  return std::sqrt(static_cast<double>(s_c) * s_r) / d * std::sqrt(sp * sq);
}

namespace {

// Each value index appears exactly once in every column.
bool once_per_column(const StructureSpec& spec) {
  std::vector<int> count(static_cast<size_t>(spec.n) * spec.num_values(), 0);
  for (int d = 0; d < spec.num_values(); ++d) {
    for (int m = 0; m < spec.m_extent; ++m) {
      if (spec.valid(d, m)) ++count[static_cast<size_t>(spec.col_map(d, m)) * spec.num_values() + d];
    }
  }
  for (int c : count) {
    if (c != 1) return false;
  }
  return true;
}

int round_up(int x, int to) { return (x + to - 1) / to * to; }

}  // namespace

CostTable table_rows(const StructureSpec& spec, double p, double epsilon, double delta) {
  if (delta < 0) delta = default_delta();
  const RealMatrix a = dense_from_structure(spec);
  const Counts c = derive_counts(spec);
  const PaddedShape shape = pad_shape(c.D, c.M, c.S_c, c.S_r, spec.n, spec.m_extent);
  const int n = spec.n;
  const int log_n = ceil_log2(n);
  const int log_s = ceil_log2(shape.S);
  const double d = c.D;
  const double mx = spec.max_abs_value();
  if (mx == 0.0) throw Error(ErrorCode::AllZeroValues, "all values are zero");
  const double alpha_base = std::sqrt(static_cast<double>(c.S_c) * c.S_r) * mx;
  const AmpFactor amp = amp_factor(a, c.S_c, c.S_r, mx, p, delta, epsilon);
  const ToffoliModel loading = loading_model(c.D, INT_MAX);

  CostTable t;
  auto push = [&](CostRecord r) {
    r.toffoli = loading;
    t.rows.push_back(std::move(r));
  };
  push(make_cost("base", d, alpha_base, 2 + log_s));
  std::string amp_note;
  if (amp.clipped_c || amp.clipped_r) amp_note = "gamma clipped at 1 (no amplification benefit)";
  push(make_cost("preamplified", d * amp.amp, alpha_base / (amp.gamma_c * amp.gamma_r),
                 5 + log_s, amp_note));

  if (c.D <= c.S_c && c.D <= c.S_r) {
    const int sc = round_up(c.S_c, c.D);
    const int sr = round_up(c.S_r, c.D);
    std::string note;
    if (sc != c.S_c || sr != c.S_r) {
      note = "sparsity padded to a multiple of D (S_c=" + std::to_string(sc) +
             ", S_r=" + std::to_string(sr) + ")";
    }
    if (!spec.prep_factor) {
      note += std::string(note.empty() ? "" : "; ") +
              "labelling not certified to commute with PREP";
    }
    const int flags = 1 + ceil_log2(std::max(sc, sr));
    push(make_cost("prep", d, prep_alpha(spec.values, sc, sr, 0.5), flags, note));
    if (p != 0.5) {
      push(make_cost("prep_p", 2 * d, prep_alpha(spec.values, sc, sr, p), flags, note));
    }
  } else {
    t.notes.push_back("prep row omitted: S < D, PREP/UNPREP cannot be applied");
  }

  push(make_cost("gilyen_base", d, alpha_base, 3 + log_n,
                 "blackbox loading rendered as D via the structured wrapper"));
  push(make_cost("gilyen_preamplified", d * amp.amp, std::sqrt(2.0) * mu_p(a, p), 8 + log_n,
                 "blackbox loading rendered as D*amp"));
  if (once_per_column(spec)) {
    push(make_cost("camps_banded_circulant", d, c.S_c * mx, 1 + log_s));
  }
  const double nn = static_cast<double>(n);
  push(make_cost("chakraborty_base", nn * nn + nn, a.norm(), 1 + log_n));
  push(make_cost("chakraborty_pnorm", 2 * nn * nn, mu_p(a, p), 2 + log_n));
  return t;
}

}  // namespace blockenc
