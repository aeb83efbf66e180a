#include "blockenc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "blockenc/errors.hpp"
#include "blockenc/estimator.hpp"
#include "blockenc/families.hpp"
#include "blockenc/schemes.hpp"
#include "blockenc/sva.hpp"
#include "blockenc/verify.hpp"

namespace blockenc {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

double round12(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

nlohmann::json rounded(const nlohmann::json& j) {
  if (j.is_number_float()) return round12(j.get<double>());
  if (j.is_array() || j.is_object()) {
    nlohmann::json r = j;
    for (auto& el : r) el = rounded(el);
    return r;
  }
  return j;
}

struct FamilyFlags {
  std::string family;
  int n = 0;
  std::vector<double> values;
  int k = 0;
  int d = 0;
  bool circulant = false;
  bool zero_corners = false;
  bool full_tridiagonal = false;
  bool compact_tree = false;
  std::optional<unsigned> seed;
  std::string spec_file;
  std::string out;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("--family", f.family, "checkerboard|toeplitz|tridiagonal|binary-tree")
      ->check(CLI::IsMember({"checkerboard", "toeplitz", "circulant", "tridiagonal", "binary-tree"}));
  cmd->add_option("--n", f.n, "matrix dimension N");
  cmd->add_option("--values", f.values, "comma separated values A_d")->delimiter(',');
  cmd->add_option("--k", f.k, "index of the main diagonal among the Toeplitz values");
  cmd->add_option("--d", f.d, "number of Toeplitz values drawn with --seed");
  cmd->add_flag("--circulant", f.circulant, "wrap Toeplitz diagonals around");
  cmd->add_flag("--zero-corners", f.zero_corners, "checkerboard with zeroed anti-diagonal corners");
  cmd->add_flag("--full-tridiagonal", f.full_tridiagonal, "keep the delete qubit path");
  cmd->add_flag("--compact-tree", f.compact_tree, "binary tree labelling with a minimal s register");
  cmd->add_option("--seed", f.seed, "draw random values in [-1,1] when --values is absent");
  cmd->add_option("--spec", f.spec_file, "family description as JSON");
  cmd->add_option("--out", f.out, "output file");
}

int random_value_count(const FamilyFlags& f) {
  if (f.family == "checkerboard") return 2;
  if (f.family == "binary-tree") return 3;
  if (f.family == "tridiagonal") return 2 * f.n - 1;
  return f.d > 0 ? f.d : std::min(4, f.n);
}

std::vector<double> random_values(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(count);
  for (auto& x : v) {
    do x = dist(rng);
    while (x == 0.0);
  }
  return v;
}

FamilyArgs resolve_family(const FamilyFlags& f) {
  FamilyArgs a;
  if (!f.spec_file.empty()) {
    std::ifstream in(f.spec_file);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + f.spec_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("bad JSON: ") + e.what());
    }
    return family_args_from_json(j);
  }
  if (f.family.empty() || f.n <= 0) {
    throw Error(ErrorCode::InvalidArgument, "--family and --n are required");
  }
  a.family = f.family;
  a.n = f.n;
  a.k = f.k;
  a.circulant = f.circulant;
  a.zero_corners = f.zero_corners;
  a.simplified = !f.full_tridiagonal;
  a.compact = f.compact_tree;
  if (!f.values.empty()) {
    a.values = f.values;
  } else if (f.seed) {
    a.values = random_values(random_value_count(f), *f.seed);
  } else {
    throw Error(ErrorCode::InvalidArgument, "--values or --seed is required");
  }
  return a;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  file << text;
}

BlockEncoding build_scheme(const std::string& scheme, const Compiled& c, double p,
                           double epsilon) {
  if (scheme == "base") return build_base(c.spec, c.tables, c.shape);
  if (scheme == "hermitian") {
    if (c.tables.transpose_perm) return build_hermitian_base(c.spec, c.tables, c.shape);
    return hermitianize(build_base(c.spec, c.tables, c.shape));
  }
  if (scheme == "hermitianized") return hermitianize(build_base(c.spec, c.tables, c.shape));
  if (scheme == "prep") return build_prep_unprep(c.spec, c.tables, c.shape, p);
  AmplificationParams params;
  params.epsilon = epsilon;
  params.p = p;
  if (scheme == "preamplified") return build_preamplified(c.spec, c.tables, c.shape, params);
  return build_hermitian_preamplified(c.spec, c.tables, c.shape, params);
}

int cmd_build(const FamilyFlags& f, const std::string& scheme, double p, double epsilon,
              std::ostream& out) {
  const FamilyArgs args = resolve_family(f);
  const Compiled c = compile(make_family(args));
  const BlockEncoding enc = build_scheme(scheme, c, p, epsilon);
  const Report report = check_encoding(enc, c.spec);
  nlohmann::json j = to_json(report);
  j["family"] = to_json(args);
  j["scheme"] = to_string(enc.tag);
  j["alpha"] = enc.alpha;
  j["flag_qubits"] = enc.flag_qubits();
  j["gamma_c"] = enc.gamma_c;
  j["gamma_r"] = enc.gamma_r;
  j["dimension"] = enc.unitary.rows();
  emit(rounded(j).dump(2) + "\n", f.out, out);
  return report.passed ? 0 : 1;
}

std::string cost_csv(const CostTable& table) {
  std::ostringstream s;
  s << "scheme,data_loading,subnormalisation,flag_qubits,figure_of_merit\n";
  for (const auto& r : table.rows) {
    s << r.scheme << ','
      << (r.data_loading_label.empty() ? format_number(r.data_loading) : r.data_loading_label)
      << ',' << format_number(r.subnormalisation) << ',' << r.flag_qubits << ','
      << format_number(r.figure_of_merit) << '\n';
  }
  for (const auto& r : table.rows) {
    if (!r.note.empty()) s << "# " << r.scheme << ": " << r.note << '\n';
  }
  for (const auto& n : table.notes) s << "# " << n << '\n';
  return s.str();
}

int cmd_estimate(const FamilyFlags& f, double p, double epsilon, double delta, std::ostream& out) {
  const StructureSpec spec = make_family(resolve_family(f));
  emit(cost_csv(table_rows(spec, p, epsilon, delta)), f.out, out);
  return 0;
}

int cmd_sva(const std::vector<double>& gammas, const std::vector<double>& deltas,
            const std::vector<double>& epsilons, const std::string& path, std::ostream& out,
            std::ostream& err) {
  std::ostringstream s;
  s << "gamma,delta,epsilon,degree,predicted_degree\n";
  std::vector<SweepRow> rows;
  bool infeasible = false;
  for (double g : gammas) {
    for (double d : deltas) {
      for (double e : epsilons) {
        try {
          const int deg = min_degree(g, d, e);
          rows.push_back({g, d, e, deg});
          s << format_number(g) << ',' << format_number(d) << ',' << format_number(e) << ','
            << deg << ',' << format_number(predicted_degree(g, d, e)) << '\n';
        } catch (const Error& ex) {
          if (ex.code() != ErrorCode::InfeasibleParameters) throw;
          infeasible = true;
          err << "infeasible point gamma=" << format_number(g) << " delta=" << format_number(d)
              << " epsilon=" << format_number(e) << ": " << ex.what() << '\n';
          s << format_number(g) << ',' << format_number(d) << ',' << format_number(e)
            << ",infeasible," << format_number(predicted_degree(g, d, e)) << '\n';
        }
      }
    }
  }
  if (!rows.empty()) {
    const PrefactorFit fit = fit_prefactor(rows);
    s << "# fitted_c=" << format_number(fit.c) << " points=" << rows.size()
      << " max_abs_residual=" << format_number(fit.max_abs_residual)
      << " low_confidence=" << (fit.low_confidence ? "true" : "false") << '\n';
  }
  emit(s.str(), path, out);
  return infeasible ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block encodings of structured matrices"};
  app.require_subcommand(1);

  FamilyFlags build_flags;
  std::string scheme = "base";
  double p = 0.5;
  double epsilon = kDefaultEpsilon;
  auto* build = app.add_subcommand("build", "build and verify a block encoding");
  add_family_flags(build, build_flags);
  build->add_option("--scheme", scheme)
      ->check(CLI::IsMember(
          {"base", "hermitian", "hermitianized", "prep", "preamplified", "hermitian-preamplified"}));
  build->add_option("--p", p, "PREP amplitude exponent in [1/2, 1]");
  build->add_option("--epsilon", epsilon, "relative accuracy of amplified factors");

  FamilyFlags est_flags;
  double est_p = 0.5;
  double est_eps = kDefaultEpsilon;
  double est_delta = -1.0;
  auto* estimate = app.add_subcommand("estimate", "cost table as CSV");
  add_family_flags(estimate, est_flags);
  estimate->add_option("--p", est_p, "PREP amplitude exponent in [1/2, 1]");
  estimate->add_option("--epsilon", est_eps, "amplification accuracy");
  estimate->add_option("--delta", est_delta, "amplification window margin");

  std::vector<double> gammas{2, 4, 8, 16, 32};
  std::vector<double> deltas{0.08, 0.159};
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
  std::string sva_out;
  auto* sva = app.add_subcommand("sva", "minimum amplification degree sweep as CSV");
  sva->add_option("--gammas", gammas, "amplification factors")->delimiter(',');
  sva->add_option("--deltas", deltas, "window margins")->delimiter(',');
  sva->add_option("--epsilons", epsilons, "relative accuracies")->delimiter(',');
  sva->add_option("--out", sva_out, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(build_flags, scheme, p, epsilon, out);
    if (estimate->parsed()) return cmd_estimate(est_flags, est_p, est_eps, est_delta, out);
    return cmd_sva(gammas, deltas, epsilons, sva_out, out, err);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    if (e.code() == ErrorCode::InfeasibleParameters) return 1;
    return 2;
  }
}

}  // namespace blockenc
