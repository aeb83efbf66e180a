#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blockenc/errors.hpp"
#include "blockenc/estimator.hpp"
#include "blockenc/families.hpp"
#include "blockenc/schemes.hpp"
#include "blockenc/sva.hpp"
#include "blockenc/verify.hpp"

using namespace blockenc;

namespace {

constexpr double kExactTol = 1e-9;
constexpr double kAlphaRelTol = 1e-9;
constexpr double kHermTol = 1e-10;
constexpr double kOracleTol = 1e-12;
constexpr double kC1Seconds = 60.0;
constexpr double kC7Seconds = 300.0;
constexpr double kFitLow = 2.4;
constexpr double kFitHigh = 3.6;
constexpr double kAmpEpsilon = 1e-3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

std::vector<double> random_values(std::mt19937& rng, int count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(count);
  for (auto& x : v) {
    do x = u(rng);
    while (x == 0.0);
  }
  return v;
}

struct Instance {
  std::string name;
  StructureSpec spec;
  bool prep_compatible;
};

std::vector<Instance> family_instances(int n, std::mt19937& rng) {
  const auto v = random_values(rng, 3);
  const std::string tag = " N=" + std::to_string(n);
  return {{"checkerboard" + tag, checkerboard(n, v[0], v[1]), true},
          {"toeplitz" + tag, toeplitz(n, 1, random_values(rng, 4)), true},
          {"circulant" + tag, toeplitz(n, 0, random_values(rng, 4), true), true},
          {"tridiagonal" + tag, tridiagonal(n, random_values(rng, 2 * n - 1)), false},
          {"binary-tree" + tag, binary_tree(n, v[0], v[1], v[2]), false},
          {"binary-tree-compact" + tag, binary_tree(n, v[2], v[0], v[1], true, true), false}};
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Block correctness of exact schemes over every family and size.
void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937 rng(101);
  int built = 0;
  double worst = 0.0;
  for (int n : {4, 8, 16}) {
    for (const auto& inst : family_instances(n, rng)) {
      const Compiled c = compile(inst.spec);
      std::vector<std::pair<std::string, BlockEncoding>> encs;
      encs.emplace_back("base", build_base(c.spec, c.tables, c.shape));
      if (c.tables.transpose_perm)
        encs.emplace_back("hermitian", build_hermitian_base(c.spec, c.tables, c.shape));
      if (inst.prep_compatible) encs.emplace_back("prep", build_prep_unprep(c.spec, c.tables, c.shape));
      for (const auto& [scheme, enc] : encs) {
        const Report r = check_encoding(enc, c.spec);
        ++built;
        worst = std::max(worst, r.max_abs_error);
        if (r.max_abs_error > kExactTol || relative_gap(r.measured_alpha, enc.alpha) > kAlphaRelTol)
          o.fail(inst.name + " " + scheme);
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kC1Seconds) o.fail("runtime");
  o.detail << built << " encodings, worst error " << worst << ", " << secs << " s";
}

// Subnormalisation formulas, measured by least squares.
void criterion_2(Outcome& o) {
  auto expect_alpha = [&](const std::string& name, const BlockEncoding& enc, const StructureSpec& spec,
                          double predicted) {
    const Report r = check_encoding(enc, spec);
    if (relative_gap(enc.alpha, predicted) > kAlphaRelTol ||
        relative_gap(r.measured_alpha, predicted) > kAlphaRelTol || !r.passed)
      o.fail(name);
  };
  std::mt19937 rng(202);
  int checks = 0;
  for (int n : {2, 4, 8, 16}) {
    const auto v = random_values(rng, 2);
    const Compiled c = compile(checkerboard(n, v[0], v[1]));
    const double mx = std::max(std::abs(v[0]), std::abs(v[1]));
    const double sum = std::abs(v[0]) + std::abs(v[1]);
    if (n >= 4) expect_alpha("checkerboard base", build_base(c.spec, c.tables, c.shape), c.spec, n * mx);
    expect_alpha("checkerboard prep", build_prep_unprep(c.spec, c.tables, c.shape), c.spec, n / 2 * sum);
    checks += n >= 4 ? 2 : 1;
  }
  for (int n : {4, 8, 16}) {
    const auto v = random_values(rng, 4);
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    const Compiled c = compile(toeplitz(n, 1, v));
    expect_alpha("toeplitz base", build_base(c.spec, c.tables, c.shape), c.spec, 4 * mx);
    ++checks;
  }
  o.detail << checks << " alpha checks; checkerboard prep alpha is |A0|+|A1| at N=2 and "
           << "(N/2)(|A0|+|A1|) above";
}

// Flag qubits on built layouts.
void criterion_3(Outcome& o) {
  std::mt19937 rng(303);
  int checks = 0;
  std::ostringstream info;
  for (int n : {4, 8, 16}) {
    for (const auto& inst : family_instances(n, rng)) {
      const Compiled c = compile(inst.spec);
      const int log_s = ceil_log2(std::max(c.counts.S_c, c.counts.S_r));
      const bool is_default_tree = inst.name.rfind("binary-tree N", 0) == 0;
      const int base_flags = build_base(c.spec, c.tables, c.shape).flag_qubits();
      if (is_default_tree) {
        if (n == 8) info << " default tree labelling: base flags " << base_flags << " vs " << 2 + log_s;
        continue;
      }
      if (base_flags != 2 + log_s) o.fail(inst.name + " base");
      if (inst.prep_compatible &&
          build_prep_unprep(c.spec, c.tables, c.shape).flag_qubits() != 1 + log_s)
        o.fail(inst.name + " prep");
      checks += inst.prep_compatible ? 2 : 1;
      if (n == 4 && build_preamplified(c.spec, c.tables, c.shape).flag_qubits() != 5 + log_s)
        o.fail(inst.name + " preamplified");
      if (n == 4) ++checks;
    }
  }
  o.detail << checks << " layouts;" << info.str();
}

// Hermiticity of symmetric constructions.
void criterion_4(Outcome& o) {
  std::mt19937 rng(404);
  double worst = 0.0;
  int checks = 0;
  for (int n : {4, 8, 16}) {
    const auto v = random_values(rng, 3);
    for (const auto& spec : {tridiagonal(n, random_values(rng, 2 * n - 1)), binary_tree(n, v[0], v[1], v[2]),
                             binary_tree(n, v[0], v[1], v[2], true, true)}) {
      const Compiled c = compile(spec);
      const BlockEncoding h = build_hermitian_base(c.spec, c.tables, c.shape);
      const Report r = check_encoding(h, c.spec);
      worst = std::max(worst, r.hermiticity_defect);
      if (r.hermiticity_defect > kHermTol || r.max_abs_error > kExactTol) o.fail(spec.family + " hermitian base");
      ++checks;
    }
    for (const auto& spec : {checkerboard(n, v[0], v[1]), tridiagonal(n, random_values(rng, 2 * n - 1)),
                             binary_tree(n, v[0], v[1], v[2])}) {
      const Compiled c = compile(spec);
      const BlockEncoding base = build_base(c.spec, c.tables, c.shape);
      const BlockEncoding h = hermitianize(base);
      const Report r = check_encoding(h, c.spec);
      worst = std::max(worst, r.hermiticity_defect);
      if (r.hermiticity_defect > kHermTol || r.max_abs_error > kExactTol) o.fail(spec.family + " hermitianize");
      if (h.flag_qubits() != base.flag_qubits() + 1) o.fail(spec.family + " hermitianize flag count");
      ++checks;
    }
  }
  o.detail << checks << " encodings, worst |U-U^dag| " << worst;
}

// Ordering of PREP subnormalisations in the exponent p.
void criterion_5(Outcome& o) {
  std::mt19937 rng(505);
  std::uniform_int_distribution<int> dist_d(2, 16);
  std::vector<double> ps;
  for (int k = 0; k <= 10; ++k) ps.push_back(0.5 + 0.05 * k);
  int sets = 0, strict = 0, ties = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dist_d(rng);
    const auto v = random_values(rng, d);
    bool differ = false;
    for (double x : v) differ = differ || std::abs(x) != std::abs(v[0]);
    std::vector<double> a;
    for (double p : ps) a.push_back(prep_alpha(v, d, d, p));
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = i + 1; j < a.size(); ++j) {
        if (a[i] > a[j] * (1 + 1e-15)) o.fail("ordering trial " + std::to_string(trial));
        if (differ) {
          if (a[i] < a[j]) ++strict;
          else {
            ++ties;
            o.fail("no strict gap trial " + std::to_string(trial));
          }
        }
      }
    }
    ++sets;
  }
  o.detail << sets << " value sets, " << strict << " strict pairs, " << ties << " ties";
}

// Preamplified accuracy on a strongly varying tridiagonal instance.
void criterion_6(Outcome& o) {
  const auto spec = tridiagonal(4, {1, 0.01, 0.02, 0.5, 0.03, 0.01, 0.9});
  const Compiled c = compile(spec);
  AmplificationParams params;
  params.epsilon = kAmpEpsilon;
  const BlockEncoding amp = build_preamplified(c.spec, c.tables, c.shape, params);
  const BlockEncoding base = build_base(c.spec, c.tables, c.shape);
  if (!(amp.gamma_c > 1.0 && amp.gamma_r > 1.0)) o.fail("gamma not above 1");
  const RealMatrix a = dense_from_structure(c.spec);
  const double err = max_abs_diff(amp.alpha * extract_block(amp), a);
  const double bound = (2 * kAmpEpsilon + kAmpEpsilon * kAmpEpsilon) * amp.alpha;
  if (err > bound) o.fail("block error");
  const double gap = relative_gap(amp.alpha * amp.gamma_c * amp.gamma_r, base.alpha);
  if (gap > 1e-12) o.fail("alpha relation");
  o.detail << "gamma_c " << amp.gamma_c << ", gamma_r " << amp.gamma_r << ", alpha " << amp.alpha
           << " (base " << base.alpha << "), error " << err << " <= " << bound;
}

// Degree sweep, fit and dense verification of every polynomial.
void criterion_7(Outcome& o) {
  const auto t0 = Clock::now();
  std::vector<SweepRow> rows;
  std::vector<DegreeSearch> polys;
  for (double g : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    for (double d : {0.08, 0.159}) {
      for (double e : {1e-2, 1e-3, 1e-4}) {
        try {
          polys.push_back(min_degree_search(g, d, e));
          rows.push_back({g, d, e, polys.back().degree});
        } catch (const Error& ex) {
          o.fail("search failed at gamma=" + std::to_string(g) + ": " + ex.what());
        }
      }
    }
  }
  const double sweep_secs = seconds_since(t0);
  if (sweep_secs >= kC7Seconds) o.fail("sweep runtime");
  if (rows.empty()) return;
  const PrefactorFit fit = fit_prefactor(rows);
  if (fit.c < kFitLow || fit.c > kFitHigh) o.fail("fitted prefactor");
  int verified = 0;
  for (size_t i = 0; i < polys.size(); ++i) {
    const long long points = kVerifyGridFactor * search_grid_points(rows[i].gamma, rows[i].delta);
    const GridCheck g = grid_check(polys[i].poly, points);
    if (!g.passed()) o.fail("dense grid gamma=" + std::to_string(rows[i].gamma));
    else ++verified;
  }
  o.detail << rows.size() << " points in " << sweep_secs << " s, c=" << fit.c << ", max residual "
           << fit.max_abs_residual << ", " << verified << " polynomials pass the 10x grid";
}

// Figure-of-merit chain and spectral floor.
void criterion_8(Outcome& o) {
  std::mt19937 rng(808);
  int instances = 0, rows = 0;
  for (int n : {4, 8, 16}) {
    for (const auto& inst : family_instances(n, rng)) {
      const StructureSpec& spec = inst.spec;
      const RealMatrix a = dense_from_structure(spec);
      const Counts c = derive_counts(spec);
      if (c.D <= n) {
        const double lhs = (double(n) * n + n) * a.norm();
        const double rhs = c.D * std::sqrt(double(c.S_c) * c.S_r) * spec.max_abs_value();
        if (lhs < rhs) o.fail(inst.name + " chain");
        ++instances;
      }
      const double op = spectral_norm(a);
      for (double p : {0.5, 0.75, 1.0}) {
        for (const auto& r : table_rows(spec, p).rows) {
          if (r.subnormalisation < op - 1e-9) o.fail(inst.name + " " + r.scheme);
          ++rows;
        }
      }
    }
  }
  o.detail << instances << " instances with D <= N, " << rows << " table rows above the spectral norm";
}

// Independent dense constructors and simplified circuits.
void criterion_9(Outcome& o) {
  std::mt19937 rng(909);
  int dense = 0, circuits = 0;
  double worst = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto v = random_values(rng, 3);
    std::vector<FamilyArgs> args{{"checkerboard", n, {v[0], v[1]}},
                                 {"checkerboard", n, {v[1], v[2]}, 0, false, true},
                                 {"toeplitz", n, random_values(rng, 4), 1},
                                 {"toeplitz", n, random_values(rng, 4), 0, true},
                                 {"tridiagonal", n, random_values(rng, 2 * n - 1)},
                                 {"binary-tree", n, v},
                                 {"binary-tree", n, v, 0, false, false, true, true}};
    for (const auto& f : args) {
      if (!(dense_from_structure(make_family(f)) == direct_dense(f))) o.fail(f.family + " dense");
      ++dense;
    }
    if (n > 16) continue;
    for (bool circ : {false, true}) {
      const int k = circ ? 0 : 1;
      const auto vals = random_values(rng, 4);
      const Compiled c = compile(toeplitz(n, k, vals, circ));
      const BlockEncoding generic = build_base(c.spec, c.tables, c.shape);
      const BlockEncoding merged = toeplitz_merged_circuit(n, k, vals, circ);
      const double d = max_abs_diff(merged.alpha * extract_block(merged), generic.alpha * extract_block(generic));
      worst = std::max(worst, d);
      if (d > kOracleTol) o.fail("toeplitz merged");
      ++circuits;
    }
  }
  o.detail << dense << " bit-identical dense matrices, " << circuits << " merged circuits, worst " << worst;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Checkerboard tensor factorisation.
void criterion_10(Outcome& o) {
  std::mt19937 rng(1010);
  double worst = 0.0, normalised_scale = 0.0;
  for (int n : {4, 8, 16}) {
    const auto v = random_values(rng, 2);
    RealMatrix core(2, 2);
    core << v[0], v[1], v[1], v[0];
    RealMatrix ones_form = core, plus_form = core;
    const RealMatrix plus = RealMatrix::Constant(2, 2, 0.5);
    for (int q = 1; q < ceil_log2(n); ++q) {
      ones_form = kron(RealMatrix::Ones(2, 2), ones_form);
      plus_form = kron(plus, plus_form);
    }
    const RealMatrix a = dense_from_structure(checkerboard(n, v[0], v[1]));
    const double d = max_abs_diff(a, ones_form);
    worst = std::max(worst, d);
    if (d > kOracleTol) o.fail("N=" + std::to_string(n));
    normalised_scale = a(0, 0) / plus_form(0, 0);
  }
  o.detail << "worst " << worst << " with all-ones blocks J = 2|+><+|; projector form differs by "
           << "2^(log2 N - 1) (" << normalised_scale << " at N=16)";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"block correctness of exact schemes", criterion_1},
      {"subnormalisation formulas", criterion_2},
      {"flag qubit counts", criterion_3},
      {"hermiticity", criterion_4},
      {"p-ordering of PREP subnormalisation", criterion_5},
      {"preamplified accuracy", criterion_6},
      {"amplification degree sweep", criterion_7},
      {"figure of merit and spectral floor", criterion_8},
      {"oracle equivalence", criterion_9},
      {"checkerboard factorisation", criterion_10},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    std::printf("%s C%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
