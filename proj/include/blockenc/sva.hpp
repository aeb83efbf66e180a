#pragma once

#include <functional>
#include <vector>

#include "blockenc/circuit.hpp"

namespace blockenc {

// Smoothed rectangle f(x) = (erf(kappa (x + x0)) - erf(kappa (x - x0))) / 2.
struct RectangleApprox {
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double x0 = 0.0;
  double kappa = 0.0;

  [[nodiscard]] double operator()(double x) const;
  // gamma * x * f(x), the function the amplification polynomial tracks.
  [[nodiscard]] double target(double x) const;
};

RectangleApprox rect_approx(double gamma, double delta, double epsilon);

enum class Parity { none, odd, even };

class ChebyshevPoly {
 public:
  ChebyshevPoly() = default;
  ChebyshevPoly(std::vector<double> coefficients, double gamma, double delta, double epsilon);

  [[nodiscard]] double operator()(double x) const;  // Clenshaw
  [[nodiscard]] int degree() const;
  [[nodiscard]] const std::vector<double>& coefficients() const { return c_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  // Right edge of the accuracy window, (1 - delta) / gamma.
  [[nodiscard]] double window() const { return (1.0 - delta_) / gamma_; }

 private:
  std::vector<double> c_;
  double gamma_ = 1.0;
  double delta_ = 0.0;
  double epsilon_ = 0.0;
};

// Interpolant at degree + 1 Chebyshev points of the first kind.
ChebyshevPoly chebyshev_interpolate(const std::function<double(double)>& f, int degree,
                                    Parity parity = Parity::none);

// Odd interpolant of rect.target at the given degree.
ChebyshevPoly chebyshev_truncate(const RectangleApprox& rect, int degree);

struct GridCheck {
  bool bounded = false;
  bool accurate = false;
  double max_abs = 0.0;
  double max_relative_error = 0.0;
  [[nodiscard]] bool passed() const { return bounded && accurate; }
};

inline constexpr double kBoundTolerance = 1e-9;
inline constexpr long long kVerifyGridFactor = 10;
// Degrees beyond this are refused.
inline constexpr int kMaxDegree = 32767;

long long search_grid_points(double gamma, double delta);

// Uniform grid of `points` spanning [-1, 1]; odd polynomials are checked on x >= 0.
GridCheck grid_check(const ChebyshevPoly& poly, long long points, bool stop_early = false);

struct DegreeSearch {
  int degree = 0;
  ChebyshevPoly poly;
};

DegreeSearch min_degree_search(double gamma, double delta, double epsilon);
int min_degree(double gamma, double delta, double epsilon);

double predicted_degree(double gamma, double delta, double epsilon, double c = 3.0);

struct SweepRow {
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  int degree = 0;
};

struct PrefactorFit {
  double c = 0.0;
  std::vector<double> relative_residuals;  // degree / (c x) - 1
  double max_abs_residual = 0.0;
  bool low_confidence = false;
};

inline constexpr int kMinConfidentSweepPoints = 12;

PrefactorFit fit_prefactor(const std::vector<SweepRow>& rows);

RealMatrix amplify_singular_values(const RealMatrix& block, const ChebyshevPoly& poly);

}  // namespace blockenc
