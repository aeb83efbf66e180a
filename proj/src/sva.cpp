#include "blockenc/sva.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blockenc/errors.hpp"

namespace blockenc {

double RectangleApprox::operator()(double x) const {
  return 0.5 * (std::erf(kappa * (x + x0)) - std::erf(kappa * (x - x0)));
}

double RectangleApprox::target(double x) const { return gamma * x * (*this)(x); }

RectangleApprox rect_approx(double gamma, double delta, double epsilon) {
  if (!(gamma > 1.0) || !(delta > 0.0 && delta < 0.5) || !(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::InfeasibleParameters,
                "need gamma > 1 and delta, epsilon in (0, 1/2)");
  }
  RectangleApprox r;
  r.gamma = gamma;
  r.delta = delta;
  r.epsilon = epsilon;
  r.x0 = (1.0 - delta / 2.0) / gamma;
  // kappa * w = sqrt(ln(4 gamma / eps)) keeps the tail of gamma x f(x) below eps / 2.
  r.kappa = (2.0 * gamma / delta) * std::sqrt(std::log(4.0 * gamma / epsilon));
  const double inner = (1.0 - delta) / gamma;
  const double outer = 1.0 / gamma;
  if (r(inner) < 1.0 - epsilon / 2.0 || r(outer) > epsilon / 2.0) {
    throw Error(ErrorCode::InfeasibleParameters, "erf rectangle misses its bounds");
  }
  return r;
}

ChebyshevPoly::ChebyshevPoly(std::vector<double> coefficients, double gamma, double delta,
                             double epsilon)
    : c_(std::move(coefficients)), gamma_(gamma), delta_(delta), epsilon_(epsilon) {
  if (c_.empty()) c_.push_back(0.0);
}

double ChebyshevPoly::operator()(double x) const {
  double b1 = 0.0, b2 = 0.0;
  for (size_t k = c_.size() - 1; k >= 1; --k) {
    const double b0 = c_[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c_[0] + x * b1 - b2;
}

int ChebyshevPoly::degree() const {
  int d = static_cast<int>(c_.size()) - 1;
  while (d > 0 && c_[d] == 0.0) --d;
  return d;
}

ChebyshevPoly chebyshev_interpolate(const std::function<double(double)>& f, int degree,
                                    Parity parity) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative degree");
  const int n = degree + 1;
  std::vector<double> in(n), out(n);
  for (int k = 0; k < n; ++k) {
    in[k] = f(std::cos(std::numbers::pi * (k + 0.5) / n));
  }
  fftw_plan plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT10, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) c[k] = out[k] / n;
  c[0] /= 2.0;
  for (int k = 0; k < n; ++k) {
    if ((parity == Parity::odd && k % 2 == 0) || (parity == Parity::even && k % 2 == 1)) c[k] = 0.0;
  }
  return ChebyshevPoly(std::move(c), 1.0, 0.0, 0.0);
}

ChebyshevPoly chebyshev_truncate(const RectangleApprox& rect, int degree) {
  ChebyshevPoly p = chebyshev_interpolate([&](double x) { return rect.target(x); }, degree,
                                          Parity::odd);
  return ChebyshevPoly(p.coefficients(), rect.gamma, rect.delta, rect.epsilon);
}

long long search_grid_points(double gamma, double delta) {
  return static_cast<long long>(std::ceil(1e3 * gamma / (1.0 - delta)));
}

GridCheck grid_check(const ChebyshevPoly& poly, long long points, bool stop_early) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  const auto& c = poly.coefficients();
  bool odd = true;
  for (size_t k = 0; k < c.size(); k += 2) odd = odd && c[k] == 0.0;
  const double window = poly.window();
  const double g = poly.gamma();
  GridCheck r;
  r.bounded = true;
  r.accurate = true;
  for (long long k = 0; k < points; ++k) {
    const double x = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(points - 1);
    if (odd && x < 0.0) continue;
    const double v = poly(x);
    r.max_abs = std::max(r.max_abs, std::abs(v));
    if (std::abs(v) > 1.0 + kBoundTolerance) r.bounded = false;
    if (x > 0.0 && x <= window) {
      const double rel = std::abs(v - g * x) / (g * x);
      r.max_relative_error = std::max(r.max_relative_error, rel);
      if (rel > poly.epsilon()) r.accurate = false;
    }
    if (stop_early && !r.passed()) return r;
  }
  return r;
}

DegreeSearch min_degree_search(double gamma, double delta, double epsilon) {
  const RectangleApprox rect = rect_approx(gamma, delta, epsilon);
  const long long points = search_grid_points(gamma, delta);
  auto attempt = [&](int k) {
    ChebyshevPoly p = chebyshev_truncate(rect, 2 * k + 1);
    const bool ok = grid_check(p, points, true).passed();
    return std::make_pair(ok, p);
  };
  // Odd degrees 2k+1: grow k geometrically, then bisect.
  int lo = -1, hi = 0;
  auto found = attempt(hi);
  while (!found.first) {
    lo = hi;
    hi = 2 * hi + 1;
    if (2 * hi + 1 > kMaxDegree) {
      throw Error(ErrorCode::InfeasibleParameters, "degree exceeds " + std::to_string(kMaxDegree));
    }
    found = attempt(hi);
  }
  ChebyshevPoly best = found.second;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    auto trial = attempt(mid);
    if (trial.first) {
      hi = mid;
      best = trial.second;
    } else {
      lo = mid;
    }
  }
  // Bisection works on the coarse grid; confirm on the denser one.
  const long long dense = kVerifyGridFactor * points;
  while (!grid_check(best, dense, true).passed()) {
    if (2 * ++hi + 1 > kMaxDegree) {
      throw Error(ErrorCode::InfeasibleParameters, "degree exceeds " + std::to_string(kMaxDegree));
    }
    best = chebyshev_truncate(rect, 2 * hi + 1);
  }
  return {2 * hi + 1, best};
}

int min_degree(double gamma, double delta, double epsilon) {
  return min_degree_search(gamma, delta, epsilon).degree;
}

double predicted_degree(double gamma, double delta, double epsilon, double c) {
  return c * gamma / delta * std::log(gamma / epsilon);
}

PrefactorFit fit_prefactor(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty sweep");
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : rows) {
    const double x = predicted_degree(r.gamma, r.delta, r.epsilon, 1.0);
    sxy += x * r.degree;
    sxx += x * x;
  }
  PrefactorFit fit;
  fit.c = sxy / sxx;
  for (const auto& r : rows) {
    const double res = r.degree / predicted_degree(r.gamma, r.delta, r.epsilon, fit.c) - 1.0;
    fit.relative_residuals.push_back(res);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(res));
  }
  fit.low_confidence = static_cast<int>(rows.size()) < kMinConfidentSweepPoints;
  return fit;
}

RealMatrix amplify_singular_values(const RealMatrix& block, const ChebyshevPoly& poly) {
  if (block.size() == 0) return block;
  Eigen::JacobiSVD<RealMatrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double limit = poly.window() * (1.0 + 1e-9);
  Eigen::VectorXd mapped(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > limit) {
      throw Error(ErrorCode::SingularValueOutOfRange,
                  "singular value " + std::to_string(sigma[k]) + " beyond (1-delta)/gamma");
    }
    mapped[k] = poly(sigma[k]);
  }
  return svd.matrixU() * mapped.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace blockenc
