#ifndef BENTCABLE_TESTS_ORACLE_HPP
#define BENTCABLE_TESTS_ORACLE_HPP

// Independent reference computations used only by the tests. Nothing here calls into
// the library's special functions.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on a finite interval.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 50) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Composite Simpson over [a, b] split into `pieces` adaptive panels.
inline double simpson_pieces(const std::function<double(double)>& f, double a, double b, int pieces,
                             double tol = 1e-13) {
  double sum = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = a + (b - a) * (i + 1) / pieces;
    sum += simpson(f, lo, hi, tol / pieces);
  }
  return sum;
}

inline double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

/// Chi-squared upper tail by integrating the density from 0 to x (df >= 2 keeps it finite).
inline double chi2_upper(double x, double df) {
  const double k = 0.5 * df;
  auto dens = [k](double t) {
    if (t <= 0.0) return k == 1.0 ? 0.5 : 0.0;
    return std::exp((k - 1.0) * std::log(t) - 0.5 * t - k * std::log(2.0) - std::lgamma(k));
  };
  if (df < 2.0) {
    // Substitute t = u^2 to remove the t^(-1/2) endpoint singularity.
    auto g = [&](double u) { return u == 0.0 ? std::exp(-k * std::log(2.0) - std::lgamma(k)) * 2.0
                                             : 2.0 * u * dens(u * u); };
    return 1.0 - simpson_pieces(g, 0.0, std::sqrt(x), 64);
  }
  return 1.0 - simpson_pieces(dens, 0.0, x, 64);
}

/// F(d1, d2) upper tail by integrating the density on [0, f] with t = u^2 substitution.
inline double f_upper(double f, double d1, double d2) {
  const double lb = std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) - std::lgamma(0.5 * (d1 + d2));
  auto dens = [=](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(t) -
                    0.5 * (d1 + d2) * std::log1p(d1 * t / d2) - lb);
  };
  auto g = [&](double u) { return 2.0 * u * dens(u * u); };
  return 1.0 - simpson_pieces(g, 0.0, std::sqrt(f), 128);
}

/// Sum of log normal densities, one point at a time.
inline double gaussian_loglik(const std::vector<double>& y, const std::vector<double>& mean,
                              double sigma2) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - mean[i];
    s += std::log(std::exp(-r * r / (2.0 * sigma2)) / std::sqrt(2.0 * kPi * sigma2));
  }
  return s;
}

/// Standard normal quantile by bisection on erfc.
inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-m / std::sqrt(2.0)) < p) lo = m; else hi = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

#endif  // BENTCABLE_TESTS_ORACLE_HPP
