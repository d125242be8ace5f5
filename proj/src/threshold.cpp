#include "bentcable/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bentcable/error.hpp"
#include "bentcable/special.hpp"

namespace bentcable {

using special::kPi;
using special::normal_cdf;
using special::normal_pdf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ParameterDomain, what);
}

void require_integrable(const ThresholdDist& d, const char* op) {
  if (!d.integrable()) {
    throw Error(ErrorKind::NonIntegrable,
                std::string(op) + ": Cauchy threshold has no finite mean (E|T| = inf); "
                                  "no valid transitional or expected-bend approximation exists");
  }
}

double skew_delta(double lambda) { return lambda / std::sqrt(1.0 + lambda * lambda); }

// Root of a monotone cdf by bisection inside [lo, hi].
double invert_cdf(const ThresholdDist& d, double p, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(d, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Uniform: return "Uniform";
    case DistKind::Epanechnikov: return "Epanechnikov";
    case DistKind::Biweight: return "Biweight";
    case DistKind::Logistic: return "Logistic";
    case DistKind::Normal: return "Normal";
    case DistKind::SkewNormal: return "SkewNormal";
    case DistKind::NonStandardT2: return "T2";
    case DistKind::ExponentiatedUniform: return "ExponentiatedUniform";
    case DistKind::Cauchy: return "Cauchy";
  }
  return "?";
}

DistKind parse_dist_kind(std::string_view name) {
  for (DistKind k : {DistKind::Uniform, DistKind::Epanechnikov, DistKind::Biweight,
                     DistKind::Logistic, DistKind::Normal, DistKind::SkewNormal,
                     DistKind::NonStandardT2, DistKind::ExponentiatedUniform, DistKind::Cauchy}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::Input, "unknown threshold distribution '" + std::string(name) + "'");
}

ThresholdDist::ThresholdDist(DistKind kind, double location, double scale, double shape)
    : kind_(kind), location_(location), scale_(scale), shape_(shape) {
  require(std::isfinite(location), "threshold location must be finite");
  require(std::isfinite(scale) && scale > 0.0, "threshold scale must be positive");
  require(std::isfinite(shape), "threshold shape must be finite");
  if (kind == DistKind::ExponentiatedUniform) {
    require(shape > 1.0, "exponentiated uniform shape k must exceed 1");
  }
}

ThresholdDist ThresholdDist::uniform(double tau, double zeta) {
  return {DistKind::Uniform, tau, zeta, 0.0};
}
ThresholdDist ThresholdDist::epanechnikov(double tau, double zeta) {
  return {DistKind::Epanechnikov, tau, zeta, 0.0};
}
ThresholdDist ThresholdDist::biweight(double tau, double zeta) {
  return {DistKind::Biweight, tau, zeta, 0.0};
}
ThresholdDist ThresholdDist::logistic(double tau, double s) {
  return {DistKind::Logistic, tau, s, 0.0};
}
ThresholdDist ThresholdDist::normal(double tau, double sd) {
  return {DistKind::Normal, tau, sd, 0.0};
}
ThresholdDist ThresholdDist::skew_normal(double xi, double scale, double lambda) {
  return {DistKind::SkewNormal, xi, scale, lambda};
}
ThresholdDist ThresholdDist::skew_normal_with_mean(double tau, double scale, double lambda) {
  const double xi = tau - scale * skew_delta(lambda) * std::sqrt(2.0 / kPi);
  return {DistKind::SkewNormal, xi, scale, lambda};
}
ThresholdDist ThresholdDist::t2(double tau, double gamma) {
  return {DistKind::NonStandardT2, tau, gamma, 0.0};
}
ThresholdDist ThresholdDist::exponentiated_uniform(double tau, double zeta, double k) {
  return {DistKind::ExponentiatedUniform, tau, zeta, k};
}
ThresholdDist ThresholdDist::cauchy(double location, double scale) {
  return {DistKind::Cauchy, location, scale, 0.0};
}

ThresholdDist ThresholdDist::make(DistKind kind, double location, double scale, double shape) {
  if (kind == DistKind::SkewNormal) return skew_normal_with_mean(location, scale, shape);
  if (kind == DistKind::ExponentiatedUniform) return exponentiated_uniform(location, scale, shape);
  return {kind, location, scale, 0.0};
}

bool ThresholdDist::bounded() const {
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::Epanechnikov:
    case DistKind::Biweight:
    case DistKind::ExponentiatedUniform:
      return true;
    default:
      return false;
  }
}

std::pair<double, double> ThresholdDist::support() const {
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::Epanechnikov:
    case DistKind::Biweight:
      return {location_ - scale_, location_ + scale_};
    case DistKind::ExponentiatedUniform:
      return {location_ - (shape_ - 1.0) * scale_, location_ + scale_};
    default:
      return {-kInf, kInf};
  }
}

double ThresholdDist::mean() const {
  require_integrable(*this, "mean");
  if (kind_ == DistKind::SkewNormal) {
    return location_ + scale_ * skew_delta(shape_) * std::sqrt(2.0 / kPi);
  }
  return location_;
}

double pdf(const ThresholdDist& d, double x) {
  const double tau = d.location();
  const double s = d.scale();
  const double z = x - tau;
  switch (d.kind()) {
    case DistKind::Uniform:
      return std::abs(z) <= s ? 0.5 / s : 0.0;
    case DistKind::Epanechnikov:
      return std::abs(z) <= s ? 0.75 * (s * s - z * z) / (s * s * s) : 0.0;
    case DistKind::Biweight: {
      if (std::abs(z) > s) return 0.0;
      const double w = s * s - z * z;
      return 15.0 / 16.0 * w * w / std::pow(s, 5);
    }
    case DistKind::Logistic: {
      const double t = -std::abs(z) / s;
      const double e = std::exp(t);
      return e / (s * (1.0 + e) * (1.0 + e));
    }
    case DistKind::Normal:
      return normal_pdf(z / s) / s;
    case DistKind::SkewNormal: {
      const double t = z / s;
      return 2.0 / s * normal_pdf(t) * normal_cdf(d.shape() * t);
    }
    case DistKind::NonStandardT2:
      return 0.5 * s * std::pow(z * z + s, -1.5);
    case DistKind::ExponentiatedUniform: {
      const auto [lo, hi] = d.support();
      if (x <= lo || x > hi) return 0.0;
      const double k = d.shape();
      const double width = hi - lo;
      return (k - 1.0) / width * std::pow((x - lo) / width, k - 2.0);
    }
    case DistKind::Cauchy:
      return 1.0 / (kPi * s * (1.0 + (z / s) * (z / s)));
  }
  return 0.0;
}

double cdf(const ThresholdDist& d, double x) {
  const double tau = d.location();
  const double s = d.scale();
  const double z = x - tau;
  switch (d.kind()) {
    case DistKind::Uniform:
      if (z <= -s) return 0.0;
      if (z >= s) return 1.0;
      return (z + s) / (2.0 * s);
    case DistKind::Epanechnikov: {
      if (z <= -s) return 0.0;
      if (z >= s) return 1.0;
      const double u = z / s;
      return 0.5 + 0.75 * u - 0.25 * u * u * u;
    }
    case DistKind::Biweight: {
      if (z <= -s) return 0.0;
      if (z >= s) return 1.0;
      const double u = z / s;
      const double u3 = u * u * u;
      return 0.5 + 15.0 / 16.0 * u - 5.0 / 8.0 * u3 + 3.0 / 16.0 * u3 * u * u;
    }
    case DistKind::Logistic: {
      const double t = z / s;
      if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
      const double e = std::exp(t);
      return e / (1.0 + e);
    }
    case DistKind::Normal:
      return normal_cdf(z / s);
    case DistKind::SkewNormal: {
      const double t = z / s;
      const double value = normal_cdf(t) - 2.0 * special::owens_t(t, d.shape());
      return std::clamp(value, 0.0, 1.0);
    }
    case DistKind::NonStandardT2: {
      const double r = std::sqrt(z * z + s);
      if (z >= 0.0) return 0.5 * (1.0 + z / r);
      // 1 + z/r = s / (r (r - z)) avoids cancellation in the lower tail.
      return 0.5 * s / (r * (r - z));
    }
    case DistKind::ExponentiatedUniform: {
      const auto [lo, hi] = d.support();
      if (x <= lo) return 0.0;
      if (x >= hi) return 1.0;
      return std::pow((x - lo) / (hi - lo), d.shape() - 1.0);
    }
    case DistKind::Cauchy: {
      const double t = z / s;
      if (t < 0.0) return std::atan(-1.0 / t) / kPi;
      if (t == 0.0) return 0.5;
      return 1.0 - std::atan(1.0 / t) / kPi;
    }
  }
  return 0.0;
}

double lower_partial_expectation(const ThresholdDist& d, double x) {
  require_integrable(d, "lower_partial_expectation");
  const double tau = d.location();
  const double s = d.scale();
  const double z = x - tau;
  switch (d.kind()) {
    case DistKind::Uniform:
      if (std::abs(z) >= s) return 0.0;
      return (z * z - s * s) / (4.0 * s);
    case DistKind::Epanechnikov: {
      if (std::abs(z) >= s) return 0.0;
      const double w = s * s - z * z;
      return -3.0 * w * w / (16.0 * s * s * s);
    }
    case DistKind::Biweight: {
      if (std::abs(z) >= s) return 0.0;
      const double w = s * s - z * z;
      return -5.0 * w * w * w / (32.0 * std::pow(s, 5));
    }
    case DistKind::Logistic: {
      const double t = z / s;
      if (t < 0.0) {
        const double e = std::exp(t);
        return z * e / (1.0 + e) - s * std::log1p(e);
      }
      const double e = std::exp(-t);
      return -z * e / (1.0 + e) - s * std::log1p(e);
    }
    case DistKind::Normal:
      return -s * normal_pdf(z / s);
    case DistKind::SkewNormal: {
      const double lambda = d.shape();
      const double t = z / s;
      const double root = std::sqrt(1.0 + lambda * lambda);
      const double about_xi =
          s * (-2.0 * normal_pdf(t) * normal_cdf(lambda * t) +
               2.0 * lambda / root * special::kInvSqrt2Pi * normal_cdf(root * t));
      const double mean_offset = d.mean() - tau;
      return std::min(0.0, about_xi - mean_offset * cdf(d, x));
    }
    case DistKind::NonStandardT2:
      return -0.5 * s / std::sqrt(z * z + s);
    case DistKind::ExponentiatedUniform: {
      const auto [lo, hi] = d.support();
      if (x <= lo || x >= hi) return 0.0;
      const double k = d.shape();
      const double width = hi - lo;
      const double integral_of_cdf = std::pow(x - lo, k) / (k * std::pow(width, k - 1.0));
      return z * cdf(d, x) - integral_of_cdf;
    }
    case DistKind::Cauchy:
      break;
  }
  return 0.0;
}

double quantile(const ThresholdDist& d, double p) {
  require_integrable(d, "quantile");
  require(p >= 0.0 && p <= 1.0, "quantile: p must lie in [0, 1]");
  const double tau = d.location();
  const double s = d.scale();
  switch (d.kind()) {
    case DistKind::Uniform:
      return tau + s * (2.0 * p - 1.0);
    case DistKind::Epanechnikov:
      return tau + 2.0 * s * std::sin(std::asin(2.0 * p - 1.0) / 3.0);
    case DistKind::Biweight:
      return invert_cdf(d, p, tau - s, tau + s);
    case DistKind::Logistic:
      return tau + s * std::log(p / (1.0 - p));
    case DistKind::Normal:
      return tau + s * special::normal_quantile(p);
    case DistKind::NonStandardT2: {
      const double v = 2.0 * p - 1.0;
      return tau + v * std::sqrt(s) / std::sqrt(1.0 - v * v);
    }
    case DistKind::ExponentiatedUniform: {
      const auto [lo, hi] = d.support();
      return lo + (hi - lo) * std::pow(p, 1.0 / (d.shape() - 1.0));
    }
    case DistKind::SkewNormal: {
      if (p <= 0.0) return -kInf;
      if (p >= 1.0) return kInf;
      double lo = d.mean() - s;
      double hi = d.mean() + s;
      while (cdf(d, lo) > p) lo -= 2.0 * (hi - lo);
      while (cdf(d, hi) < p) hi += 2.0 * (hi - lo);
      return invert_cdf(d, p, lo, hi);
    }
    case DistKind::Cauchy:
      break;
  }
  return tau;
}

Eigen::ArrayXd pdf(const ThresholdDist& dist, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  return x.unaryExpr([&dist](double v) { return pdf(dist, v); });
}

Eigen::ArrayXd cdf(const ThresholdDist& dist, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  return x.unaryExpr([&dist](double v) { return cdf(dist, v); });
}

}  // namespace bentcable
