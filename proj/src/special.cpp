#include "bentcable/special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "bentcable/error.hpp"

namespace bentcable {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::NonIntegrable: return "non-integrable-threshold";
    case ErrorKind::Route: return "route";
    case ErrorKind::RemovableSingularity: return "removable-singularity";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::SingularDesign: return "singular-design";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InsufficientReplication: return "insufficient-replication";
    case ErrorKind::OptimizationFailure: return "optimization-failure";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::MismatchedData: return "mismatched-data";
    case ErrorKind::Input: return "input";
  }
  return "unknown";
}

namespace special {

namespace {

// Domain violations are screened here and reported as Error; boost must never throw.
using Policy = boost::math::policies::policy<boost::math::policies::domain_error<
    boost::math::policies::ignore_error>, boost::math::policies::overflow_error<
    boost::math::policies::ignore_error>>;

}  // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double p) {
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::ParameterDomain, "normal_quantile: p must lie in [0, 1]");
  }
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p, Policy());
}

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double owens_t(double h, double a) { return boost::math::owens_t(h, a, Policy()); }

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorKind::ParameterDomain, "regularized_gamma_p: need a > 0, x >= 0");
  }
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x, Policy());
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorKind::ParameterDomain, "regularized_gamma_q: need a > 0, x >= 0");
  }
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x, Policy());
}

double regularized_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0 || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::ParameterDomain, "regularized_beta: need a, b > 0 and x in [0, 1]");
  }
  return boost::math::ibeta(a, b, x, Policy());
}

double chi_squared_upper_tail(double x, double df) {
  if (df <= 0.0) throw Error(ErrorKind::ParameterDomain, "chi-squared: df must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi_squared_quantile(double level, double df) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::ParameterDomain, "chi-squared quantile: level must lie in (0, 1)");
  }
  if (df <= 0.0) throw Error(ErrorKind::ParameterDomain, "chi-squared: df must be positive");
  return boost::math::quantile(boost::math::chi_squared_distribution<double, Policy>(df), level);
}

double f_upper_tail(double f, double df1, double df2) {
  if (df1 <= 0.0 || df2 <= 0.0) {
    throw Error(ErrorKind::ParameterDomain, "F distribution: degrees of freedom must be positive");
  }
  if (f <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(
      boost::math::fisher_f_distribution<double, Policy>(df1, df2), f));
}

}  // namespace special
}  // namespace bentcable
