#include "bentcable/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bentcable/error.hpp"
#include "bentcable/special.hpp"

namespace bentcable {

std::vector<double> relative_likelihood(const std::vector<double>& aics) {
  if (aics.empty()) return {};
  const double best = *std::min_element(aics.begin(), aics.end());
  std::vector<double> out;
  out.reserve(aics.size());
  for (double a : aics) out.push_back(std::exp(0.5 * (best - a)));
  return out;
}

ComparisonTable compare(const std::vector<FitResult>& fits) {
  if (fits.empty()) throw Error(ErrorKind::Configuration, "nothing to compare");
  for (const auto& f : fits) {
    if (f.data_fingerprint != fits.front().data_fingerprint || f.n != fits.front().n) {
      throw Error(ErrorKind::MismatchedData, "fits were made on different datasets");
    }
  }
  std::vector<double> aics;
  for (const auto& f : fits) aics.push_back(f.aic);
  const auto pr = relative_likelihood(aics);
  ComparisonTable table;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    table.push_back({label(fits[i].kind), fits[i].loglik, fits[i].aic, fits[i].n_params, pr[i]});
  }
  std::stable_sort(table.begin(), table.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.aic < b.aic; });
  return table;
}

LrtResult lrt(double loglik_full, double loglik_nested, int df) {
  if (df < 1) throw Error(ErrorKind::Configuration, "LRT needs df >= 1");
  const double stat = 2.0 * (loglik_full - loglik_nested);
  if (stat < -2e-6) {
    throw Error(ErrorKind::OptimizationFailure,
                "nested model fits better than the full model; the full optimization did not "
                "converge to its maximum");
  }
  LrtResult r;
  r.statistic = std::max(stat, 0.0);
  r.df = df;
  r.p_value = special::chi_squared_upper_tail(r.statistic, df);
  return r;
}

LrtResult lrt(const FitResult& full, const FitResult& nested, int df) {
  if (full.data_fingerprint != nested.data_fingerprint || full.n != nested.n) {
    throw Error(ErrorKind::MismatchedData, "LRT fits were made on different datasets");
  }
  if (nested.n_params >= full.n_params) {
    throw Error(ErrorKind::Configuration, "nested model must have fewer parameters");
  }
  return lrt(full.loglik, nested.loglik, df);
}

ConfidenceRegion confidence_region(const Eigen::MatrixXd& deviance, double level) {
  ConfidenceRegion r;
  r.threshold = -special::chi_squared_quantile(level, 2.0);
  // NaN nodes compare false and stay outside.
  r.mask = deviance.array() > r.threshold;
  return r;
}

LackOfFit lack_of_fit(const Dataset& data, const Eigen::VectorXd& fitted, int p) {
  if (fitted.size() != data.size()) {
    throw Error(ErrorKind::MismatchedData, "fitted values and data differ in length");
  }
  const auto groups = data.replicate_groups();
  const auto n = static_cast<int>(data.size());
  const auto g = static_cast<int>(groups.size());
  if (n == g) throw Error(ErrorKind::InsufficientReplication, "no replicated x values");
  if (g <= p) {
    throw Error(ErrorKind::InsufficientReplication,
                "distinct x count must exceed the mean-function parameter count");
  }
  LackOfFit r;
  for (const auto& idx : groups) {
    double mean = 0.0;
    for (auto i : idx) mean += data.y()[i];
    mean /= static_cast<double>(idx.size());
    for (auto i : idx) {
      r.ss_pe += (data.y()[i] - mean) * (data.y()[i] - mean);
      r.ss_lof += (mean - fitted[i]) * (mean - fitted[i]);
    }
  }
  r.df_lof = g - p;
  r.df_pe = n - g;
  if (r.ss_lof == 0.0) {
    r.f = 0.0;
    r.p_value = 1.0;
  } else if (r.ss_pe == 0.0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f = (r.ss_lof / r.df_lof) / (r.ss_pe / r.df_pe);
    r.p_value = special::f_upper_tail(r.f, r.df_lof, r.df_pe);
  }
  return r;
}

LackOfFit lack_of_fit(const Dataset& data, const FitResult& fit) {
  const Eigen::VectorXd fitted = eta(fit.kind, fit.params, data.x().array()).matrix();
  return lack_of_fit(data, fitted, fit.n_params - 1);
}

std::pair<double, double> transition_zone(const BentKind& kind, const BentParams& bent,
                                          double q_lo, double q_hi) {
  if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0)) {
    throw Error(ErrorKind::Configuration, "quantiles must satisfy 0 < lo < hi < 1");
  }
  if (kind.name == ModelName::Lch) {
    // Lch(gamma*) is Lne(gamma* / 2) shifted vertically: Logistic threshold, s = gamma* / 2.
    const auto d = ThresholdDist::logistic(bent.tau, 0.5 * bent.scale);
    return {quantile(d, q_lo), quantile(d, q_hi)};
  }
  const BentFamily fam = BentFamily::make(kind, bent);
  if (auto zone = fam.transition_zone()) return *zone;
  return {quantile(*fam.dist(), q_lo), quantile(*fam.dist(), q_hi)};
}

std::pair<double, double> transition_zone(const FitResult& fit, double q_lo, double q_hi) {
  return transition_zone(fit.kind, fit.params.bents.front(), q_lo, q_hi);
}

}  // namespace bentcable
