#ifndef BENTCABLE_INFERENCE_HPP
#define BENTCABLE_INFERENCE_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bentcable/estimation.hpp"

namespace bentcable {

struct ComparisonRow {
  std::string label;
  double loglik = 0.0;
  double aic = 0.0;
  int n_params = 0;
  double relative_likelihood = 1.0;  ///< exp((AIC_min - AIC) / 2)
};

/// Rows sorted by AIC, ties keeping input order.
using ComparisonTable = std::vector<ComparisonRow>;

struct LrtResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

struct ConfidenceRegion {
  double threshold = 0.0;  ///< nodes with D > threshold are inside
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  /// The chi-squared(2) calibration is asymptotic and may under-cover.
  bool approximate = true;
};

struct LackOfFit {
  double f = 0.0;
  int df_lof = 0;
  int df_pe = 0;
  double ss_lof = 0.0;
  double ss_pe = 0.0;
  double p_value = 1.0;
};

/// Throws MismatchedData when fits come from different datasets, Configuration when empty.
ComparisonTable compare(const std::vector<FitResult>& fits);
/// Relative likelihoods from raw AIC values, in input order.
std::vector<double> relative_likelihood(const std::vector<double>& aics);

/// Throws OptimizationFailure when the nested fit beats the full one by more than 1e-6.
LrtResult lrt(const FitResult& full, const FitResult& nested, int df);
LrtResult lrt(double loglik_full, double loglik_nested, int df);

ConfidenceRegion confidence_region(const Eigen::MatrixXd& deviance, double level = 0.95);

/// Pure-error / lack-of-fit split of the residuals; `p` is the mean-function parameter count.
/// Throws InsufficientReplication when no x is replicated or g <= p.
LackOfFit lack_of_fit(const Dataset& data, const Eigen::VectorXd& fitted, int p);
LackOfFit lack_of_fit(const Dataset& data, const FitResult& fit);

/// Exact zone for bounded thresholds; otherwise the (q_lo, q_hi) threshold quantiles.
std::pair<double, double> transition_zone(const BentKind& kind, const BentParams& bent,
                                          double q_lo = 0.025, double q_hi = 0.975);
std::pair<double, double> transition_zone(const FitResult& fit, double q_lo = 0.025,
                                          double q_hi = 0.975);

}  // namespace bentcable

#endif  // BENTCABLE_INFERENCE_HPP
