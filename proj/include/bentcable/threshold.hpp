#ifndef BENTCABLE_THRESHOLD_HPP
#define BENTCABLE_THRESHOLD_HPP

#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace bentcable {

enum class DistKind {
  Uniform,
  Epanechnikov,
  Biweight,
  Logistic,
  Normal,
  SkewNormal,
  NonStandardT2,
  ExponentiatedUniform,
  Cauchy,
};

std::string_view to_string(DistKind kind);
DistKind parse_dist_kind(std::string_view name);

/// Distribution of a random phase-transition threshold T.
///
/// Parameter conventions per kind:
///   - Uniform, Epanechnikov, Biweight: location tau, half-width zeta.
///   - Logistic: location tau, logistic scale s, F(x) = 1 / (1 + exp(-(x - tau) / s)).
///   - Normal: location tau, standard deviation.
///   - SkewNormal: location xi, scale, shape lambda. mean() is the change point tau.
///   - NonStandardT2: location tau, scale gamma = 2 sigma^2 (t with 2 degrees of freedom),
///     F(x) = (1 + (x - tau) / sqrt((x - tau)^2 + gamma)) / 2.
///   - ExponentiatedUniform: location tau, zeta, shape k > 1; support
///     [tau - (k - 1) zeta, tau + zeta] with F(x) = ((x - z1) / (k zeta))^(k - 1).
///   - Cauchy: location, scale. Not integrable; only pdf and cdf are defined.
class ThresholdDist {
 public:
  static ThresholdDist uniform(double tau, double zeta);
  static ThresholdDist epanechnikov(double tau, double zeta);
  static ThresholdDist biweight(double tau, double zeta);
  static ThresholdDist logistic(double tau, double s);
  static ThresholdDist normal(double tau, double sd);
  static ThresholdDist skew_normal(double xi, double scale, double lambda);
  /// Skew-normal whose mean equals tau.
  static ThresholdDist skew_normal_with_mean(double tau, double scale, double lambda);
  static ThresholdDist t2(double tau, double gamma);
  static ThresholdDist exponentiated_uniform(double tau, double zeta, double k);
  static ThresholdDist cauchy(double location, double scale);

  /// Generic constructor used by the CLI and by generic families. For SkewNormal
  /// `location` is the mean (tau), matching how bents are parameterized.
  static ThresholdDist make(DistKind kind, double location, double scale, double shape = 0.0);

  DistKind kind() const { return kind_; }
  double location() const { return location_; }
  double scale() const { return scale_; }
  double shape() const { return shape_; }

  bool integrable() const { return kind_ != DistKind::Cauchy; }
  bool bounded() const;
  /// Support [lo, hi]; infinite ends for unbounded kinds.
  std::pair<double, double> support() const;
  /// E[T]. Throws NonIntegrable for Cauchy.
  double mean() const;

 private:
  ThresholdDist(DistKind kind, double location, double scale, double shape);

  DistKind kind_;
  double location_;
  double scale_;
  double shape_;
};

double pdf(const ThresholdDist& dist, double x);
double cdf(const ThresholdDist& dist, double x);
/// int_{-inf}^{x} (T - tau) dF_T(T) with tau = E[T]. Always <= 0.
double lower_partial_expectation(const ThresholdDist& dist, double x);
double quantile(const ThresholdDist& dist, double p);

Eigen::ArrayXd pdf(const ThresholdDist& dist, const Eigen::Ref<const Eigen::ArrayXd>& x);
Eigen::ArrayXd cdf(const ThresholdDist& dist, const Eigen::Ref<const Eigen::ArrayXd>& x);

}  // namespace bentcable

#endif  // BENTCABLE_THRESHOLD_HPP
