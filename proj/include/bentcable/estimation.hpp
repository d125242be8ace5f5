#ifndef BENTCABLE_ESTIMATION_HPP
#define BENTCABLE_ESTIMATION_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bentcable/bent.hpp"
#include "bentcable/model.hpp"

namespace bentcable {

/// Paired observations. Replicate groups are formed by exact x equality.
class Dataset {
 public:
  Dataset() = default;
  /// Throws MismatchedData on length mismatch, Input on empty or non-finite data.
  Dataset(Eigen::VectorXd x, Eigen::VectorXd y);

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  Eigen::Index size() const { return x_.size(); }
  double x_min() const { return x_.minCoeff(); }
  double x_max() const { return x_.maxCoeff(); }
  double range() const { return x_max() - x_min(); }

  /// Index sets sharing an identical x, ordered by x.
  std::vector<std::vector<Eigen::Index>> replicate_groups() const;
  /// FNV-1a over the raw bytes of x then y.
  std::uint64_t fingerprint() const;

 private:
  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
};

struct GAConfig {
  int population = 100;
  int min_generations = 5000;
  int max_generations = 20000;
  int elitism = 2;
  int tournament = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  /// Base mutation step as a fraction of each gene's box width; each draw is further
  /// scaled by 10^(-mutation_decades * U), U ~ Uniform(0, 1).
  double mutation_step = 0.05;
  double mutation_decades = 6.0;
  std::uint64_t seed = 20240101;
  int stagnation_window = 500;
  double stagnation_tol = 1e-10;
  /// Box half-width for tau as a fraction of the x-range.
  double tau_box = 0.2;
  /// Box for the bend length as fractions of the x-range.
  double length_lo = 0.005;
  double length_hi = 0.2;
  double lambda_lo = -30.0;
  double lambda_hi = 30.0;
  double k_lo = 1.1;
  double k_hi = 5.0;

  /// Throws Configuration when out of range.
  void validate() const;
};

/// Per-bend search box. Lengths are in x-units and map to scale via scale_from_length.
struct BentBox {
  double tau_lo = 0.0, tau_hi = 0.0;
  double length_lo = 0.0, length_hi = 0.0;
  double shape_lo = 0.0, shape_hi = 0.0;
  bool has_shape = false;
};

struct OlsResult {
  Eigen::VectorXd coef;  ///< [alpha1, beta1, delta_1, ..., delta_{D-1}]
  Eigen::VectorXd residuals;
  double rss = 0.0;
  double sigma2 = 0.0;
  double loglik = 0.0;
  double condition = 0.0;
};

struct FitResult {
  BentKind kind;
  ParamVector params;
  double loglik = 0.0;
  double aic = 0.0;
  double rss = 0.0;
  int n_params = 0;
  Eigen::Index n = 0;
  std::uint64_t data_fingerprint = 0;
  bool converged = false;
  int generations = 0;
  std::vector<double> trace;  ///< best fitness after each generation
  std::vector<BentBox> box;
};

/// Free parameters including sigma2: 2 + (D - 1) (1 + bent_param_count).
int parameter_count(const BentKind& kind, int phases);

/// Gaussian log-likelihood at params (sigma2 taken from params). Throws ParameterDomain
/// when sigma2 <= 0.
double loglik(const Dataset& data, const BentKind& kind, const ParamVector& params);

double loglik_from_rss(double rss, Eigen::Index n, double sigma2);

/// Columns [1, x, T_1(x), ..., T_{D-1}(x)].
Eigen::MatrixXd build_design(const Dataset& data, const BentKind& kind,
                             const std::vector<BentParams>& bents);

/// Least squares with sigma2 = RSS / n. Throws SingularDesign when the column-scaled
/// design has condition number above 1e12.
OlsResult solve_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);
OlsResult profile_ols(const Dataset& data, const BentKind& kind,
                      const std::vector<BentParams>& bents);

/// Assembles a ParamVector from bents and their profiled OLS solution.
ParamVector assemble(const std::vector<BentParams>& bents, const OlsResult& ols);

/// Abrupt-model grid search over 100 equally spaced change points per bend.
ParamVector grid_init(const Dataset& data, const BentKind& kind, int phases = 2);

std::vector<BentBox> search_box(const Dataset& data, const BentKind& kind,
                                const ParamVector& init, const GAConfig& cfg);

/// GA maximum likelihood over the bent parameters, linear terms profiled out.
FitResult fit(const Dataset& data, const BentKind& kind, const GAConfig& cfg, int phases = 2);

struct DevianceSurface {
  std::vector<double> taus;
  std::vector<double> scales;
  Eigen::MatrixXd values;  ///< values(i, j) at (taus[i], scales[j]); NaN where singular
  double tau_hat = 0.0;
  double scale_hat = 0.0;
};

/// -2 [log L(fit) - log L(beta* | tau, scale)] with the other bent parameters at the fit.
double deviance_at(const Dataset& data, const FitResult& fit, double tau, double scale);

/// Grid over the first bend's GA box (tau, length mapped to scale), endpoints included.
DevianceSurface deviance_surface(const Dataset& data, const FitResult& fit, int n_tau = 40,
                                 int n_scale = 40);

}  // namespace bentcable

#endif  // BENTCABLE_ESTIMATION_HPP
