#ifndef BENTCABLE_BENT_HPP
#define BENTCABLE_BENT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "bentcable/threshold.hpp"

namespace bentcable {

enum class ModelName { BC, GBC, EBC, QBC, NBC, SNBC, Tanh, Lne, Lch, Hyp, Generic };

/// Construction route for the smooth replacement of max{x - tau, 0}.
enum class Route {
  ExtBC,  ///< polynomial bent psi* on [tau - zeta, tau + zeta]
  SMM,    ///< state mixture: (x - tau) F_T(x)
  ExpBC,  ///< expected bend: E[max{x - T, 0}]
};

enum class Shape { Transitional, Hyperbolic };

std::string_view to_string(ModelName name);
std::string_view to_string(Route route);
std::string_view to_string(Shape shape);

/// A model family and construction route, without parameter values.
/// `generic_dist` is only read when name == Generic.
struct BentKind {
  ModelName name = ModelName::BC;
  Route route = Route::ExtBC;
  DistKind generic_dist = DistKind::Normal;

  friend bool operator==(const BentKind&, const BentKind&) = default;
};

/// Parses "BC", "G-BC", "E-BC", "Q-BC", "N-BC", "SN-BC", "Tanh", "Lne", "Lch", "Hyp",
/// optionally suffixed ":ExtBC" / ":SMM" / ":ExpBC", or a generic "SMM:<Dist>" / "ExpBC:<Dist>".
BentKind parse_bent_kind(std::string_view text);
std::string label(const BentKind& kind);

/// Default route for a named family (its first supported construction).
Route default_route(ModelName name);
bool route_supported(ModelName name, Route route);

/// Throws Route when (name, route) is not a supported cell, NonIntegrable for a
/// generic family over a Cauchy threshold.
void validate(const BentKind& kind);

/// Parameters of one bend. `tau` is always the change point E[T].
/// `scale` is zeta for bounded kinds and gamma otherwise (gamma = 2 sigma^2 for Hyp,
/// gamma* for Lch). `shape` is lambda for SN-BC and k for G-BC.
struct BentParams {
  double tau = 0.0;
  double scale = 1.0;
  double shape = 0.0;

  friend bool operator==(const BentParams&, const BentParams&) = default;
};

/// Number of nonlinear parameters per bend (2, or 3 when a shape is free).
int bent_param_count(const BentKind& kind);
/// Shape value used when a family needs one and none is given (k = 2, lambda = 0).
double default_shape(const BentKind& kind);
/// Maps a length in x-units to the family's scale parameter (identity except Hyp,
/// whose gamma is 2 sigma^2).
double scale_from_length(const BentKind& kind, double length);
double length_from_scale(const BentKind& kind, double scale);

/// A bend: family, route, threshold distribution and parameters.
class BentFamily {
 public:
  static BentFamily make(const BentKind& kind, const BentParams& params);
  /// Unnamed family built directly from a distribution (SMM or ExpBC route).
  static BentFamily from_dist(Route route, const ThresholdDist& dist);

  const BentKind& kind() const { return kind_; }
  ModelName name() const { return kind_.name; }
  Route route() const { return kind_.route; }
  const BentParams& params() const { return params_; }
  double tau() const { return params_.tau; }
  /// Absent only for Lch.
  const std::optional<ThresholdDist>& dist() const { return dist_; }
  /// Exact transition zone G for bounded-support families.
  std::optional<std::pair<double, double>> transition_zone() const;

 private:
  BentFamily(BentKind kind, BentParams params, std::optional<ThresholdDist> dist);

  BentKind kind_;
  BentParams params_;
  std::optional<ThresholdDist> dist_;
};

/// Smooth replacement T(x, phi) for max{x - tau, 0}.
double smooth_max(const BentFamily& family, double x);
Eigen::ArrayXd smooth_max(const BentFamily& family, const Eigen::Ref<const Eigen::ArrayXd>& x);

/// trn(x - tau) = 2 F_T(x) - 1 (tanh form for Tanh). Route error unless SMM.
double transitional_fn(const BentFamily& family, double x);

/// hyp(x - tau). Diagnostic only: throws RemovableSingularity at x == tau.
double hyperbolic_fn(const BentFamily& family, double x);

/// Smooth approximation of |x - tau| implied by the family, 2 smooth_max - (x - tau).
double smooth_modulus(const BentFamily& family, double x);

/// Vertical displacement between Lch(gamma*) and Lne(gamma*/2): -gamma* log 2.
double lch_shift(double gamma_star);

Shape classify_shape(const BentKind& kind);
inline Shape classify_shape(const BentFamily& family) { return classify_shape(family.kind()); }

/// Expected-bend (hyperbolic) counterpart over the same threshold distribution.
BentFamily corrected_transitional(const BentFamily& family);

}  // namespace bentcable

#endif  // BENTCABLE_BENT_HPP
