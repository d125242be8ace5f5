#include "bentcable/bent.hpp"

#include <cmath>
#include <string>

#include "bentcable/error.hpp"
#include "bentcable/special.hpp"

namespace bentcable {

namespace {

struct NameEntry {
  ModelName name;
  std::string_view label;
};

constexpr NameEntry kNames[] = {
    {ModelName::BC, "BC"},     {ModelName::GBC, "G-BC"},   {ModelName::EBC, "E-BC"},
    {ModelName::QBC, "Q-BC"},  {ModelName::NBC, "N-BC"},   {ModelName::SNBC, "SN-BC"},
    {ModelName::Tanh, "Tanh"}, {ModelName::Lne, "Lne"},    {ModelName::Lch, "Lch"},
    {ModelName::Hyp, "Hyp"},   {ModelName::Generic, "Generic"},
};

std::optional<Route> parse_route(std::string_view text) {
  if (text == "ExtBC") return Route::ExtBC;
  if (text == "SMM") return Route::SMM;
  if (text == "ExpBC") return Route::ExpBC;
  return std::nullopt;
}

// |z| + 2 g log1p(exp(-|z| / g)) == 2 g log(exp(-z / 2g) + exp(z / 2g)).
double lne(double z, double gamma) {
  return std::abs(z) + 2.0 * gamma * std::log1p(std::exp(-std::abs(z) / gamma));
}

// g log cosh(z / g), evaluated without overflow.
double lch(double z, double gamma_star) {
  return std::abs(z) + gamma_star * std::log1p(std::exp(-2.0 * std::abs(z) / gamma_star)) -
         gamma_star * special::kLn2;
}

double expected_max(const ThresholdDist& dist, double x) {
  const double z = x - dist.mean();
  return z * cdf(dist, x) - lower_partial_expectation(dist, x);
}

// Region form shared by the polynomial (Ext. BC) bends.
template <typename Poly>
double polynomial_bent(double z, double zeta, Poly psi) {
  if (z < -zeta) return 0.0;
  if (z > zeta) return z;
  return psi(z);
}

}  // namespace

std::string_view to_string(ModelName name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.label;
  }
  return "?";
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::ExtBC: return "ExtBC";
    case Route::SMM: return "SMM";
    case Route::ExpBC: return "ExpBC";
  }
  return "?";
}

std::string_view to_string(Shape shape) {
  return shape == Shape::Transitional ? "Transitional" : "Hyperbolic";
}

Route default_route(ModelName name) {
  switch (name) {
    case ModelName::BC:
    case ModelName::EBC:
    case ModelName::QBC:
      return Route::ExtBC;
    case ModelName::Tanh:
      return Route::SMM;
    default:
      return Route::ExpBC;
  }
}

bool route_supported(ModelName name, Route route) {
  switch (name) {
    case ModelName::Tanh:
      return route == Route::SMM;
    case ModelName::BC:
    case ModelName::EBC:
      return route == Route::ExtBC || route == Route::ExpBC;
    case ModelName::QBC:
      return route == Route::ExtBC || route == Route::SMM;
    case ModelName::Generic:
      return route == Route::SMM || route == Route::ExpBC;
    default:
      return route == Route::ExpBC;
  }
}

void validate(const BentKind& kind) {
  if (!route_supported(kind.name, kind.route)) {
    throw Error(ErrorKind::Route, std::string(to_string(kind.name)) + " has no " +
                                      std::string(to_string(kind.route)) + " construction");
  }
  if (kind.name == ModelName::Generic && kind.generic_dist == DistKind::Cauchy) {
    throw Error(ErrorKind::NonIntegrable,
                "a Cauchy threshold is not integrable; condition (i) fails and no smooth "
                "piecewise-linear family can be built from it");
  }
}

BentKind parse_bent_kind(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view tail =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  if (auto route = parse_route(head)) {
    if (tail.empty()) throw Error(ErrorKind::Input, "generic family needs a distribution");
    BentKind kind{ModelName::Generic, *route, parse_dist_kind(tail)};
    validate(kind);
    return kind;
  }
  for (const auto& e : kNames) {
    if (e.label == head && e.name != ModelName::Generic) {
      BentKind kind{e.name, default_route(e.name), DistKind::Normal};
      if (!tail.empty()) {
        auto route = parse_route(tail);
        if (!route) throw Error(ErrorKind::Input, "unknown route '" + std::string(tail) + "'");
        kind.route = *route;
      }
      validate(kind);
      return kind;
    }
  }
  if (head == "Cauchy") {
    throw Error(ErrorKind::NonIntegrable,
                "a Cauchy threshold is not integrable; no valid transitional approximation");
  }
  throw Error(ErrorKind::Input, "unknown model family '" + std::string(text) + "'");
}

std::string label(const BentKind& kind) {
  if (kind.name == ModelName::Generic) {
    return std::string(to_string(kind.route)) + ":" + std::string(to_string(kind.generic_dist));
  }
  std::string out(to_string(kind.name));
  if (kind.route != default_route(kind.name)) out += ":" + std::string(to_string(kind.route));
  return out;
}

int bent_param_count(const BentKind& kind) {
  switch (kind.name) {
    case ModelName::SNBC:
    case ModelName::GBC:
      return 3;
    case ModelName::Generic:
      return (kind.generic_dist == DistKind::SkewNormal ||
              kind.generic_dist == DistKind::ExponentiatedUniform)
                 ? 3
                 : 2;
    default:
      return 2;
  }
}

double default_shape(const BentKind& kind) {
  if (kind.name == ModelName::GBC ||
      (kind.name == ModelName::Generic && kind.generic_dist == DistKind::ExponentiatedUniform)) {
    return 2.0;
  }
  return 0.0;
}

double scale_from_length(const BentKind& kind, double length) {
  const bool area = kind.name == ModelName::Hyp ||
                    (kind.name == ModelName::Generic && kind.generic_dist == DistKind::NonStandardT2);
  return area ? 2.0 * length * length : length;
}

double length_from_scale(const BentKind& kind, double scale) {
  const bool area = kind.name == ModelName::Hyp ||
                    (kind.name == ModelName::Generic && kind.generic_dist == DistKind::NonStandardT2);
  return area ? std::sqrt(0.5 * scale) : scale;
}

BentFamily::BentFamily(BentKind kind, BentParams params, std::optional<ThresholdDist> dist)
    : kind_(kind), params_(params), dist_(std::move(dist)) {}

BentFamily BentFamily::make(const BentKind& kind, const BentParams& p) {
  validate(kind);
  if (!(p.scale > 0.0) || !std::isfinite(p.scale) || !std::isfinite(p.tau)) {
    throw Error(ErrorKind::ParameterDomain, "bent scale must be positive and tau finite");
  }
  std::optional<ThresholdDist> dist;
  switch (kind.name) {
    case ModelName::BC: dist = ThresholdDist::uniform(p.tau, p.scale); break;
    case ModelName::EBC: dist = ThresholdDist::epanechnikov(p.tau, p.scale); break;
    case ModelName::QBC: dist = ThresholdDist::biweight(p.tau, p.scale); break;
    case ModelName::GBC: dist = ThresholdDist::exponentiated_uniform(p.tau, p.scale, p.shape); break;
    case ModelName::NBC: dist = ThresholdDist::normal(p.tau, p.scale); break;
    case ModelName::SNBC: dist = ThresholdDist::skew_normal_with_mean(p.tau, p.scale, p.shape); break;
    case ModelName::Tanh: dist = ThresholdDist::logistic(p.tau, 0.5 * p.scale); break;
    case ModelName::Lne: dist = ThresholdDist::logistic(p.tau, p.scale); break;
    case ModelName::Hyp: dist = ThresholdDist::t2(p.tau, p.scale); break;
    case ModelName::Lch: break;
    case ModelName::Generic:
      dist = ThresholdDist::make(kind.generic_dist, p.tau, p.scale, p.shape);
      break;
  }
  return BentFamily(kind, p, std::move(dist));
}

BentFamily BentFamily::from_dist(Route route, const ThresholdDist& dist) {
  BentKind kind{ModelName::Generic, route, dist.kind()};
  validate(kind);
  BentParams p{dist.mean(), dist.scale(), dist.shape()};
  return BentFamily(kind, p, dist);
}

std::optional<std::pair<double, double>> BentFamily::transition_zone() const {
  if (dist_ && dist_->bounded()) return dist_->support();
  return std::nullopt;
}

double smooth_max(const BentFamily& f, double x) {
  const double z = x - f.tau();
  const double s = f.params().scale;
  switch (f.name()) {
    case ModelName::BC:
      if (f.route() == Route::ExtBC) {
        return polynomial_bent(z, s, [s](double v) { return (v + s) * (v + s) / (4.0 * s); });
      }
      break;
    case ModelName::EBC:
      if (f.route() == Route::ExtBC) {
        return polynomial_bent(z, s, [s](double v) {
          const double v2 = v * v;
          return -v2 * v2 / (16.0 * s * s * s) + 3.0 * v2 / (8.0 * s) + 0.5 * v + 3.0 * s / 16.0;
        });
      }
      break;
    case ModelName::QBC:
      if (f.route() == Route::ExtBC) {
        return polynomial_bent(z, s, [s](double v) {
          const double v2 = v * v;
          return 0.5 * v + 15.0 * v2 / (16.0 * s) - 5.0 * v2 * v2 / (8.0 * s * s * s) +
                 3.0 * v2 * v2 * v2 / (16.0 * std::pow(s, 5));
        });
      }
      break;
    case ModelName::GBC: {
      // Khan-Kar form: zeta [z + (k-1) zeta]^k / (k zeta)^k on (tau - (k-1) zeta, tau + zeta].
      const double k = f.params().shape;
      if (z <= -(k - 1.0) * s) return 0.0;
      if (z > s) return z;
      return s * std::pow((z + (k - 1.0) * s) / (k * s), k);
    }
    case ModelName::Tanh:
      return 0.5 * z * (1.0 + std::tanh(z / s));
    case ModelName::Lne:
      return 0.5 * (lne(z, s) + z);
    case ModelName::Lch:
      return 0.5 * (lch(z, s) + z);
    case ModelName::Hyp: {
      const double r = std::sqrt(z * z + s);
      return z >= 0.0 ? 0.5 * (r + z) : 0.5 * s / (r - z);
    }
    default:
      break;
  }
  const ThresholdDist& dist = *f.dist();
  if (f.route() == Route::SMM) return z * cdf(dist, x);
  return expected_max(dist, x);
}

Eigen::ArrayXd smooth_max(const BentFamily& family, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  return x.unaryExpr([&family](double v) { return smooth_max(family, v); });
}

double transitional_fn(const BentFamily& f, double x) {
  if (f.route() != Route::SMM && !route_supported(f.name(), Route::SMM)) {
    throw Error(ErrorKind::Route, std::string(to_string(f.name())) +
                                      " is hyperbolic-only; it has no transitional function");
  }
  if (f.name() == ModelName::Tanh) return std::tanh((x - f.tau()) / f.params().scale);
  return 2.0 * cdf(*f.dist(), x) - 1.0;
}

double hyperbolic_fn(const BentFamily& f, double x) {
  if (f.route() != Route::ExpBC && !route_supported(f.name(), Route::ExpBC)) {
    throw Error(ErrorKind::Route, std::string(to_string(f.name())) + ":" +
                                      std::string(to_string(f.route())) +
                                      " has no hyperbolic (expected-bend) form");
  }
  const double z = x - f.tau();
  if (z == 0.0) {
    throw Error(ErrorKind::RemovableSingularity,
                "hyp(x - tau) is undefined at x = tau; evaluate smooth_max instead");
  }
  const double s = f.params().scale;
  switch (f.name()) {
    case ModelName::Hyp: return std::sqrt(z * z + s) / z;
    case ModelName::Lne: return lne(z, s) / z;
    case ModelName::Lch: return lch(z, s) / z;
    default: break;
  }
  const ThresholdDist& dist = *f.dist();
  return 2.0 * cdf(dist, x) - 1.0 - 2.0 * lower_partial_expectation(dist, x) / z;
}

double smooth_modulus(const BentFamily& family, double x) {
  return 2.0 * smooth_max(family, x) - (x - family.tau());
}

double lch_shift(double gamma_star) {
  if (!(gamma_star > 0.0)) throw Error(ErrorKind::ParameterDomain, "gamma* must be positive");
  return -gamma_star * special::kLn2;
}

Shape classify_shape(const BentKind& kind) {
  switch (kind.name) {
    case ModelName::Tanh:
    case ModelName::QBC:
      return Shape::Transitional;
    case ModelName::Generic:
      return kind.route == Route::ExpBC ? Shape::Hyperbolic : Shape::Transitional;
    default:
      return Shape::Hyperbolic;
  }
}

BentFamily corrected_transitional(const BentFamily& f) {
  if (f.route() == Route::ExpBC) return f;
  if (!f.dist() || !f.dist()->integrable()) {
    throw Error(ErrorKind::NonIntegrable, "correction needs an integrable threshold");
  }
  switch (f.name()) {
    case ModelName::Tanh:
      // tanh(z / g) pairs with Logistic(s = g / 2); its expected bend is Lne(g / 2).
      return BentFamily::make({ModelName::Lne, Route::ExpBC, DistKind::Logistic},
                              {f.tau(), 0.5 * f.params().scale, 0.0});
    case ModelName::QBC:
    case ModelName::Generic:
      // The quartic cell has no named ExpBC form; its hyperbolic version is generic.
      return BentFamily::from_dist(Route::ExpBC, *f.dist());
    default: {
      BentKind kind = f.kind();
      kind.route = Route::ExpBC;
      return BentFamily::make(kind, f.params());
    }
  }
}

}  // namespace bentcable
