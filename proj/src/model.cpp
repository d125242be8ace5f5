#include "bentcable/model.hpp"

#include <algorithm>
#include <string>

#include "bentcable/error.hpp"

namespace bentcable {

void validate(const BentKind& kind, const ParamVector& params) {
  if (params.deltas.empty()) throw Error(ErrorKind::Configuration, "a model needs D >= 2 phases");
  if (params.deltas.size() != params.bents.size()) {
    throw Error(ErrorKind::Configuration, "deltas and bents must have length D - 1");
  }
  for (std::size_t l = 1; l < params.bents.size(); ++l) {
    if (!(params.bents[l - 1].tau < params.bents[l].tau)) {
      throw Error(ErrorKind::Configuration, "change points must be strictly increasing");
    }
  }
  if (params.bents.size() < 2) return;
  const auto fams = bends(kind, params);
  for (std::size_t l = 1; l < fams.size(); ++l) {
    const auto lo = fams[l - 1].transition_zone();
    const auto hi = fams[l].transition_zone();
    if (lo && hi && !(lo->second < hi->first)) {
      throw Error(ErrorKind::Configuration,
                  "transition zones " + std::to_string(l) + " and " + std::to_string(l + 1) +
                      " overlap");
    }
  }
}

std::vector<BentFamily> bends(const BentKind& kind, const ParamVector& params) {
  std::vector<BentFamily> out;
  out.reserve(params.bents.size());
  for (const auto& b : params.bents) out.push_back(BentFamily::make(kind, b));
  return out;
}

double eta(const BentKind& kind, const ParamVector& params, double x) {
  validate(kind, params);
  double value = params.alpha1 + params.beta1 * x;
  const auto fams = bends(kind, params);
  for (std::size_t l = 0; l < fams.size(); ++l) value += params.deltas[l] * smooth_max(fams[l], x);
  return value;
}

Eigen::ArrayXd eta(const BentKind& kind, const ParamVector& params,
                   const Eigen::Ref<const Eigen::ArrayXd>& x) {
  validate(kind, params);
  Eigen::ArrayXd value = params.alpha1 + params.beta1 * x;
  const auto fams = bends(kind, params);
  for (std::size_t l = 0; l < fams.size(); ++l) value += params.deltas[l] * smooth_max(fams[l], x);
  return value;
}

double eta_abrupt(const ParamVector& params, double x) {
  double value = params.alpha1 + params.beta1 * x;
  for (std::size_t l = 0; l < params.deltas.size(); ++l) {
    value += params.deltas[l] * std::max(x - params.bents[l].tau, 0.0);
  }
  return value;
}

Eigen::ArrayXd eta_abrupt(const ParamVector& params, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  Eigen::ArrayXd value = params.alpha1 + params.beta1 * x;
  for (std::size_t l = 0; l < params.deltas.size(); ++l) {
    value += params.deltas[l] * (x - params.bents[l].tau).max(0.0);
  }
  return value;
}

SignFormParams to_sign_form(const ParamVector& params) {
  if (params.deltas.size() != 1 || params.bents.size() != 1) {
    throw Error(ErrorKind::Configuration, "the sign formulation is defined for D = 2 only");
  }
  const double tau = params.bents[0].tau;
  const double beta2 = params.beta1 + params.deltas[0];
  return {params.alpha1 + params.beta1 * tau, 0.5 * (params.beta1 + beta2),
          0.5 * (beta2 - params.beta1), tau};
}

ParamVector from_sign_form(const SignFormParams& sign, const BentParams& bent, double sigma2) {
  ParamVector p;
  p.beta1 = sign.theta1 - sign.theta2;
  p.alpha1 = sign.theta0 - p.beta1 * sign.tau;
  p.deltas = {2.0 * sign.theta2};
  p.bents = {bent};
  p.bents[0].tau = sign.tau;
  p.sigma2 = sigma2;
  return p;
}

double eta_sign_form(const SignFormParams& sign, const BentFamily& family, double x) {
  const double z = x - sign.tau;
  return sign.theta0 + sign.theta1 * z + sign.theta2 * smooth_modulus(family, x);
}

}  // namespace bentcable
