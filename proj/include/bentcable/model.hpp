#ifndef BENTCABLE_MODEL_HPP
#define BENTCABLE_MODEL_HPP

#include <vector>

#include <Eigen/Dense>

#include "bentcable/bent.hpp"

namespace bentcable {

/// Mean-function parameters for a D-phase model; deltas and bents both have length D - 1.
struct ParamVector {
  double alpha1 = 0.0;
  double beta1 = 0.0;
  std::vector<double> deltas;
  std::vector<BentParams> bents;
  double sigma2 = 1.0;

  int phases() const { return static_cast<int>(deltas.size()) + 1; }
};

/// Two-phase sign formulation: eta = theta0 + theta1 z + theta2 m(z), z = x - tau.
struct SignFormParams {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double tau = 0.0;
};

/// Throws Configuration on D < 2, size mismatch, non-increasing change points or
/// overlapping bounded transition zones.
void validate(const BentKind& kind, const ParamVector& params);

/// One bend per change point, in order.
std::vector<BentFamily> bends(const BentKind& kind, const ParamVector& params);

double eta(const BentKind& kind, const ParamVector& params, double x);
Eigen::ArrayXd eta(const BentKind& kind, const ParamVector& params,
                   const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Same model with exact max{x - tau, 0} joins.
double eta_abrupt(const ParamVector& params, double x);
Eigen::ArrayXd eta_abrupt(const ParamVector& params, const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Throws Configuration unless D == 2.
SignFormParams to_sign_form(const ParamVector& params);
/// Inverse of to_sign_form; bent scale/shape and sigma2 come from `bent` and `sigma2`.
ParamVector from_sign_form(const SignFormParams& sign, const BentParams& bent, double sigma2 = 1.0);

/// Evaluates the sign form with the family's smooth modulus m = 2 smooth_max - z.
double eta_sign_form(const SignFormParams& sign, const BentFamily& family, double x);

}  // namespace bentcable

#endif  // BENTCABLE_MODEL_HPP
