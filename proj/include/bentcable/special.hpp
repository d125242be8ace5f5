#ifndef BENTCABLE_SPECIAL_HPP
#define BENTCABLE_SPECIAL_HPP

/// Thin wrappers over Boost.Math that report domain violations as Error.
namespace bentcable::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLn2 = 0.69314718055994530942;

double normal_pdf(double z);
double normal_cdf(double z);
/// Inverse of normal_cdf.
double normal_quantile(double p);

/// log(1 + e^t) without overflow.
double softplus(double t);

/// Owen's T function T(h, a) = (1/2pi) int_0^a exp(-h^2 (1+x^2)/2) / (1+x^2) dx.
double owens_t(double h, double a);

/// Regularized lower/upper incomplete gamma P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

double chi_squared_upper_tail(double x, double df);
double chi_squared_quantile(double level, double df);
double f_upper_tail(double f, double df1, double df2);

}  // namespace bentcable::special

#endif  // BENTCABLE_SPECIAL_HPP
