#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "bentcable/error.hpp"
#include "bentcable/threshold.hpp"
#include "oracle.hpp"

using namespace bentcable;

namespace {

std::vector<ThresholdDist> integrable_dists() {
  return {
      ThresholdDist::uniform(0.3, 1.2),
      ThresholdDist::epanechnikov(-0.5, 0.8),
      ThresholdDist::biweight(1.0, 2.0),
      ThresholdDist::logistic(0.0, 0.7),
      ThresholdDist::normal(0.2, 1.3),
      ThresholdDist::skew_normal_with_mean(0.0, 1.0, 3.0),
      ThresholdDist::skew_normal_with_mean(0.4, 0.6, -0.818),
      ThresholdDist::t2(0.0, 2.0),
      ThresholdDist::exponentiated_uniform(0.0, 0.5, 3.0),
      ThresholdDist::exponentiated_uniform(0.0, 1.0, 1.5),
  };
}

// Integration window wide enough that the truncated mass is below 1e-9 for every
// distribution above except t2, whose tails are handled separately.
std::pair<double, double> window(const ThresholdDist& d) {
  if (d.bounded()) return d.support();
  return {d.location() - 60.0 * d.scale(), d.location() + 60.0 * d.scale()};
}

// int_a^b g(t) f(t) dt. Exponentiated-uniform densities with k < 2 blow up at the lower
// support end, so that case integrates in u with t = lo + u^2.
double integrate_against(const ThresholdDist& d, const std::function<double(double)>& g, double a,
                         double b, int pieces = 256) {
  if (d.kind() == DistKind::ExponentiatedUniform) {
    const double lo = d.support().first;
    a = std::max(a, lo);
    b = std::min(b, d.support().second);
    if (b <= a) return 0.0;
    const double width = d.support().second - lo;
    const double k = d.shape();
    // 2 u f(lo + u^2) = 2 (k - 1) u^(2k - 3) / width^(k - 1), finite at u = 0 for k >= 1.5.
    auto h = [&](double u) {
      return 2.0 * (k - 1.0) * std::pow(u, 2.0 * k - 3.0) / std::pow(width, k - 1.0) * g(lo + u * u);
    };
    return oracle::simpson_pieces(h, std::sqrt(a - lo), std::sqrt(b - lo), pieces);
  }
  return oracle::simpson_pieces([&](double t) { return g(t) * pdf(d, t); }, a, b, pieces);
}

}  // namespace

TEST(Threshold, SpecValues) {
  EXPECT_DOUBLE_EQ(cdf(ThresholdDist::uniform(0, 1), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(cdf(ThresholdDist::epanechnikov(0, 1), 1.0), 1.0);
  EXPECT_NEAR(cdf(ThresholdDist::logistic(0, 1), 1.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_DOUBLE_EQ(pdf(ThresholdDist::biweight(0, 1), 0.0), 15.0 / 16.0);
  EXPECT_NEAR(pdf(ThresholdDist::normal(0, 1), 0.0), 1.0 / std::sqrt(2.0 * oracle::kPi), 1e-15);
  EXPECT_NEAR(pdf(ThresholdDist::skew_normal(0, 1, 0), 0.0), 1.0 / std::sqrt(2.0 * oracle::kPi),
              1e-15);
  EXPECT_NEAR(lower_partial_expectation(ThresholdDist::uniform(0, 1), 0.0), -0.25, 1e-15);
  EXPECT_NEAR(lower_partial_expectation(ThresholdDist::normal(0, 1), 0.0),
              -1.0 / std::sqrt(2.0 * oracle::kPi), 1e-15);
}

TEST(Threshold, LogisticCdfMatchesIntegratedPdf) {
  const auto d = ThresholdDist::logistic(0, 1);
  const double integral = oracle::simpson_pieces([&](double t) { return pdf(d, t); }, -60.0, 1.0, 64);
  EXPECT_NEAR(integral, cdf(d, 1.0), 1e-11);
}

TEST(Threshold, PdfIntegratesToOne) {
  for (const auto& d : integrable_dists()) {
    if (d.kind() == DistKind::NonStandardT2) continue;
    const auto [lo, hi] = window(d);
    const double mass = integrate_against(d, [](double) { return 1.0; }, lo, hi);
    EXPECT_NEAR(mass, 1.0, 1e-9) << to_string(d.kind());
  }
}

TEST(Threshold, T2CdfMatchesIntegratedPdfOnFiniteWindow) {
  const auto d = ThresholdDist::t2(0.5, 3.0);
  const double a = -40.0;
  for (double x : {-3.0, 0.0, 0.5, 2.0, 10.0}) {
    const double mass = oracle::simpson_pieces([&](double t) { return pdf(d, t); }, a, x, 128);
    EXPECT_NEAR(mass, cdf(d, x) - cdf(d, a), 1e-10) << x;
  }
}

TEST(Threshold, CdfIsMonotoneAndBounded) {
  for (const auto& d : integrable_dists()) {
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = d.location() - 10.0 + 0.01 * i;
      const double f = cdf(d, x);
      EXPECT_GE(f, prev - 1e-15) << to_string(d.kind()) << ' ' << x;
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
      prev = f;
    }
  }
}

TEST(Threshold, CdfDerivativeIsPdf) {
  const double h = 1e-5;
  for (const auto& d : integrable_dists()) {
    const auto [lo, hi] = d.support();
    for (int i = 0; i <= 40; ++i) {
      const double x = d.location() - 3.0 + 0.15 * i + 0.0123;
      if (std::abs(x - lo) < 2 * h || std::abs(x - hi) < 2 * h) continue;
      const double fd = (cdf(d, x + h) - cdf(d, x - h)) / (2 * h);
      EXPECT_NEAR(fd, pdf(d, x), 1e-6 * (1.0 + pdf(d, x))) << to_string(d.kind()) << ' ' << x;
    }
  }
}

TEST(Threshold, PartialExpectationMatchesQuadrature) {
  for (const auto& d : integrable_dists()) {
    const double tau = d.mean();
    double lo = window(d).first;
    if (d.kind() == DistKind::NonStandardT2) continue;
    for (double x : {tau - 1.0, tau - 0.1, tau, tau + 0.4, tau + 2.0}) {
      if (x <= lo) continue;
      const double ref = integrate_against(d, [&](double t) { return t - tau; }, lo, x);
      EXPECT_NEAR(lower_partial_expectation(d, x), ref, 1e-9) << to_string(d.kind()) << ' ' << x;
    }
  }
}

TEST(Threshold, PartialExpectationDerivativeAndSign) {
  const double h = 1e-5;
  for (const auto& d : integrable_dists()) {
    const double tau = d.mean();
    for (int i = 0; i <= 60; ++i) {
      const double x = tau - 3.0 + 0.1 * i + 0.007;
      EXPECT_LE(lower_partial_expectation(d, x), 0.0);
      const auto [lo, hi] = d.support();
      if (std::abs(x - lo) < 2 * h || std::abs(x - hi) < 2 * h) continue;
      const double fd =
          (lower_partial_expectation(d, x + h) - lower_partial_expectation(d, x - h)) / (2 * h);
      EXPECT_NEAR(fd, (x - tau) * pdf(d, x), 1e-6) << to_string(d.kind()) << ' ' << x;
    }
  }
}

TEST(Threshold, PartialExpectationVanishesAtInfinity) {
  for (const auto& d : integrable_dists()) {
    const double far = d.mean() + 1e6 * d.scale();
    EXPECT_NEAR(lower_partial_expectation(d, far), 0.0, 1e-5) << to_string(d.kind());
  }
}

TEST(Threshold, MeanIsChangePoint) {
  for (const auto& d : integrable_dists()) {
    if (d.kind() == DistKind::NonStandardT2) {
      EXPECT_DOUBLE_EQ(d.mean(), d.location());
      continue;
    }
    const auto [lo, hi] = window(d);
    const double m = integrate_against(d, [](double t) { return t; }, lo, hi);
    EXPECT_NEAR(d.mean(), m, 1e-9) << to_string(d.kind());
  }
  EXPECT_NEAR(ThresholdDist::skew_normal_with_mean(1.5, 0.8, -2.0).mean(), 1.5, 1e-14);
}

TEST(Threshold, SkewNormalWithZeroShapeIsNormal) {
  const auto sn = ThresholdDist::skew_normal(0.3, 1.7, 0.0);
  const auto n = ThresholdDist::normal(0.3, 1.7);
  for (double x : {-4.0, -1.0, 0.3, 2.2, 5.0}) {
    EXPECT_NEAR(pdf(sn, x), pdf(n, x), 1e-15);
    EXPECT_NEAR(cdf(sn, x), cdf(n, x), 1e-14);
    EXPECT_NEAR(lower_partial_expectation(sn, x), lower_partial_expectation(n, x), 1e-14);
  }
}

TEST(Threshold, QuantileInvertsCdf) {
  for (const auto& d : integrable_dists()) {
    for (double p : {0.001, 0.025, 0.3, 0.5, 0.77, 0.975, 0.999}) {
      EXPECT_NEAR(cdf(d, quantile(d, p)), p, 1e-10) << to_string(d.kind()) << ' ' << p;
    }
  }
  const auto n = ThresholdDist::normal(0, 1);
  EXPECT_NEAR(quantile(n, 0.975), oracle::normal_quantile(0.975), 1e-9);
  EXPECT_NEAR(quantile(n, 0.025), -oracle::normal_quantile(0.975), 1e-9);
}

TEST(Threshold, BoundedSupportEndpoints) {
  const auto e = ThresholdDist::exponentiated_uniform(0.0, 0.5, 3.0);
  const auto [lo, hi] = e.support();
  EXPECT_DOUBLE_EQ(lo, -1.0);
  EXPECT_DOUBLE_EQ(hi, 0.5);
  EXPECT_EQ(cdf(e, lo), 0.0);
  EXPECT_EQ(cdf(e, hi), 1.0);
  for (const auto& d : integrable_dists()) {
    if (!d.bounded()) continue;
    const auto [a, b] = d.support();
    EXPECT_EQ(cdf(d, a - 1e-9), 0.0);
    EXPECT_EQ(cdf(d, b + 1e-9), 1.0);
    EXPECT_EQ(pdf(d, b + 1e-9), 0.0);
  }
}

TEST(Threshold, ArrayOverloadsMatchScalar) {
  const auto d = ThresholdDist::skew_normal_with_mean(0.0, 1.0, 2.0);
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(17, -3.0, 3.0);
  const Eigen::ArrayXd p = pdf(d, xs);
  const Eigen::ArrayXd c = cdf(d, xs);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(p[i], pdf(d, xs[i]));
    EXPECT_EQ(c[i], cdf(d, xs[i]));
  }
}

TEST(Threshold, CauchyHasNoMean) {
  const auto c = ThresholdDist::cauchy(0.0, 1.0);
  EXPECT_FALSE(c.integrable());
  EXPECT_NEAR(cdf(c, 1.0), 0.75, 1e-15);
  try {
    (void)c.mean();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonIntegrable);
  }
  EXPECT_THROW(lower_partial_expectation(c, 0.0), Error);
  EXPECT_THROW(quantile(c, 0.5), Error);
}

TEST(Threshold, DomainErrors) {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Input;
  };
  EXPECT_EQ(kind_of([] { ThresholdDist::uniform(0, 0); }), ErrorKind::ParameterDomain);
  EXPECT_EQ(kind_of([] { ThresholdDist::normal(0, -1); }), ErrorKind::ParameterDomain);
  EXPECT_EQ(kind_of([] { ThresholdDist::exponentiated_uniform(0, 1, 1.0); }),
            ErrorKind::ParameterDomain);
  EXPECT_EQ(kind_of([] { ThresholdDist::t2(0, std::numeric_limits<double>::quiet_NaN()); }),
            ErrorKind::ParameterDomain);
  EXPECT_EQ(parse_dist_kind("Biweight"), DistKind::Biweight);
  EXPECT_THROW(parse_dist_kind("Gumbel"), Error);
}
