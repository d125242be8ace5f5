#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "bentcable/error.hpp"
#include "bentcable/inference.hpp"
#include "oracle.hpp"

using namespace bentcable;

namespace {

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Input;
}

FitResult fake_fit(const char* name, double ll, int p, std::uint64_t fingerprint = 1) {
  FitResult f;
  f.kind = parse_bent_kind(name);
  f.loglik = ll;
  f.n_params = p;
  f.aic = 2.0 * p - 2.0 * ll;
  f.n = 28;
  f.data_fingerprint = fingerprint;
  return f;
}

}  // namespace

TEST(RelativeLikelihood, SpecValues) {
  EXPECT_EQ(relative_likelihood({-3.0, -3.0}), (std::vector<double>{1.0, 1.0}));
  const auto pr = relative_likelihood({-158.061, -157.914, -155.368});
  EXPECT_DOUBLE_EQ(pr[0], 1.0);
  EXPECT_NEAR(pr[1], std::exp(-0.0735), 1e-12);
  EXPECT_NEAR(pr[1], 0.929, 5e-4);
  EXPECT_NEAR(pr[2], 0.260, 5e-4);
}

TEST(Compare, SortsByAicAndComputesWeights) {
  const std::vector<FitResult> fits = {
      fake_fit("SN-BC", 84.68381, 7), fake_fit("BC", 85.03048, 6),
      fake_fit("N-BC", 84.66888, 6), fake_fit("E-BC", 84.95691, 6)};
  const auto table = compare(fits);
  ASSERT_EQ(table.size(), 4u);
  EXPECT_EQ(table[0].label, "BC");
  EXPECT_EQ(table[1].label, "E-BC");
  EXPECT_EQ(table[2].label, "N-BC");
  EXPECT_EQ(table[3].label, "SN-BC");
  EXPECT_NEAR(table[0].aic, -158.061, 1e-3);
  EXPECT_NEAR(table[1].relative_likelihood, 0.929, 1e-3);
  EXPECT_NEAR(table[2].relative_likelihood, 0.697, 1e-3);
  EXPECT_NEAR(table[3].relative_likelihood, 0.260, 1e-3);
  for (const auto& row : table) EXPECT_LE(row.relative_likelihood, 1.0);
}

TEST(Compare, SingleFamilyAndErrors) {
  const auto one = compare({fake_fit("BC", 10.0, 6)});
  EXPECT_EQ(one[0].relative_likelihood, 1.0);
  EXPECT_EQ(error_of([] { compare({}); }), ErrorKind::Configuration);
  EXPECT_EQ(error_of([] { compare({fake_fit("BC", 1, 6, 1), fake_fit("N-BC", 1, 6, 2)}); }),
            ErrorKind::MismatchedData);
}

TEST(Lrt, SpecValues) {
  const auto same = lrt(5.0, 5.0, 1);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);

  // Published logliks for the asymmetric and symmetric normal fits.
  const auto r = lrt(fake_fit("SN-BC", 84.68381, 7), fake_fit("N-BC", 84.66888, 6), 1);
  EXPECT_NEAR(r.statistic, 2.0 * (84.68381 - 84.66888), 1e-12);
  EXPECT_NEAR(r.p_value, oracle::chi2_upper(r.statistic, 1), 1e-8);
  // The stated statistic 0.0230 maps to p = 0.879.
  EXPECT_NEAR(lrt(0.0230 / 2.0, 0.0, 1).p_value, 0.879, 5e-4);

  const auto two = lrt(5.99 / 2.0, 0.0, 2);
  EXPECT_NEAR(two.p_value, oracle::chi2_upper(5.99, 2), 1e-10);
  EXPECT_NEAR(two.p_value, 0.05, 2e-4);
}

TEST(Lrt, Errors) {
  EXPECT_EQ(error_of([] { lrt(1.0, 2.0, 1); }), ErrorKind::OptimizationFailure);
  EXPECT_NO_THROW(lrt(1.0, 1.0 + 5e-7, 1));
  EXPECT_EQ(error_of([] { lrt(fake_fit("SN-BC", 2, 7, 1), fake_fit("N-BC", 1, 6, 2), 1); }),
            ErrorKind::MismatchedData);
  EXPECT_EQ(error_of([] { lrt(1.0, 0.0, 0); }), ErrorKind::Configuration);
}

TEST(ConfidenceRegion, ThresholdAndSingleNode) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(5, 4, -100.0);
  d(2, 1) = 0.0;
  const auto r = confidence_region(d);
  EXPECT_NEAR(r.threshold, -5.991464547107979, 1e-10);
  EXPECT_TRUE(r.approximate);
  EXPECT_EQ(r.mask.count(), 1);
  EXPECT_TRUE(r.mask(2, 1));
  d(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(confidence_region(d).mask(0, 0));
}

TEST(ConfidenceRegion, QuadraticBowlIsAnalyticEllipse) {
  const int n = 41;
  const double t0 = 0.3, g0 = 0.5, a = 40.0, b = 90.0;
  Eigen::MatrixXd d(n, n);
  auto tau = [&](int i) { return -0.5 + 1.6 * i / (n - 1); };
  auto gam = [&](int j) { return 0.1 + 0.8 * j / (n - 1); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      d(i, j) = -(a * std::pow(tau(i) - t0, 2) + b * std::pow(gam(j) - g0, 2));
    }
  }
  const auto r = confidence_region(d, 0.95);
  const double c = -2.0 * std::log(0.05);
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double e = a * std::pow(tau(i) - t0, 2) + b * std::pow(gam(j) - g0, 2);
      if (std::abs(e - c) > 1e-9) {
        EXPECT_EQ(r.mask(i, j), e < c) << i << ' ' << j;
      }
      inside += r.mask(i, j);
    }
  }
  // Node count approximates the ellipse area pi c / sqrt(a b) in cell units.
  const double cell = (1.6 / (n - 1)) * (0.8 / (n - 1));
  const double expected = oracle::kPi * c / std::sqrt(a * b) / cell;
  EXPECT_NEAR(inside, expected, 0.1 * expected);
}

TEST(LackOfFit, InterpolatingGroupMeans) {
  Eigen::VectorXd x(6), y(6), fitted(6);
  x << 0, 0, 1, 1, 2, 2;
  y << 1, 3, 2, 4, 6, 6;
  fitted << 2, 2, 3, 3, 6, 6;
  const auto r = lack_of_fit(Dataset(x, y), fitted, 2);
  EXPECT_EQ(r.ss_lof, 0.0);
  EXPECT_EQ(r.f, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(LackOfFit, HandBuiltAnova) {
  Eigen::VectorXd x(9), y(9);
  x << 0, 0, 0, 1, 1, 2, 2, 2, 3;
  y << 1.0, 1.4, 0.9, 2.2, 2.6, 2.9, 3.5, 3.1, 5.2;
  const Dataset data(x, y);
  // Straight-line fit by the textbook closed form.
  const double xb = x.mean(), yb = y.mean();
  const double slope = ((x.array() - xb) * (y.array() - yb)).sum() / (x.array() - xb).square().sum();
  const Eigen::VectorXd fitted = (yb + slope * (x.array() - xb)).matrix();

  const double means[4] = {(1.0 + 1.4 + 0.9) / 3, (2.2 + 2.6) / 2, (2.9 + 3.5 + 3.1) / 3, 5.2};
  const int group[9] = {0, 0, 0, 1, 1, 2, 2, 2, 3};
  double pe = 0.0, lof = 0.0;
  for (int i = 0; i < 9; ++i) {
    pe += std::pow(y[i] - means[group[i]], 2);
    lof += std::pow(means[group[i]] - fitted[i], 2);
  }
  const double f = (lof / (4 - 2)) / (pe / (9 - 4));
  const auto r = lack_of_fit(data, fitted, 2);
  EXPECT_NEAR(r.ss_pe, pe, 1e-12);
  EXPECT_NEAR(r.ss_lof, lof, 1e-12);
  EXPECT_NEAR(r.ss_pe + r.ss_lof, (y - fitted).squaredNorm(), 1e-12);
  EXPECT_EQ(r.df_lof, 2);
  EXPECT_EQ(r.df_pe, 5);
  EXPECT_NEAR(r.f, f, 1e-12);
  EXPECT_NEAR(r.p_value, oracle::f_upper(f, 2, 5), 1e-8);
}

TEST(LackOfFit, InsufficientReplication) {
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, 0, 1);
  EXPECT_EQ(error_of([&] { lack_of_fit(Dataset(x, x), x, 2); }), ErrorKind::InsufficientReplication);
  Eigen::VectorXd xr(6);
  xr << 0, 0, 1, 1, 2, 2;
  EXPECT_EQ(error_of([&] { lack_of_fit(Dataset(xr, xr), xr, 3); }),
            ErrorKind::InsufficientReplication);
}

TEST(TransitionZone, ExactAndQuantileForms) {
  const auto bc = transition_zone(parse_bent_kind("BC"), {0.0, 1.0, 0.0});
  EXPECT_EQ(bc.first, -1.0);
  EXPECT_EQ(bc.second, 1.0);
  const auto nbc = transition_zone(parse_bent_kind("N-BC"), {0.0, 1.0, 0.0});
  EXPECT_NEAR(nbc.first, -oracle::normal_quantile(0.975), 1e-9);
  EXPECT_NEAR(nbc.second, oracle::normal_quantile(0.975), 1e-9);
  const auto bcfit = transition_zone(parse_bent_kind("BC"), {-0.056, 0.428, 0.0});
  EXPECT_NEAR(bcfit.first, -0.484, 1e-12);
  EXPECT_NEAR(bcfit.second, 0.372, 1e-12);

  // Lch(g) shares the logistic threshold of Lne(g / 2).
  const auto lch = transition_zone(parse_bent_kind("Lch"), {0.0, 2.0, 0.0});
  const auto lne = transition_zone(parse_bent_kind("Lne"), {0.0, 1.0, 0.0});
  EXPECT_NEAR(lch.first, lne.first, 1e-14);
  EXPECT_NEAR(lne.second, std::log(0.975 / 0.025), 1e-12);

  EXPECT_EQ(error_of([] { transition_zone(parse_bent_kind("BC"), {0, 1, 0}, 0.9, 0.1); }),
            ErrorKind::Configuration);
}
