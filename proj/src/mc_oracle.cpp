#include "bentcable/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "bentcable/error.hpp"
#include "bentcable/special.hpp"

namespace bentcable {

namespace {

constexpr double kBand = 4.0;
constexpr double kExactTol = 1e-10;
constexpr double kDerivTol = 1e-5;
constexpr double kMcFloor = 1e-7;

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

double draw(const ThresholdDist& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double loc = d.location();
  const double s = d.scale();
  switch (d.kind()) {
    case DistKind::Uniform:
      return loc + s * (2.0 * unit(rng) - 1.0);
    case DistKind::Epanechnikov: {
      // Median of three uniforms is Beta(2, 2).
      std::array<double, 3> u{unit(rng), unit(rng), unit(rng)};
      std::sort(u.begin(), u.end());
      return loc + s * (2.0 * u[1] - 1.0);
    }
    case DistKind::Biweight: {
      // Third order statistic of five uniforms is Beta(3, 3).
      std::array<double, 5> u{};
      for (auto& v : u) v = unit(rng);
      std::sort(u.begin(), u.end());
      return loc + s * (2.0 * u[2] - 1.0);
    }
    case DistKind::Logistic: {
      double u = unit(rng);
      while (u == 0.0) u = unit(rng);
      return loc + s * std::log(u / (1.0 - u));
    }
    case DistKind::Normal:
      return loc + s * gauss(rng);
    case DistKind::SkewNormal: {
      const double u0 = gauss(rng);
      const double u1 = gauss(rng);
      const double z = u1 <= d.shape() * u0 ? u0 : -u0;
      return loc + s * z;
    }
    case DistKind::NonStandardT2: {
      double v = 2.0 * unit(rng) - 1.0;
      while (v == -1.0) v = 2.0 * unit(rng) - 1.0;
      return loc + v * std::sqrt(s) / std::sqrt(1.0 - v * v);
    }
    case DistKind::ExponentiatedUniform: {
      const auto [z1, z2] = d.support();
      return z1 + (z2 - z1) * std::pow(unit(rng), 1.0 / (d.shape() - 1.0));
    }
    case DistKind::Cauchy:
      return loc + s * std::tan(special::kPi * (unit(rng) - 0.5));
  }
  return loc;
}

double center(const ThresholdDist& d) { return d.integrable() ? d.mean() : d.location(); }

struct Moments {
  double mean = 0.0;
  double se = 0.0;
  double n = 1.0;
};

template <typename F>
Moments moments(const Eigen::VectorXd& t, F f) {
  double sum = 0.0;
  double sum2 = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double v = f(t[i]);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(t.size());
  const double mean = sum / n;
  const double var = std::max(sum2 / n - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(var / n), n};
}

Check band_check(std::string suite, std::string name, const Moments& m, double exact) {
  Check c{std::move(suite), std::move(name)};
  c.residual = std::abs(m.mean - exact);
  // Deep-tail points see only a handful of draws, so the sample SE is unreliable there; the floor
  // is kBand draws' worth of unit contribution.
  c.tolerance = kBand * m.se + std::max(kMcFloor, kBand / m.n) * std::max(1.0, std::abs(exact));
  c.passed = c.residual <= c.tolerance;
  return c;
}

Check max_check(std::string suite, std::string name, double residual, double tol) {
  Check c{std::move(suite), std::move(name)};
  c.residual = residual;
  c.tolerance = tol;
  c.passed = residual < tol;
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double length_of(const BentFamily& f) { return length_from_scale(f.kind(), f.params().scale); }

BentFamily rescaled(const BentFamily& f, double length) {
  BentParams p = f.params();
  p.scale = scale_from_length(f.kind(), length);
  return BentFamily::make(f.kind(), p);
}

bool uses_trn(const BentFamily& f) { return classify_shape(f) == Shape::Transitional; }

// Condition (i): smooth_max - max{x - tau, 0} over a distance ladder; the final rung decides.
template <typename SmoothMax>
Check condition_i(const std::string& suite, SmoothMax sm, double tau, double length) {
  double residual = 0.0;
  for (double d : {1e2, 1e4, 1e6}) {
    const double dist = d * length;
    residual = std::max(std::abs(sm(tau - dist)), std::abs(sm(tau + dist) - dist));
  }
  return max_check(suite, "(i)", residual, 1e-6);
}

template <typename SmoothMax>
Check condition_ii(const std::string& suite, SmoothMax sm_small, double tau) {
  double residual = 0.0;
  for (double z : grid(-5.0, 5.0, 2001)) {
    if (std::abs(z) < 1e-3) continue;
    residual = std::max(residual, std::abs(sm_small(tau + z) - std::max(z, 0.0)));
  }
  return max_check(suite, "(ii)", residual, 1e-6);
}

template <typename G>
Check condition_iii(const std::string& suite, G g, double tau, double length, bool expected) {
  const double h = 1e-9 * length;
  Check c = max_check(suite, "(iii)", std::max(std::abs(g(tau - h)), std::abs(g(tau + h))), 1e3);
  c.passed = c.residual <= 1e3;
  c.expected = expected;
  return c;
}

template <typename G>
Check trn_monotone(const std::string& suite, G trn, double tau, double length) {
  double prev = -1.0;
  double worst = 0.0;
  for (double z : grid(-10.0, 10.0, 10001)) {
    const double v = trn(tau + z * length);
    worst = std::max({worst, prev - v, std::abs(v) - 1.0});
    prev = v;
  }
  return max_check(suite, "trn monotone in [-1, 1]", worst, 1e-15);
}

double smm_value(const ThresholdDist& d, double x) { return (x - center(d)) * cdf(d, x); }

Report compare_grid(const std::string& suite, const std::string& name, const BentFamily& a,
                    const BentFamily& b, double tau, double length, int n) {
  double worst = 0.0;
  for (double z : grid(-6.0, 6.0, n)) {
    const double x = tau + z * length;
    worst = std::max(worst, rel(smooth_max(a, x), smooth_max(b, x)));
  }
  return {max_check(suite, name, worst, kExactTol)};
}

Report expected_smm(const ThresholdDist& dist, const std::vector<double>& xs, Eigen::Index draws,
                    std::uint64_t seed) {
  const Eigen::VectorXd t = sample_threshold(dist, draws, seed);
  const double tau = center(dist);
  Report r;
  for (double x : xs) {
    const auto m = moments(t, [&](double v) { return v <= x ? x - tau : 0.0; });
    r.push_back(band_check("mc-smm:" + std::string(to_string(dist.kind())),
                           "x=" + std::to_string(x), m, smm_value(dist, x)));
  }
  return r;
}

}  // namespace

bool all_ok(const Report& report) {
  return std::all_of(report.begin(), report.end(), [](const Check& c) { return c.ok(); });
}

void append(Report& into, const Report& more) { into.insert(into.end(), more.begin(), more.end()); }

Eigen::VectorXd sample_threshold(const ThresholdDist& dist, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = draw(dist, rng);
  return out;
}

Dataset simulate_mixture(const SimSpec& spec) {
  if (spec.subunits < 1) throw Error(ErrorKind::Configuration, "sub-unit count M must be >= 1");
  if (!(spec.sigma >= 0.0)) throw Error(ErrorKind::Configuration, "noise sigma must be >= 0");
  validate(spec.kind, spec.params);
  const auto fams = bends(spec.kind, spec.params);
  for (const auto& f : fams) {
    if (!f.dist()) {
      throw Error(ErrorKind::Configuration,
                  std::string(to_string(f.name())) + " has no threshold distribution to sample");
    }
  }
  const bool switch_line = spec.kind.route == Route::SMM || uses_trn(fams.front());
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::VectorXd y(spec.x.size());
  for (Eigen::Index i = 0; i < spec.x.size(); ++i) {
    const double x = spec.x[i];
    double sum = 0.0;
    for (int m = 0; m < spec.subunits; ++m) {
      double v = 0.0;
      for (std::size_t l = 0; l < fams.size(); ++l) {
        const double t = draw(*fams[l].dist(), rng);
        const double tau = fams[l].tau();
        const double bend = switch_line ? (t <= x ? x - tau : 0.0) : std::max(x - t, 0.0);
        v += spec.params.deltas[l] * bend;
      }
      sum += v;
    }
    y[i] = spec.params.alpha1 + spec.params.beta1 * x + sum / spec.subunits +
           spec.sigma * noise(rng);
  }
  return Dataset(spec.x, y);
}

Dataset generate_dataset(const BentKind& kind, const ParamVector& params, const Eigen::VectorXd& x,
                         double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::Configuration, "noise sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::VectorXd y = eta(kind, params, x.array()).matrix();
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sigma * noise(rng);
  return Dataset(x, y);
}

Report verify_expected_max(const ThresholdDist& dist, const std::vector<double>& xs,
                           Eigen::Index draws, std::uint64_t seed) {
  const BentFamily fam = BentFamily::from_dist(Route::ExpBC, dist);
  const Eigen::VectorXd t = sample_threshold(dist, draws, seed);
  Report r;
  for (double x : xs) {
    const auto m = moments(t, [x](double v) { return std::max(x - v, 0.0); });
    r.push_back(band_check("mc-expected-max:" + std::string(to_string(dist.kind())),
                           "x=" + std::to_string(x), m, smooth_max(fam, x)));
  }
  return r;
}

Report verify_expected_modulus(const ThresholdDist& dist, const std::vector<double>& xs,
                               Eigen::Index draws, std::uint64_t seed) {
  const BentFamily fam = BentFamily::from_dist(Route::ExpBC, dist);
  const Eigen::VectorXd t = sample_threshold(dist, draws, seed);
  Report r;
  for (double x : xs) {
    const auto m = moments(t, [x](double v) { return std::abs(x - v); });
    r.push_back(band_check("mc-expected-modulus:" + std::string(to_string(dist.kind())),
                           "x=" + std::to_string(x), m, smooth_modulus(fam, x)));
  }
  return r;
}

Report verify_conditions(const BentFamily& family) {
  const std::string suite = "conditions:" + label(family.kind());
  const double tau = family.tau();
  const double len = length_of(family);
  const BentFamily small = rescaled(family, 1e-8);
  auto sm = [&](double x) { return smooth_max(family, x); };
  auto sm_small = [&](double x) { return smooth_max(small, x); };

  Report r;
  const Check ci = condition_i(suite, sm, tau, len);
  const Check cii = condition_ii(suite, sm_small, tau);
  r.push_back(ci);
  r.push_back(cii);
  if (uses_trn(family)) {
    auto trn = [&](double x) { return transitional_fn(family, x); };
    r.push_back(condition_iii(suite, trn, tau, len, true));
    r.push_back(trn_monotone(suite, trn, tau, len));
    return r;
  }

  auto hyp = [&](double x) { return hyperbolic_fn(family, x); };
  const Check ciii = condition_iii(suite, hyp, tau, len, false);
  r.push_back(ciii);

  Check h1 = max_check(suite, "(h.1)", std::max(ci.residual, cii.residual), 1e-6);
  h1.passed = ci.passed && cii.passed;
  r.push_back(h1);

  Check h2 = max_check(suite, "(h.2)", ciii.residual, 1e3);
  h2.passed = !ciii.passed;
  r.push_back(h2);

  double shortfall = 0.0;
  for (double z : grid(-5.0, 5.0, 2001)) {
    if (std::abs(z) < 1e-6) continue;
    shortfall = std::max(shortfall, 1.0 - std::abs(hyp(tau + z * len)));
  }
  r.push_back(max_check(suite, "(h.3)", shortfall, 1e-12));

  std::vector<double> knots{tau};
  if (auto zone = family.transition_zone()) {
    knots.push_back(zone->first);
    knots.push_back(zone->second);
  }
  const double h = 1e-6 * len;
  double jump = 0.0;
  for (double a : knots) {
    const double left = (sm(a) - sm(a - h)) / h;
    const double right = (sm(a + h) - sm(a)) / h;
    jump = std::max(jump, std::abs(right - left));
  }
  r.push_back(max_check(suite, "(h.4)", jump, 1e-4));
  return r;
}

Report verify_smm_conditions(const ThresholdDist& dist) {
  const std::string suite = "conditions:SMM:" + std::string(to_string(dist.kind()));
  const double tau = center(dist);
  const double len = dist.scale();
  const ThresholdDist small = ThresholdDist::make(
      dist.kind(), dist.kind() == DistKind::SkewNormal ? tau : dist.location(), 1e-8, dist.shape());
  auto sm = [&](double x) { return smm_value(dist, x); };
  auto sm_small = [&](double x) { return smm_value(small, x); };
  auto trn = [&](double x) { return 2.0 * cdf(dist, x) - 1.0; };

  Report r;
  Check ci = condition_i(suite, sm, tau, len);
  ci.expected = dist.integrable();
  r.push_back(ci);
  r.push_back(condition_ii(suite, sm_small, tau));
  r.push_back(condition_iii(suite, trn, tau, len, true));
  r.push_back(trn_monotone(suite, trn, tau, len));
  if (!dist.integrable()) {
    r.push_back(max_check(suite, "(i) residual near 1/pi", std::abs(ci.residual - 1.0 / special::kPi),
                          1e-3));
  }
  return r;
}

std::vector<BentFamily> reference_families(double tau, double length) {
  auto make = [&](ModelName name, Route route, double shape = 0.0) {
    const BentKind kind{name, route, DistKind::Normal};
    return BentFamily::make(kind, {tau, scale_from_length(kind, length), shape});
  };
  return {
      make(ModelName::Tanh, Route::SMM),          make(ModelName::QBC, Route::ExtBC),
      make(ModelName::BC, Route::ExtBC),          make(ModelName::EBC, Route::ExtBC),
      make(ModelName::Hyp, Route::ExpBC),         make(ModelName::Lne, Route::ExpBC),
      make(ModelName::NBC, Route::ExpBC),
      make(ModelName::SNBC, Route::ExpBC, 3.0),   make(ModelName::GBC, Route::ExpBC, 3.0),
  };
}

Report verify_route_equivalences(int n, Eigen::Index draws, std::uint64_t seed, double tau,
                                 double length) {
  const double L = length;
  auto named = [&](ModelName name, Route route, double scale, double shape = 0.0) {
    return BentFamily::make({name, route, DistKind::Normal}, {tau, scale, shape});
  };
  auto generic = [](Route route, const ThresholdDist& d) { return BentFamily::from_dist(route, d); };
  const std::string suite = "route-equivalence";

  Report r;
  append(r, compare_grid(suite, "BC = ExpBC(Uniform)", named(ModelName::BC, Route::ExtBC, L),
                         generic(Route::ExpBC, ThresholdDist::uniform(tau, L)), tau, L, n));
  append(r, compare_grid(suite, "E-BC = ExpBC(Epanechnikov)", named(ModelName::EBC, Route::ExtBC, L),
                         generic(Route::ExpBC, ThresholdDist::epanechnikov(tau, L)), tau, L, n));
  append(r, compare_grid(suite, "Q-BC = SMM(Biweight)", named(ModelName::QBC, Route::ExtBC, L),
                         generic(Route::SMM, ThresholdDist::biweight(tau, L)), tau, L, n));
  append(r, compare_grid(suite, "G-BC = ExpBC(ExponentiatedUniform)",
                         named(ModelName::GBC, Route::ExpBC, L, 3.0),
                         generic(Route::ExpBC, ThresholdDist::exponentiated_uniform(tau, L, 3.0)),
                         tau, L, n));
  append(r, compare_grid(suite, "Hyp = ExpBC(T2)", named(ModelName::Hyp, Route::ExpBC, 2.0 * L * L),
                         generic(Route::ExpBC, ThresholdDist::t2(tau, 2.0 * L * L)), tau, L, n));
  append(r, compare_grid(suite, "Lne = ExpBC(Logistic)", named(ModelName::Lne, Route::ExpBC, L),
                         generic(Route::ExpBC, ThresholdDist::logistic(tau, L)), tau, L, n));
  append(r, compare_grid(suite, "Tanh = SMM(Logistic)", named(ModelName::Tanh, Route::SMM, L),
                         generic(Route::SMM, ThresholdDist::logistic(tau, 0.5 * L)), tau, L, n));

  // Lch is Lne(gamma* / 2) shifted by -gamma* log 2 (in u units, half of that).
  {
    const BentFamily lch = named(ModelName::Lch, Route::ExpBC, L);
    const BentFamily lne = named(ModelName::Lne, Route::ExpBC, 0.5 * L);
    double worst = 0.0;
    for (double z : grid(-6.0, 6.0, n)) {
      const double x = tau + z * L;
      worst = std::max(worst, rel(2.0 * smooth_max(lch, x) - 2.0 * smooth_max(lne, x), lch_shift(L)));
    }
    r.push_back(max_check(suite, "Lch = Lne(gamma*/2) + shift", worst, kExactTol));
  }

  const auto xs = [&]() {
    std::vector<double> v;
    for (double z : grid(-3.0, 3.0, 21)) v.push_back(tau + z * L);
    return v;
  }();
  std::uint64_t s = seed;
  for (const auto& d :
       {ThresholdDist::uniform(tau, L), ThresholdDist::epanechnikov(tau, L),
        ThresholdDist::exponentiated_uniform(tau, L, 3.0), ThresholdDist::t2(tau, 2.0 * L * L),
        ThresholdDist::logistic(tau, L), ThresholdDist::normal(tau, L),
        ThresholdDist::skew_normal_with_mean(tau, L, 3.0), ThresholdDist::biweight(tau, L)}) {
    append(r, verify_expected_max(d, xs, draws, ++s));
  }
  for (const auto& d : {ThresholdDist::biweight(tau, L), ThresholdDist::logistic(tau, 0.5 * L)}) {
    append(r, expected_smm(d, xs, draws, ++s));
  }
  return r;
}

Report verify_theorems(int n, double tau, double length) {
  const double L = length;
  ParamVector p;
  p.alpha1 = 0.7;
  p.beta1 = -0.4;
  p.deltas = {1.3};
  p.bents = {BentParams{tau, 1.0, 0.0}};
  const SignFormParams sign = to_sign_form(p);
  auto linear = [&](double x) { return p.alpha1 + p.beta1 * x; };

  Report r;
  const std::vector<std::pair<BentFamily, ThresholdDist>> smm{
      {BentFamily::make({ModelName::Tanh, Route::SMM, {}}, {tau, L, 0.0}),
       ThresholdDist::logistic(tau, 0.5 * L)},
      {BentFamily::make({ModelName::QBC, Route::ExtBC, {}}, {tau, L, 0.0}),
       ThresholdDist::biweight(tau, L)},
      {BentFamily::from_dist(Route::SMM, ThresholdDist::normal(tau, L)), ThresholdDist::normal(tau, L)},
      {BentFamily::from_dist(Route::SMM, ThresholdDist::skew_normal_with_mean(tau, L, 3.0)),
       ThresholdDist::skew_normal_with_mean(tau, L, 3.0)},
  };
  for (const auto& [fam, dist] : smm) {
    double worst = 0.0;
    for (double z : grid(-6.0, 6.0, n)) {
      const double x = tau + z * L;
      const double lhs =
          sign.theta0 + sign.theta1 * (x - tau) + sign.theta2 * (x - tau) * transitional_fn(fam, x);
      const double rhs = linear(x) + p.deltas[0] * (x - tau) * cdf(dist, x);
      worst = std::max(worst, rel(lhs, rhs));
    }
    r.push_back(max_check("theorem-smm", label(fam.kind()), worst, kExactTol));
  }

  const std::vector<std::pair<BentFamily, ThresholdDist>> expbc{
      {BentFamily::make({ModelName::BC, Route::ExtBC, {}}, {tau, L, 0.0}), ThresholdDist::uniform(tau, L)},
      {BentFamily::make({ModelName::EBC, Route::ExtBC, {}}, {tau, L, 0.0}),
       ThresholdDist::epanechnikov(tau, L)},
      {BentFamily::make({ModelName::GBC, Route::ExpBC, {}}, {tau, L, 3.0}),
       ThresholdDist::exponentiated_uniform(tau, L, 3.0)},
      {BentFamily::make({ModelName::NBC, Route::ExpBC, {}}, {tau, L, 0.0}), ThresholdDist::normal(tau, L)},
      {BentFamily::make({ModelName::SNBC, Route::ExpBC, {}}, {tau, L, 3.0}),
       ThresholdDist::skew_normal_with_mean(tau, L, 3.0)},
      {BentFamily::make({ModelName::Lne, Route::ExpBC, {}}, {tau, L, 0.0}), ThresholdDist::logistic(tau, L)},
      {BentFamily::make({ModelName::Hyp, Route::ExpBC, {}}, {tau, 2.0 * L * L, 0.0}),
       ThresholdDist::t2(tau, 2.0 * L * L)},
  };
  for (const auto& [fam, dist] : expbc) {
    double worst = 0.0;
    for (double z : grid(-6.0, 6.0, n)) {
      if (std::abs(z) < 1e-6) continue;
      const double x = tau + z * L;
      const double lhs =
          sign.theta0 + sign.theta1 * (x - tau) + sign.theta2 * (x - tau) * hyperbolic_fn(fam, x);
      const double eu = (x - tau) * cdf(dist, x) - lower_partial_expectation(dist, x);
      const double rhs = linear(x) + p.deltas[0] * eu;
      worst = std::max(worst, rel(lhs, rhs));
    }
    r.push_back(max_check("theorem-expbc", label(fam.kind()), worst, kExactTol));
  }
  return r;
}

Report verify_derivative_identities(int n, double tau, double length) {
  const double L = length;
  const std::vector<std::pair<BentFamily, ThresholdDist>> cases{
      {BentFamily::make({ModelName::BC, Route::ExpBC, {}}, {tau, L, 0.0}), ThresholdDist::uniform(tau, L)},
      {BentFamily::make({ModelName::EBC, Route::ExpBC, {}}, {tau, L, 0.0}),
       ThresholdDist::epanechnikov(tau, L)},
      {BentFamily::make({ModelName::GBC, Route::ExpBC, {}}, {tau, L, 3.0}),
       ThresholdDist::exponentiated_uniform(tau, L, 3.0)},
      {BentFamily::make({ModelName::NBC, Route::ExpBC, {}}, {tau, L, 0.0}), ThresholdDist::normal(tau, L)},
      {BentFamily::make({ModelName::SNBC, Route::ExpBC, {}}, {tau, L, 3.0}),
       ThresholdDist::skew_normal_with_mean(tau, L, 3.0)},
      {BentFamily::make({ModelName::Lne, Route::ExpBC, {}}, {tau, L, 0.0}), ThresholdDist::logistic(tau, L)},
      {BentFamily::make({ModelName::Lch, Route::ExpBC, {}}, {tau, L, 0.0}),
       ThresholdDist::logistic(tau, 0.5 * L)},
      {BentFamily::make({ModelName::Hyp, Route::ExpBC, {}}, {tau, 2.0 * L * L, 0.0}),
       ThresholdDist::t2(tau, 2.0 * L * L)},
      {BentFamily::from_dist(Route::ExpBC, ThresholdDist::biweight(tau, L)),
       ThresholdDist::biweight(tau, L)},
  };
  const double h1 = 1e-5 * L;
  const double h2 = 1e-3 * L;
  Report r;
  for (const auto& [fam, dist] : cases) {
    std::vector<double> xs;
    const auto support = dist.support();
    for (double z : grid(-4.0, 4.0, n)) {
      const double x = tau + z * L;
      // Bounded densities jump or kink at the support ends; central differences straddling
      // them measure the jump, not the derivative.
      if (dist.bounded() &&
          (std::abs(x - support.first) < 2.0 * h2 || std::abs(x - support.second) < 2.0 * h2)) {
        continue;
      }
      xs.push_back(x);
    }
    double peak_f = 0.0;
    double peak_p = 0.0;
    for (double x : xs) {
      peak_f = std::max(peak_f, cdf(dist, x));
      peak_p = std::max(peak_p, pdf(dist, x));
    }
    double e1 = 0.0;
    double e2 = 0.0;
    for (double x : xs) {
      const double s0 = smooth_max(fam, x);
      const double d1 = (smooth_max(fam, x + h1) - smooth_max(fam, x - h1)) / (2.0 * h1);
      auto second = [&](double h) {
        return (smooth_max(fam, x + h) - 2.0 * s0 + smooth_max(fam, x - h)) / (h * h);
      };
      // Richardson step removes the O(h^2) truncation term.
      const double d2 = (4.0 * second(0.5 * h2) - second(h2)) / 3.0;
      const double f = cdf(dist, x);
      const double p = pdf(dist, x);
      e1 = std::max(e1, std::abs(d1 - f) / std::max(std::abs(f), 1e-2 * peak_f));
      e2 = std::max(e2, std::abs(d2 - p) / std::max(std::abs(p), 1e-2 * peak_p));
    }
    const std::string name = label(fam.kind());
    r.push_back(max_check("derivative-identity", name + " d/dx = cdf", e1, kDerivTol));
    r.push_back(max_check("derivative-identity", name + " d2/dx2 = pdf", e2, kDerivTol));
  }
  return r;
}

Report verify_all(std::uint64_t seed, Eigen::Index draws) {
  Report r;
  append(r, verify_route_equivalences(1000, draws, seed));
  append(r, verify_theorems());
  append(r, verify_derivative_identities());
  for (const auto& f : reference_families()) append(r, verify_conditions(f));
  append(r, verify_smm_conditions(ThresholdDist::cauchy(0.0, 1.0)));
  append(r, verify_expected_modulus(ThresholdDist::normal(0.0, 1.0), grid(-3.0, 3.0, 21), draws,
                                    seed + 100));
  return r;
}

}  // namespace bentcable
