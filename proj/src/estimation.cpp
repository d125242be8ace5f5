#include "bentcable/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "bentcable/error.hpp"
#include "bentcable/special.hpp"

namespace bentcable {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e12;
constexpr int kGridCandidates = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (generation, slot); evaluation order never touches it.
std::mt19937_64 stream(std::uint64_t seed, int generation, int slot) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(generation));
  h = splitmix64(h ^ static_cast<std::uint64_t>(slot));
  return std::mt19937_64(h);
}

double reflect(double g, double lo, double hi) {
  if (!(hi > lo)) return lo;
  const double w = hi - lo;
  double t = std::fmod(g - lo, 2.0 * w);
  if (t < 0.0) t += 2.0 * w;
  return lo + (t <= w ? t : 2.0 * w - t);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return v;
}

int genes_per_bent(const BentKind& kind) { return bent_param_count(kind); }

using Chromosome = std::vector<double>;

std::vector<BentParams> decode(const BentKind& kind, const Chromosome& c) {
  const int g = genes_per_bent(kind);
  std::vector<BentParams> bents(c.size() / static_cast<std::size_t>(g));
  for (std::size_t l = 0; l < bents.size(); ++l) {
    const double* p = c.data() + l * static_cast<std::size_t>(g);
    bents[l].tau = p[0];
    bents[l].scale = scale_from_length(kind, p[1]);
    bents[l].shape = g == 3 ? p[2] : default_shape(kind);
  }
  return bents;
}

Chromosome encode(const BentKind& kind, const std::vector<BentParams>& bents) {
  Chromosome c;
  for (const auto& b : bents) {
    c.push_back(b.tau);
    c.push_back(length_from_scale(kind, b.scale));
    if (genes_per_bent(kind) == 3) c.push_back(b.shape);
  }
  return c;
}

void gene_bounds(const std::vector<BentBox>& box, std::vector<double>& lo, std::vector<double>& hi) {
  for (const auto& b : box) {
    lo.push_back(b.tau_lo);
    hi.push_back(b.tau_hi);
    lo.push_back(b.length_lo);
    hi.push_back(b.length_hi);
    if (b.has_shape) {
      lo.push_back(b.shape_lo);
      hi.push_back(b.shape_hi);
    }
  }
}

bool is_shape_k(const BentKind& kind) {
  return kind.name == ModelName::GBC ||
         (kind.name == ModelName::Generic && kind.generic_dist == DistKind::ExponentiatedUniform);
}

double fitness(const Dataset& data, const BentKind& kind, const std::vector<BentParams>& bents) {
  try {
    if (bents.size() > 1) {
      ParamVector probe;
      probe.deltas.assign(bents.size(), 0.0);
      probe.bents = bents;
      validate(kind, probe);
    }
    const double ll = profile_ols(data, kind, bents).loglik;
    return std::isfinite(ll) ? ll : kNegInf;
  } catch (const Error&) {
    return kNegInf;
  }
}

void require_fit_size(const Dataset& data, int n_params) {
  if (data.size() < std::max<Eigen::Index>(4, n_params + 1)) {
    throw Error(ErrorKind::InsufficientData,
                "need at least " + std::to_string(std::max(4, n_params + 1)) +
                    " observations, got " + std::to_string(data.size()));
  }
  if (!(data.range() > 0.0)) {
    throw Error(ErrorKind::InsufficientData, "all x values are equal");
  }
}

}  // namespace

Dataset::Dataset(Eigen::VectorXd x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw Error(ErrorKind::MismatchedData, "x and y lengths differ");
  }
  if (x_.size() == 0) throw Error(ErrorKind::Input, "empty dataset");
  if (!x_.allFinite() || !y_.allFinite()) throw Error(ErrorKind::Input, "non-finite observation");
}

std::vector<std::vector<Eigen::Index>> Dataset::replicate_groups() const {
  std::map<double, std::vector<Eigen::Index>> by_x;
  for (Eigen::Index i = 0; i < x_.size(); ++i) by_x[x_[i]].push_back(i);
  std::vector<std::vector<Eigen::Index>> out;
  out.reserve(by_x.size());
  for (auto& kv : by_x) out.push_back(std::move(kv.second));
  return out;
}

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v[i], sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  };
  mix(x_);
  mix(y_);
  return h;
}

void GAConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Configuration, what); };
  if (population < 10) fail("population must be at least 10");
  if (min_generations < 1 || max_generations < min_generations) {
    fail("need 1 <= min_generations <= max_generations");
  }
  if (elitism < 0 || elitism >= population) fail("elitism must lie in [0, population)");
  if (tournament < 1) fail("tournament size must be positive");
  auto rate = [&](double r, const char* name) {
    if (!(r > 0.0 && r < 1.0)) fail(std::string(name) + " must lie in (0, 1)");
  };
  rate(crossover_rate, "crossover rate");
  rate(mutation_rate, "mutation rate");
  if (!(mutation_step > 0.0) || mutation_decades < 0.0) fail("invalid mutation step");
  if (stagnation_window < 1 || !(stagnation_tol >= 0.0)) fail("invalid stagnation rule");
  if (!(tau_box > 0.0) || !(length_lo > 0.0) || !(length_hi > length_lo)) fail("invalid search box");
  if (!(lambda_hi > lambda_lo) || !(k_lo > 1.0) || !(k_hi > k_lo)) fail("invalid shape box");
}

int parameter_count(const BentKind& kind, int phases) {
  return 2 + (phases - 1) * (1 + bent_param_count(kind)) + 1;
}

double loglik_from_rss(double rss, Eigen::Index n, double sigma2) {
  const double nn = static_cast<double>(n);
  return -0.5 * nn * std::log(2.0 * special::kPi) - 0.5 * nn * std::log(sigma2) -
         rss / (2.0 * sigma2);
}

double loglik(const Dataset& data, const BentKind& kind, const ParamVector& params) {
  if (!(params.sigma2 > 0.0)) throw Error(ErrorKind::ParameterDomain, "sigma2 must be positive");
  const Eigen::ArrayXd mean = eta(kind, params, data.x().array());
  const double rss = (data.y().array() - mean).square().sum();
  return loglik_from_rss(rss, data.size(), params.sigma2);
}

Eigen::MatrixXd build_design(const Dataset& data, const BentKind& kind,
                             const std::vector<BentParams>& bents) {
  const Eigen::Index n = data.size();
  Eigen::MatrixXd X(n, 2 + static_cast<Eigen::Index>(bents.size()));
  X.col(0).setOnes();
  X.col(1) = data.x();
  for (std::size_t l = 0; l < bents.size(); ++l) {
    const BentFamily fam = BentFamily::make(kind, bents[l]);
    X.col(2 + static_cast<Eigen::Index>(l)) = smooth_max(fam, data.x().array()).matrix();
  }
  return X;
}

OlsResult solve_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n < p) throw Error(ErrorKind::SingularDesign, "fewer observations than coefficients");
  const Eigen::VectorXd norms = design.colwise().norm();
  if (!(norms.minCoeff() > 0.0) || !norms.allFinite()) {
    throw Error(ErrorKind::SingularDesign, "design has a zero or non-finite column");
  }
  const Eigen::MatrixXd scaled = design * norms.cwiseInverse().asDiagonal();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues();
  const double cond = sv(p - 1) > 0.0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxCondition)) {
    throw Error(ErrorKind::SingularDesign,
                "design condition number " + std::to_string(cond) + " exceeds 1e12");
  }
  OlsResult out;
  out.coef = qr.solve(y).cwiseQuotient(norms);
  out.residuals = y - design * out.coef;
  out.rss = out.residuals.squaredNorm();
  out.sigma2 = std::max(out.rss / static_cast<double>(n), std::numeric_limits<double>::min());
  out.loglik = loglik_from_rss(out.rss, n, out.sigma2);
  out.condition = cond;
  return out;
}

OlsResult profile_ols(const Dataset& data, const BentKind& kind,
                      const std::vector<BentParams>& bents) {
  return solve_ols(build_design(data, kind, bents), data.y());
}

ParamVector assemble(const std::vector<BentParams>& bents, const OlsResult& ols) {
  ParamVector p;
  p.alpha1 = ols.coef(0);
  p.beta1 = ols.coef(1);
  for (Eigen::Index j = 2; j < ols.coef.size(); ++j) p.deltas.push_back(ols.coef(j));
  p.bents = bents;
  p.sigma2 = ols.sigma2;
  return p;
}

ParamVector grid_init(const Dataset& data, const BentKind& kind, int phases) {
  validate(kind);
  if (phases < 2) throw Error(ErrorKind::Configuration, "a model needs D >= 2 phases");
  const auto cand = linspace(data.x_min(), data.x_max(), kGridCandidates);
  const Eigen::Index n = data.size();
  const int n_bents = phases - 1;

  auto abrupt = [&](const std::vector<double>& taus) {
    Eigen::MatrixXd X(n, 2 + n_bents);
    X.col(0).setOnes();
    X.col(1) = data.x();
    for (int l = 0; l < n_bents; ++l) {
      X.col(2 + l) = (data.x().array() - taus[static_cast<std::size_t>(l)]).max(0.0).matrix();
    }
    return solve_ols(X, data.y());
  };

  std::vector<double> best_taus;
  double best_ll = kNegInf;
  OlsResult best_ols;
  auto consider = [&](const std::vector<double>& taus) {
    try {
      OlsResult ols = abrupt(taus);
      if (ols.loglik > best_ll) {
        best_ll = ols.loglik;
        best_taus = taus;
        best_ols = std::move(ols);
      }
    } catch (const Error&) {
    }
  };

  if (n_bents == 1) {
    for (double t : cand) consider({t});
  } else if (n_bents == 2) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      for (std::size_t j = i + 1; j < cand.size(); ++j) consider({cand[i], cand[j]});
    }
  } else {
    // Greedy: each additional change point scans candidates above the previous one.
    std::vector<double> taus;
    std::size_t start = 0;
    for (int l = 0; l < n_bents; ++l) {
      best_ll = kNegInf;
      std::size_t pick = cand.size();
      for (std::size_t j = start; j < cand.size(); ++j) {
        std::vector<double> trial = taus;
        trial.push_back(cand[j]);
        for (int r = l + 1; r < n_bents; ++r) {
          trial.push_back(cand.back() + r * (cand[1] - cand[0]));
        }
        const double before = best_ll;
        consider(trial);
        if (best_ll > before) pick = j;
      }
      if (pick == cand.size()) break;
      taus.push_back(cand[pick]);
      start = pick + 1;
    }
    if (static_cast<int>(taus.size()) == n_bents) consider(taus);
  }
  if (best_taus.empty()) {
    throw Error(ErrorKind::FitFailure, "every grid candidate gave a singular design");
  }

  std::vector<BentParams> bents(static_cast<std::size_t>(n_bents));
  for (int l = 0; l < n_bents; ++l) {
    auto& b = bents[static_cast<std::size_t>(l)];
    b.tau = best_taus[static_cast<std::size_t>(l)];
    b.scale = scale_from_length(kind, 0.005 * data.range());
    b.shape = default_shape(kind);
  }
  return assemble(bents, best_ols);
}

std::vector<BentBox> search_box(const Dataset& data, const BentKind& kind,
                                const ParamVector& init, const GAConfig& cfg) {
  const double delta = data.range();
  std::vector<BentBox> box;
  for (const auto& b : init.bents) {
    BentBox bb;
    bb.tau_lo = b.tau - cfg.tau_box * delta;
    bb.tau_hi = b.tau + cfg.tau_box * delta;
    bb.length_lo = cfg.length_lo * delta;
    bb.length_hi = cfg.length_hi * delta;
    bb.has_shape = bent_param_count(kind) == 3;
    if (bb.has_shape) {
      bb.shape_lo = is_shape_k(kind) ? cfg.k_lo : cfg.lambda_lo;
      bb.shape_hi = is_shape_k(kind) ? cfg.k_hi : cfg.lambda_hi;
    }
    box.push_back(bb);
  }
  return box;
}

FitResult fit(const Dataset& data, const BentKind& kind, const GAConfig& cfg, int phases) {
  validate(kind);
  cfg.validate();
  const int n_params = parameter_count(kind, phases);
  require_fit_size(data, n_params);

  const ParamVector init = grid_init(data, kind, phases);
  const auto box = search_box(data, kind, init, cfg);
  std::vector<double> lo;
  std::vector<double> hi;
  gene_bounds(box, lo, hi);
  const std::size_t n_genes = lo.size();

  Chromosome seed_chrom = encode(kind, init.bents);
  for (std::size_t g = 0; g < n_genes; ++g) seed_chrom[g] = std::clamp(seed_chrom[g], lo[g], hi[g]);

  const auto pop_size = static_cast<std::size_t>(cfg.population);
  std::vector<Chromosome> pop(pop_size);
  std::vector<double> fit_values(pop_size);
  constexpr std::size_t kSeedCopies = 5;
  for (std::size_t i = 0; i < pop_size; ++i) {
    if (i < kSeedCopies) {
      pop[i] = seed_chrom;
    } else {
      auto rng = stream(cfg.seed, 0, static_cast<int>(i));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      pop[i].resize(n_genes);
      for (std::size_t g = 0; g < n_genes; ++g) pop[i][g] = lo[g] + (hi[g] - lo[g]) * unit(rng);
    }
  }
  for (std::size_t i = 0; i < pop_size; ++i) fit_values[i] = fitness(data, kind, decode(kind, pop[i]));

  auto ranking = [&]() {
    std::vector<std::size_t> order(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit_values[a] > fit_values[b]; });
    return order;
  };

  auto order = ranking();
  if (!std::isfinite(fit_values[order[0]])) {
    throw Error(ErrorKind::FitFailure, "no initial chromosome gave a non-singular design");
  }

  FitResult result;
  result.trace.push_back(fit_values[order[0]]);
  int generation = 0;
  while (generation < cfg.max_generations) {
    ++generation;
    std::vector<Chromosome> next(pop_size);
    std::vector<double> next_fit(pop_size, kNegInf);
    const auto n_elite = static_cast<std::size_t>(cfg.elitism);
    for (std::size_t e = 0; e < n_elite; ++e) {
      next[e] = pop[order[e]];
      next_fit[e] = fit_values[order[e]];
    }
    for (std::size_t i = n_elite; i < pop_size; ++i) {
      auto rng = stream(cfg.seed, generation, static_cast<int>(i));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
      std::normal_distribution<double> gauss(0.0, 1.0);
      auto tournament = [&]() {
        std::size_t best = pick(rng);
        for (int t = 1; t < cfg.tournament; ++t) {
          const std::size_t c = pick(rng);
          if (fit_values[c] > fit_values[best] || (fit_values[c] == fit_values[best] && c < best)) {
            best = c;
          }
        }
        return best;
      };
      const std::size_t a = tournament();
      const std::size_t b = tournament();
      Chromosome child = pop[a];
      if (unit(rng) < cfg.crossover_rate) {
        for (std::size_t g = 0; g < n_genes; ++g) {
          if (unit(rng) < 0.5) child[g] = pop[b][g];
        }
      }
      for (std::size_t g = 0; g < n_genes; ++g) {
        if (unit(rng) < cfg.mutation_rate) {
          const double step = cfg.mutation_step * (hi[g] - lo[g]) *
                              std::pow(10.0, -cfg.mutation_decades * unit(rng));
          child[g] = reflect(child[g] + step * gauss(rng), lo[g], hi[g]);
        }
      }
      next[i] = std::move(child);
    }
    for (std::size_t i = n_elite; i < pop_size; ++i) next_fit[i] = fitness(data, kind, decode(kind, next[i]));
    pop = std::move(next);
    fit_values = std::move(next_fit);
    order = ranking();
    result.trace.push_back(fit_values[order[0]]);

    const auto w = static_cast<std::size_t>(cfg.stagnation_window);
    if (generation >= cfg.min_generations && result.trace.size() > w) {
      const double gain = result.trace.back() - result.trace[result.trace.size() - 1 - w];
      if (gain < cfg.stagnation_tol) {
        result.converged = true;
        break;
      }
    }
  }

  const auto best_bents = decode(kind, pop[order[0]]);
  const OlsResult ols = profile_ols(data, kind, best_bents);
  result.kind = kind;
  result.params = assemble(best_bents, ols);
  result.loglik = ols.loglik;
  result.rss = ols.rss;
  result.n_params = n_params;
  result.aic = 2.0 * n_params - 2.0 * result.loglik;
  result.n = data.size();
  result.data_fingerprint = data.fingerprint();
  result.generations = generation;
  result.box = box;
  return result;
}

double deviance_at(const Dataset& data, const FitResult& fit, double tau, double scale) {
  std::vector<BentParams> bents = fit.params.bents;
  bents.front().tau = tau;
  bents.front().scale = scale;
  return -2.0 * (fit.loglik - profile_ols(data, fit.kind, bents).loglik);
}

DevianceSurface deviance_surface(const Dataset& data, const FitResult& fit, int n_tau, int n_scale) {
  if (n_tau < 2 || n_scale < 2) throw Error(ErrorKind::Configuration, "grid needs at least 2x2 nodes");
  if (fit.box.empty()) throw Error(ErrorKind::Configuration, "fit result carries no search box");
  const BentBox& b = fit.box.front();
  DevianceSurface s;
  s.taus = linspace(b.tau_lo, b.tau_hi, n_tau);
  for (double len : linspace(b.length_lo, b.length_hi, n_scale)) {
    s.scales.push_back(scale_from_length(fit.kind, len));
  }
  s.tau_hat = fit.params.bents.front().tau;
  s.scale_hat = fit.params.bents.front().scale;
  s.values.resize(n_tau, n_scale);
  for (int i = 0; i < n_tau; ++i) {
    for (int j = 0; j < n_scale; ++j) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = deviance_at(data, fit, s.taus[static_cast<std::size_t>(i)],
                        s.scales[static_cast<std::size_t>(j)]);
      } catch (const Error&) {
      }
      s.values(i, j) = v;
    }
  }
  return s;
}

}  // namespace bentcable
