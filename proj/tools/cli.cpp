#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bentcable/bent.hpp"
#include "bentcable/error.hpp"
#include "bentcable/estimation.hpp"
#include "bentcable/inference.hpp"
#include "bentcable/io.hpp"
#include "bentcable/mc_oracle.hpp"
#include "bentcable/special.hpp"

namespace bentcable::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kCurvePoints = 400;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularDesign:
    case ErrorKind::OptimizationFailure:
    case ErrorKind::FitFailure:
      return kFitFailure;
    default:
      return kInputError;
  }
}

std::vector<BentKind> parse_families(const RunConfig& cfg) {
  if (cfg.families.empty()) throw Error(ErrorKind::Input, "--family is required");
  std::vector<BentKind> kinds;
  for (const auto& f : cfg.families) kinds.push_back(parse_bent_kind(f));
  return kinds;
}

GAConfig ga_config(const RunConfig& cfg) {
  GAConfig ga;
  ga.seed = cfg.seed;
  ga.population = cfg.population;
  ga.min_generations = cfg.generations;
  ga.max_generations = 4 * cfg.generations;
  ga.stagnation_window = std::min(ga.stagnation_window, std::max(1, cfg.generations / 2));
  ga.validate();
  return ga;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  j["input"] = c.input;
  j["families"] = c.families;
  j["seed"] = c.seed;
  j["generations"] = c.generations;
  j["population"] = c.population;
  j["phases"] = c.phases;
  j["level"] = c.level;
  j["quantiles"] = {c.quantiles.first, c.quantiles.second};
  j["grid"] = {c.grid.first, c.grid.second};
  if (c.subcommand == "simulate") {
    j["params"] = c.params;
    j["x_range"] = {c.x_range.first, c.x_range.second};
    j["n"] = c.n;
    j["replicates"] = c.replicates;
    j["subunits"] = c.subunits;
    j["sigma"] = c.sigma;
  }
  if (c.subcommand == "verify") j["draws"] = c.draws;
  return j;
}

ordered_json header(const RunConfig& c) {
  ordered_json j;
  j["tool"] = {{"name", "bentcable"}, {"version", BENTCABLE_VERSION}};
  j["config"] = config_json(c);
  return j;
}

ordered_json data_json(const Dataset& d) {
  return {{"n", d.size()},
          {"distinct_x", d.replicate_groups().size()},
          {"x_min", d.x_min()},
          {"x_max", d.x_max()},
          {"fingerprint", hex(d.fingerprint())}};
}

ordered_json params_json(const ParamVector& p) {
  ordered_json bents = ordered_json::array();
  for (const auto& b : p.bents) bents.push_back({{"tau", b.tau}, {"scale", b.scale}, {"shape", b.shape}});
  return {{"alpha1", p.alpha1}, {"beta1", p.beta1}, {"deltas", p.deltas}, {"bents", bents},
          {"sigma2", p.sigma2}};
}

// Blom normal scores for standardized residuals, in data order.
std::vector<double> normal_scores(const Eigen::VectorXd& r) {
  const auto n = r.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r[a] < r[b]; });
  std::vector<double> scores(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = (static_cast<double>(k) + 1.0 - 0.375) / (static_cast<double>(n) + 0.25);
    scores[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = special::normal_quantile(p);
  }
  return scores;
}

struct FitBundle {
  FitResult fit;
  Eigen::VectorXd curve_x;
  Eigen::VectorXd curve_y;
  Eigen::VectorXd fitted;
};

FitBundle fit_one(const Dataset& data, const BentKind& kind, const RunConfig& cfg) {
  FitBundle b;
  b.fit = fit(data, kind, ga_config(cfg), cfg.phases);
  b.curve_x = Eigen::VectorXd::LinSpaced(kCurvePoints, data.x_min(), data.x_max());
  b.curve_y = eta(kind, b.fit.params, b.curve_x.array()).matrix();
  b.fitted = eta(kind, b.fit.params, data.x().array()).matrix();
  return b;
}

ordered_json fit_json(const Dataset& data, const FitBundle& b, const RunConfig& cfg) {
  const FitResult& f = b.fit;
  ordered_json j;
  j["family"] = label(f.kind);
  j["shape"] = std::string(to_string(classify_shape(f.kind)));
  j["params"] = params_json(f.params);
  j["loglik"] = f.loglik;
  j["aic"] = f.aic;
  j["n_params"] = f.n_params;
  j["rss"] = f.rss;
  j["converged"] = f.converged;
  j["generations"] = f.generations;
  ordered_json zones = ordered_json::array();
  for (const auto& bp : f.params.bents) {
    const auto z = transition_zone(f.kind, bp, cfg.quantiles.first, cfg.quantiles.second);
    zones.push_back({z.first, z.second});
  }
  j["transition_zones"] = zones;
  try {
    const auto lof = lack_of_fit(data, b.fitted, f.n_params - 1);
    j["lack_of_fit"] = {{"f", number(lof.f)}, {"df_lof", lof.df_lof}, {"df_pe", lof.df_pe},
                        {"ss_lof", lof.ss_lof}, {"ss_pe", lof.ss_pe}, {"p_value", lof.p_value}};
  } catch (const Error& e) {
    j["lack_of_fit"] = {{"unavailable", e.what()}};
  }
  ordered_json trace = ordered_json::array();
  for (std::size_t g = 0; g < f.trace.size(); g += 100) trace.push_back({g, number(f.trace[g])});
  trace.push_back({f.trace.size() - 1, number(f.trace.back())});
  j["trace_every_100"] = trace;
  ordered_json curve = ordered_json::array();
  for (Eigen::Index i = 0; i < b.curve_x.size(); ++i) curve.push_back({b.curve_x[i], b.curve_y[i]});
  j["curve"] = curve;
  const Eigen::VectorXd resid = data.y() - b.fitted;
  const auto scores = normal_scores(resid);
  const double sd = std::sqrt(f.params.sigma2);
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    rows.push_back({{"x", data.x()[i]},
                    {"y", data.y()[i]},
                    {"fitted", b.fitted[i]},
                    {"residual", resid[i]},
                    {"standardized", sd > 0.0 ? resid[i] / sd : 0.0},
                    {"normal_score", scores[static_cast<std::size_t>(i)]}});
  }
  j["residuals"] = rows;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Input, "cannot write '" + path + "'");
  f << text;
}

void write_json(const std::string& path, const ordered_json& j) {
  if (!path.empty()) write_text(path, j.dump(2) + "\n");
}

void print_fit(std::ostream& out, const FitResult& f, const std::pair<double, double>& zone) {
  out << label(f.kind) << "  loglik " << std::fixed << std::setprecision(5) << f.loglik << "  AIC "
      << std::setprecision(3) << f.aic << "  generations " << f.generations
      << (f.converged ? "" : " (cap reached)") << '\n';
  out << std::setprecision(4) << "  alpha1 " << f.params.alpha1 << "  beta1 " << f.params.beta1;
  for (std::size_t l = 0; l < f.params.deltas.size(); ++l) {
    const auto& b = f.params.bents[l];
    out << "  delta " << f.params.deltas[l] << "  tau " << b.tau << "  scale " << b.scale;
    if (bent_param_count(f.kind) == 3) out << "  shape " << b.shape;
  }
  out << "\n  transition zone [" << zone.first << ", " << zone.second << "]\n";
  out.unsetf(std::ios::floatfield);
}

std::string plot_csv(const Dataset& data, const std::vector<FitBundle>& fits) {
  std::ostringstream s;
  s << "family,series,x,value\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    s << "data,observed," << format_double(data.x()[i]) << ',' << format_double(data.y()[i]) << '\n';
  }
  for (const auto& b : fits) {
    const std::string name = label(b.fit.kind);
    for (Eigen::Index i = 0; i < b.curve_x.size(); ++i) {
      s << name << ",curve," << format_double(b.curve_x[i]) << ',' << format_double(b.curve_y[i]) << '\n';
    }
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      s << name << ",residual," << format_double(data.x()[i]) << ','
        << format_double(data.y()[i] - b.fitted[i]) << '\n';
    }
  }
  return s.str();
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = read_csv(cfg.input);
  const auto kinds = parse_families(cfg);
  ordered_json doc = header(cfg);
  doc["data"] = data_json(data);
  doc["fits"] = ordered_json::array();
  std::vector<FitBundle> bundles;
  for (const auto& kind : kinds) {
    bundles.push_back(fit_one(data, kind, cfg));
    const auto& f = bundles.back().fit;
    print_fit(out, f, transition_zone(f, cfg.quantiles.first, cfg.quantiles.second));
    doc["fits"].push_back(fit_json(data, bundles.back(), cfg));
  }
  write_json(cfg.out, doc);
  if (!cfg.plot_data.empty()) write_text(cfg.plot_data, plot_csv(data, bundles));
  return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = read_csv(cfg.input);
  const auto kinds = parse_families(cfg);
  std::vector<FitBundle> bundles;
  std::vector<FitResult> fits;
  for (const auto& kind : kinds) {
    bundles.push_back(fit_one(data, kind, cfg));
    fits.push_back(bundles.back().fit);
  }
  const auto table = compare(fits);
  ordered_json doc = header(cfg);
  doc["data"] = data_json(data);
  ordered_json rows = ordered_json::array();
  out << std::left << std::setw(14) << "model" << std::right << std::setw(12) << "loglik"
      << std::setw(12) << "AIC" << std::setw(8) << "Pr" << '\n';
  for (const auto& r : table) {
    out << std::left << std::setw(14) << r.label << std::right << std::fixed << std::setprecision(5)
        << std::setw(12) << r.loglik << std::setprecision(3) << std::setw(12) << r.aic
        << std::setw(8) << r.relative_likelihood << '\n';
    rows.push_back({{"family", r.label}, {"loglik", r.loglik}, {"aic", r.aic},
                    {"n_params", r.n_params}, {"relative_likelihood", r.relative_likelihood}});
  }
  out.unsetf(std::ios::floatfield);
  doc["table"] = rows;

  const auto find = [&](ModelName name) -> const FitResult* {
    for (const auto& f : fits) {
      if (f.kind.name == name) return &f;
    }
    return nullptr;
  };
  const FitResult* sn = find(ModelName::SNBC);
  const FitResult* nb = find(ModelName::NBC);
  if (sn && nb) {
    const auto t = lrt(*sn, *nb, 1);
    out << "LRT SN-BC vs N-BC: statistic " << t.statistic << "  df " << t.df << "  p " << t.p_value
        << "  lambda " << sn->params.bents.front().shape << '\n';
    doc["lrt"] = {{"full", "SN-BC"}, {"nested", "N-BC"}, {"statistic", t.statistic},
                  {"df", t.df}, {"p_value", t.p_value}, {"lambda", sn->params.bents.front().shape}};
  }
  doc["fits"] = ordered_json::array();
  for (const auto& b : bundles) doc["fits"].push_back(fit_json(data, b, cfg));
  write_json(cfg.out, doc);
  if (!cfg.plot_data.empty()) write_text(cfg.plot_data, plot_csv(data, bundles));
  return kOk;
}

int cmd_surface(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = read_csv(cfg.input);
  const auto kinds = parse_families(cfg);
  ordered_json doc = header(cfg);
  doc["data"] = data_json(data);
  doc["surfaces"] = ordered_json::array();
  std::ostringstream csv;
  csv << "family,tau,scale,deviance,inside\n";
  for (const auto& kind : kinds) {
    const FitResult f = fit(data, kind, ga_config(cfg), cfg.phases);
    const auto s = deviance_surface(data, f, cfg.grid.first, cfg.grid.second);
    const auto region = confidence_region(s.values, cfg.level);
    ordered_json values = ordered_json::array();
    ordered_json mask = ordered_json::array();
    double best = -std::numeric_limits<double>::infinity();
    int inside = 0;
    for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
      ordered_json vrow = ordered_json::array();
      ordered_json mrow = ordered_json::array();
      for (Eigen::Index j = 0; j < s.values.cols(); ++j) {
        const double v = s.values(i, j);
        vrow.push_back(number(v));
        mrow.push_back(static_cast<bool>(region.mask(i, j)));
        if (std::isfinite(v)) best = std::max(best, v);
        inside += region.mask(i, j) ? 1 : 0;
        csv << label(kind) << ',' << format_double(s.taus[static_cast<std::size_t>(i)]) << ','
            << format_double(s.scales[static_cast<std::size_t>(j)]) << ','
            << (std::isfinite(v) ? format_double(v) : std::string("NA")) << ','
            << (region.mask(i, j) ? 1 : 0) << '\n';
      }
      values.push_back(vrow);
      mask.push_back(mrow);
    }
    out << label(kind) << ": " << s.values.size() << " nodes, max deviance " << best << ", "
        << inside << " inside D > " << region.threshold << '\n';
    doc["surfaces"].push_back(
        {{"family", label(kind)},
         {"tau_hat", s.tau_hat},
         {"scale_hat", s.scale_hat},
         {"loglik", f.loglik},
         {"taus", s.taus},
         {"scales", s.scales},
         {"deviance", values},
         {"level", cfg.level},
         {"threshold", region.threshold},
         {"inside", mask},
         {"caveat", "chi-squared(2) calibration is asymptotic; coverage may be poor"}});
  }
  write_json(cfg.out, doc);
  if (!cfg.plot_data.empty()) write_text(cfg.plot_data, csv.str());
  return kOk;
}

ParamVector parse_sim_params(const std::string& text, const BentKind& kind) {
  ParamVector p;
  BentParams b;
  b.shape = default_shape(kind);
  double delta = 1.0;
  bool scale_set = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Input, "--params expects key=value pairs");
    const std::string key = item.substr(0, eq);
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Input, "--params: bad number in '" + item + "'");
    }
    if (key == "alpha") p.alpha1 = v;
    else if (key == "beta") p.beta1 = v;
    else if (key == "delta") delta = v;
    else if (key == "tau") b.tau = v;
    else if (key == "scale") { b.scale = v; scale_set = true; }
    else if (key == "shape") b.shape = v;
    else throw Error(ErrorKind::Input, "--params: unknown key '" + key + "'");
  }
  if (!scale_set) b.scale = scale_from_length(kind, 0.1);
  p.deltas = {delta};
  p.bents = {b};
  p.sigma2 = 1.0;
  return p;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto kinds = parse_families(cfg);
  if (kinds.size() != 1) throw Error(ErrorKind::Input, "simulate takes exactly one --family");
  if (cfg.n < 2 || cfg.replicates < 1 || cfg.subunits < 0) {
    throw Error(ErrorKind::Input, "need --n >= 2, --replicates >= 1, --subunits >= 0");
  }
  const BentKind kind = kinds.front();
  const ParamVector params = parse_sim_params(cfg.params, kind);
  Eigen::VectorXd x(static_cast<Eigen::Index>(cfg.n) * cfg.replicates);
  const Eigen::VectorXd base = Eigen::VectorXd::LinSpaced(cfg.n, cfg.x_range.first, cfg.x_range.second);
  for (int i = 0; i < cfg.n; ++i) {
    for (int r = 0; r < cfg.replicates; ++r) x[i * cfg.replicates + r] = base[i];
  }
  Dataset data;
  if (cfg.subunits == 0) {
    data = generate_dataset(kind, params, x, cfg.sigma, cfg.seed);
  } else {
    SimSpec spec{kind, params, x, cfg.subunits, cfg.sigma, cfg.seed};
    data = simulate_mixture(spec);
  }
  if (cfg.out.empty()) {
    write_csv(out, data);
  } else {
    std::ostringstream s;
    s << "# bentcable " << BENTCABLE_VERSION << " simulate --family " << label(kind) << " --params "
      << cfg.params << " --seed " << cfg.seed << '\n';
    write_csv(s, data);
    write_text(cfg.out, s.str());
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  Report report;
  if (cfg.families.empty()) {
    report = verify_all(cfg.seed, cfg.draws);
  } else {
    for (const auto& name : cfg.families) {
      const BentKind kind = parse_bent_kind(name);
      BentParams p{0.0, scale_from_length(kind, 1.0), default_shape(kind)};
      if (kind.name == ModelName::SNBC ||
          (kind.name == ModelName::Generic && kind.generic_dist == DistKind::SkewNormal)) {
        p.shape = 3.0;
      }
      if (kind.name == ModelName::GBC) p.shape = 3.0;
      append(report, verify_conditions(BentFamily::make(kind, p)));
    }
  }
  int unexpected = 0;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report) {
    const char* status = c.ok() ? (c.expected ? "PASS" : "EXPECTED-FAIL") : (c.expected ? "FAIL" : "UNEXPECTED-PASS");
    if (!c.ok()) ++unexpected;
    out << std::left << std::setw(16) << status << c.suite << "  " << c.name << "  residual "
        << c.residual << "  tol " << c.tolerance << '\n';
    checks.push_back({{"suite", c.suite}, {"name", c.name}, {"status", status},
                      {"residual", number(c.residual)}, {"tolerance", number(c.tolerance)}});
  }
  out << report.size() << " checks, " << unexpected << " unexpected\n";
  ordered_json doc = header(cfg);
  doc["checks"] = checks;
  doc["unexpected"] = unexpected;
  write_json(cfg.out, doc);
  return unexpected == 0 ? kOk : kVerifyFailure;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "fit") return cmd_fit(cfg, out);
    if (cfg.subcommand == "compare") return cmd_compare(cfg, out);
    if (cfg.subcommand == "surface") return cmd_surface(cfg, out);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out);
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
    err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smooth piecewise-linear (bent-cable) regression", "bentcable"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string quantiles = "0.025,0.975";
  std::string grid = "40x40";
  std::string x_range = "0,1";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.families, "Model family, e.g. BC, N-BC, Q-BC:SMM, ExpBC:Normal")
        ->delimiter(',');
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out", cfg.out, "Output path: JSON report, or CSV data for simulate");
  };
  auto fitting = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--input", cfg.input, "CSV with header x,y")->required();
    sub->add_option("--generations", cfg.generations, "Minimum GA generations");
    sub->add_option("--population", cfg.population, "GA population size");
    sub->add_option("--phases", cfg.phases, "Number of linear phases D");
    sub->add_option("--plot-data", cfg.plot_data, "Tidy CSV for plotting");
    sub->add_option("--quantiles", quantiles, "Threshold quantiles for unbounded transition zones");
  };
  auto* fit_cmd = app.add_subcommand("fit", "Fit one or more families");
  fitting(fit_cmd);
  auto* cmp_cmd = app.add_subcommand("compare", "Fit and compare families by AIC");
  fitting(cmp_cmd);
  auto* srf_cmd = app.add_subcommand("surface", "Deviance surface over (tau, scale)");
  fitting(srf_cmd);
  srf_cmd->add_option("--level", cfg.level, "Confidence level");
  srf_cmd->add_option("--grid", grid, "Grid size, e.g. 40x40");
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a dataset");
  common(sim_cmd);
  sim_cmd->add_option("--params", cfg.params, "alpha=,beta=,delta=,tau=,scale=,shape=");
  sim_cmd->add_option("--x-range", x_range, "lo,hi");
  sim_cmd->add_option("--n", cfg.n, "Distinct x values");
  sim_cmd->add_option("--replicates", cfg.replicates, "Observations per x");
  sim_cmd->add_option("--subunits", cfg.subunits, "Sub-units M per observation (0: mean curve)");
  sim_cmd->add_option("--sigma", cfg.sigma, "Noise standard deviation");
  auto* ver_cmd = app.add_subcommand("verify", "Numerical verification suites");
  common(ver_cmd);
  ver_cmd->add_option("--draws", cfg.draws, "Monte Carlo draws per check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  auto pair = [&](const std::string& text, char sep, const char* what) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) throw Error(ErrorKind::Input, std::string(what) + ": bad format");
    return std::make_pair(text.substr(0, pos), text.substr(pos + 1));
  };
  try {
    const auto [q1, q2] = pair(quantiles, ',', "--quantiles");
    cfg.quantiles = {std::stod(q1), std::stod(q2)};
    const auto [g1, g2] = pair(grid, 'x', "--grid");
    cfg.grid = {std::stoi(g1), std::stoi(g2)};
    const auto [x1, x2] = pair(x_range, ',', "--x-range");
    cfg.x_range = {std::stod(x1), std::stod(x2)};
  } catch (const Error& e) {
    err << "error [input]: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception&) {
    err << "error [input]: malformed numeric option\n";
    return kInputError;
  }
  return run(cfg, out, err);
}

}  // namespace bentcable::cli
