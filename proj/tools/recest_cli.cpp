// Command-line front end: config-driven simulation, estimation and
// diagnostics, plus the two packaged experiments.
//
// Exit codes: 0 success, 2 config error, 3 IO error, 4 numerical failure,
// 5 replication-failure threshold.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "recest/diagnostics.hpp"
#include "recest/experiments.hpp"
#include "recest/models.hpp"
#include "recest/normalizers.hpp"
#include "recest/robust.hpp"
#include "recest/simulator.hpp"

using json = nlohmann::json;
using namespace recest;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  return j;
}

// Strict validation: unknown keys are rejected, required keys must be present.
void check_keys(const json& j, const std::string& ctx, const std::set<std::string>& allowed,
                const std::set<std::string>& required = {}) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + ctx);
  for (const auto& k : required)
    if (!j.contains(k)) throw ConfigError("missing required key '" + k + "' in " + ctx);
}

double get_num(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + p.string());
  return out;
}

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file: " + path);
  std::vector<double> xs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find_last_of(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      if (pos != field.size()) continue;  // header row
      xs.push_back(v);
    } catch (const std::exception&) {
      continue;  // header row
    }
  }
  if (xs.empty()) throw ConfigError("data file contains no observations: " + path);
  return xs;
}

struct ModelConfig {
  std::string id;
  json params;
};

ModelConfig parse_model(const json& cfg) {
  if (!cfg.contains("model")) throw ConfigError("missing required key 'model'");
  const json& m = cfg.at("model");
  check_keys(m, "model",
             {"id", "sigma", "order", "theta", "eps", "sigma2", "x0"}, {"id"});
  ModelConfig mc;
  mc.id = m.at("id").get<std::string>();
  mc.params = m;
  if (mc.id != "normal_location" && mc.id != "ar" && mc.id != "gw_poisson" && mc.id != "ao")
    throw ConfigError("unknown model id '" + mc.id + "'");
  return mc;
}

Vec parse_theta_vec(const json& j, const std::string& key, std::size_t dim, double fallback) {
  if (!j.contains(key)) return Vec(dim, fallback);
  const json& v = j.at(key);
  if (v.is_number()) return Vec(dim, v.get<double>());
  if (!v.is_array()) throw ConfigError("'" + key + "' must be a number or array");
  Vec out;
  for (const auto& e : v) out.push_back(e.get<double>());
  if (out.size() != dim) throw ConfigError("'" + key + "' has the wrong dimension");
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::uint64_t seed_override, bool has_seed_override) {
  const json cfg = load_config(config_path);
  check_keys(cfg, "config", {"model", "simulate"}, {"model", "simulate"});
  const ModelConfig mc = parse_model(cfg);
  const json& sim = cfg.at("simulate");
  check_keys(sim, "simulate", {"n", "burn_in", "seed"}, {"n"});

  const int n = sim.at("n").get<int>();
  const int burn_in = static_cast<int>(get_num(sim, "burn_in", 50));
  std::uint64_t seed = static_cast<std::uint64_t>(get_num(sim, "seed", 0));
  if (has_seed_override) seed = seed_override;
  if (n <= 0 || burn_in < 0) throw ConfigError("simulate: need n > 0 and burn_in >= 0");

  Rng rng(seed);
  std::vector<double> series;
  if (mc.id == "ao") {
    AOConfig ao;
    ao.theta = get_num(mc.params, "theta", 0.6);
    ao.eps = get_num(mc.params, "eps", 0.05);
    ao.sigma2 = get_num(mc.params, "sigma2", 9.0);
    ao.n = n;
    ao.burn_in = burn_in;
    series = simulate_ao(ao, rng);
  } else if (mc.id == "ar") {
    const int order = static_cast<int>(get_num(mc.params, "order", 1));
    const Vec theta = parse_theta_vec(mc.params, "theta", static_cast<std::size_t>(order), 0.0);
    series = ar_simulate(gaussian_ar_model(order, theta, get_num(mc.params, "sigma", 1.0)), n,
                         burn_in, rng);
  } else if (mc.id == "normal_location") {
    const IIDModel model = normal_location_model(get_num(mc.params, "sigma", 1.0));
    const Vec theta{get_num(mc.params, "theta", 0.0)};
    series.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) series.push_back(model.sample(theta, rng));
  } else {  // gw_poisson; the first emitted value is the initial population
    const CAEFModel gw = galton_watson_poisson();
    const double theta = get_num(mc.params, "theta", std::log(1.5));
    double x = get_num(mc.params, "x0", 10.0);
    series.push_back(x);
    for (int i = 1; i < n; ++i) {
      x = gw.sample_transition(theta, x, rng);
      series.push_back(x);
    }
  }

  const std::filesystem::path dir(out_dir);
  auto csv = open_out(dir / "series.csv");
  csv << "t,x\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    csv << (i + 1) << "," << fmt(series[i]) << "\n";

  json meta = cfg;
  meta["simulate"]["seed"] = seed;
  auto mf = open_out(dir / "series_meta.json");
  mf << meta.dump(2) << "\n";
  return 0;
}

struct EstimatorConfig {
  std::string psi;  // mle | huber | hampel
  double c = 1.8, alpha = 1.8, beta = 4.0;
  double ridge = 1e-6;
  int prefix = 30;
  json raw;
};

EstimatorConfig parse_estimator(const json& cfg) {
  if (!cfg.contains("estimator")) throw ConfigError("missing required key 'estimator'");
  const json& e = cfg.at("estimator");
  check_keys(e, "estimator", {"psi", "c", "alpha", "beta", "theta0", "ridge", "prefix"}, {"psi"});
  EstimatorConfig ec;
  ec.psi = e.at("psi").get<std::string>();
  ec.c = get_num(e, "c", 1.8);
  ec.alpha = get_num(e, "alpha", 1.8);
  ec.beta = get_num(e, "beta", 4.0);
  ec.ridge = get_num(e, "ridge", 1e-6);
  ec.prefix = static_cast<int>(get_num(e, "prefix", 30));
  ec.raw = e;
  if (ec.psi != "mle" && ec.psi != "huber" && ec.psi != "hampel")
    throw ConfigError("unknown estimator psi '" + ec.psi + "'");
  return ec;
}

Trajectory run_estimator(const ModelConfig& mc, const EstimatorConfig& ec,
                         const std::vector<double>& series) {
  if (ec.psi == "mle") {
    if (mc.id == "normal_location") {
      const IIDModel model = normal_location_model(get_num(mc.params, "sigma", 1.0));
      const Vec theta0 = parse_theta_vec(ec.raw, "theta0", 1, 0.0);
      return run(score_function(model), fisher_normalizer(model), theta0, series);
    }
    if (mc.id == "ar") {
      const int order = static_cast<int>(get_num(mc.params, "order", 1));
      const ARModel model = gaussian_ar_model(order, Vec(static_cast<std::size_t>(order), 0.0),
                                              get_num(mc.params, "sigma", 1.0));
      const Vec theta0 =
          parse_theta_vec(ec.raw, "theta0", static_cast<std::size_t>(order), 0.0);
      const SquareMatrix I0 = ec.ridge * SquareMatrix::identity(static_cast<std::size_t>(order));
      return ar_likelihood_run(model, theta0, I0, series);
    }
    if (mc.id == "gw_poisson") {
      const CAEFModel gw = galton_watson_poisson();
      const Vec theta0 = parse_theta_vec(ec.raw, "theta0", 1, 0.0);
      return caef_run(gw, theta0[0], series);
    }
    throw ConfigError("estimator 'mle' is not available for model '" + mc.id + "'");
  }

  // GM recursions: AR(1) with the prefix protocol (initial estimate, MAD
  // scales and the normalizer seed all from the reserved prefix).
  if (mc.id != "ar" && mc.id != "ao")
    throw ConfigError("estimator '" + ec.psi + "' requires an AR(1)/AO data model");
  const int p = ec.prefix;
  if (static_cast<int>(series.size()) < p + 2)
    throw ConfigError("data shorter than the estimator prefix");

  const std::span<const double> prefix(series.data(), static_cast<std::size_t>(p));
  const double theta0 = prefix_least_squares_ar1(prefix);
  double s_x, s_r;
  try {
    s_x = mad_scale(prefix);
  } catch (const ZeroScaleError&) {
    s_x = zero_scale_floor(prefix);
  }
  std::vector<double> residuals;
  for (int i = 1; i < p; ++i)
    residuals.push_back(series[static_cast<std::size_t>(i)] -
                        theta0 * series[static_cast<std::size_t>(i - 1)]);
  try {
    s_r = mad_scale(residuals);
  } catch (const ZeroScaleError&) {
    s_r = zero_scale_floor(residuals);
  }

  const PsiFunction phi = ec.psi == "huber" ? PsiFunction::huber(ec.c)
                                            : PsiFunction::hampel(ec.alpha, ec.beta);
  const double cg = ec.psi == "huber" ? c_g_huber_normal(ec.c)
                                      : c_g_hampel_normal(ec.alpha, ec.beta);
  double gamma0 = 0.0;
  for (int i = 1; i < p; ++i) {
    const double xp = series[static_cast<std::size_t>(i - 1)];
    gamma0 += cg * s_x * phi(xp / s_x) * xp;
  }
  const std::span<const double> tail(series.data() + (p - 1),
                                     series.size() - static_cast<std::size_t>(p - 1));
  return gm_recursion(tail, phi, {s_x, s_r}, cg, theta0, gamma0);
}

int cmd_estimate(const std::string& config_path, const std::string& data_path,
                 const std::string& out_dir) {
  const json cfg = load_config(config_path);
  check_keys(cfg, "config", {"model", "estimator"}, {"model", "estimator"});
  const ModelConfig mc = parse_model(cfg);
  const EstimatorConfig ec = parse_estimator(cfg);
  const std::vector<double> series = read_series_csv(data_path);

  const Trajectory traj = run_estimator(mc, ec, series);

  const std::filesystem::path dir(out_dir);
  auto csv = open_out(dir / "trajectory.csv");
  csv << "t,component,theta_hat\n";
  for (const auto& rec : traj.records)
    for (std::size_t j = 0; j < rec.theta.size(); ++j)
      csv << rec.t << "," << j << "," << fmt(rec.theta[j]) << "\n";

  const auto& last = traj.records.back();
  json final_state;
  final_state["t"] = last.t;
  final_state["theta_hat"] = last.theta;
  std::vector<std::vector<double>> gamma_rows;
  for (std::size_t i = 0; i < last.gamma.dim(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < last.gamma.dim(); ++j) row.push_back(last.gamma(i, j));
    gamma_rows.push_back(std::move(row));
  }
  final_state["gamma"] = gamma_rows;
  final_state["step_failures"] = 0;
  auto jf = open_out(dir / "final_state.json");
  jf << final_state.dump(2) << "\n";
  return 0;
}

int cmd_diagnose(const std::string& config_path, const std::string& data_path,
                 const std::string& out_dir) {
  const json cfg = load_config(config_path);
  check_keys(cfg, "config", {"model", "estimator", "diagnostics"},
             {"model", "estimator", "diagnostics"});
  const ModelConfig mc = parse_model(cfg);
  const EstimatorConfig ec = parse_estimator(cfg);
  const json& d = cfg.at("diagnostics");
  check_keys(d, "diagnostics", {"theta_true", "residual", "condition_e", "scaling"});

  const bool want_residual = d.value("residual", true);
  const bool want_cond_e = d.value("condition_e", true);
  if (!want_residual && !want_cond_e) return 0;  // probes disabled

  if (!d.contains("theta_true"))
    throw ConfigError("missing required key 'theta_true' in diagnostics");
  if (mc.id != "normal_location" || ec.psi != "mle")
    throw ConfigError("diagnose supports the normal_location mle estimator");

  const IIDModel model = normal_location_model(get_num(mc.params, "sigma", 1.0));
  const Vec theta_true = parse_theta_vec(d, "theta_true", 1, 0.0);
  const std::vector<double> series = read_series_csv(data_path);

  const EstimatingFunction psi = score_function(model);
  const Normalizer gamma = fisher_normalizer(model);
  const Vec theta0 = parse_theta_vec(ec.raw, "theta0", 1, 0.0);

  const std::filesystem::path dir(out_dir);
  if (want_residual) {
    const Trajectory traj = run(psi, gamma, theta0, series);
    const Trajectory lin = linear_statistic(theta_true, psi, gamma, series);
    const auto residuals = linearity_residual(traj, lin, sqrt_t_scaling(1), series);
    auto csv = open_out(dir / "residual.csv");
    csv << "t,component,value\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
      for (std::size_t j = 0; j < residuals[i].size(); ++j)
        csv << (i + 1) << "," << j << "," << fmt(residuals[i][j]) << "\n";
  }
  if (want_cond_e) {
    const auto probe = condition_E_probe(gamma, sqrt_t_scaling(1), theta_true, series);
    auto csv = open_out(dir / "condition_e.csv");
    csv << "t,i,j,value\n";
    for (std::size_t k = 0; k < probe.values.size(); ++k)
      for (std::size_t i = 0; i < probe.values[k].dim(); ++i)
        for (std::size_t j = 0; j < probe.values[k].dim(); ++j)
          csv << (k + 1) << "," << i << "," << j << "," << fmt(probe.values[k](i, j)) << "\n";
  }
  return 0;
}

int cmd_experiment_fig1(const std::string& out_dir, int workers, std::uint64_t seed_override,
                        bool has_seed_override) {
  Fig1Config cfg;
  cfg.workers = workers;
  if (has_seed_override) cfg.base_seed = seed_override;
  const Fig1Output out = run_fig1(cfg);

  const std::filesystem::path dir(out_dir);
  auto mse = open_out(dir / "fig1_mse.csv");
  mse << "estimator_id,t,mse\n";
  for (std::size_t e = 0; e < out.estimator_ids.size(); ++e)
    for (int t = 5; t <= cfg.n; ++t)
      mse << out.estimator_ids[e] << "," << t << ","
          << fmt(out.mse.mse[e][static_cast<std::size_t>(t - 1)]) << "\n";

  auto trace = open_out(dir / "fig1_trace.csv");
  trace << "estimator_id,t,theta_hat\n";
  for (std::size_t e = 0; e < out.estimator_ids.size(); ++e)
    for (std::size_t t = 0; t < out.trace[e].size(); ++t)
      trace << out.estimator_ids[e] << "," << (t + 1) << "," << fmt(out.trace[e][t]) << "\n";
  return 0;
}

int cmd_experiment_normality(const std::string& out_dir, std::uint64_t seed_override,
                             bool has_seed_override) {
  NormalityExperimentConfig cfg;
  if (has_seed_override) cfg.base_seed = seed_override;
  const NormalityOutput out = run_normality(cfg);

  json rep;
  rep["n_samples"] = out.report.n_samples;
  rep["sample_mean"] = out.report.sample_mean[0];
  rep["sample_variance"] = out.report.sample_cov(0, 0);
  rep["target_variance"] = out.report.target_cov(0, 0);
  rep["ks_statistic"] = out.report.ks_statistic[0];
  rep["T"] = cfg.T;
  rep["R"] = cfg.R;
  auto jf = open_out(std::filesystem::path(out_dir) / "normality.json");
  jf << rep.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursive parameter-estimation toolkit"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_dir = ".";
  int workers = 1;
  std::uint64_t seed = 0;
  bool has_seed = false;

  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker thread count");
  auto* seed_opt = app.add_option("--seed", seed, "seed override");

  auto* sim = app.add_subcommand("simulate", "generate a series from a model config");
  sim->add_option("--config", config_path, "config file")->required();
  auto* est = app.add_subcommand("estimate", "run a recursive estimator on a data file");
  est->add_option("--config", config_path, "config file")->required();
  est->add_option("--data", data_path, "series CSV")->required();
  auto* dia = app.add_subcommand("diagnose", "asymptotic-linearity diagnostics");
  dia->add_option("--config", config_path, "config file")->required();
  dia->add_option("--data", data_path, "series CSV")->required();
  auto* fig1 = app.add_subcommand("experiment-fig1", "packaged robust AR(1) comparison");
  auto* norm = app.add_subcommand("experiment-normality", "packaged normality experiment");
  // let --out / --workers / --seed appear after the subcommand name
  for (auto* sub : {sim, est, dia, fig1, norm}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }
  has_seed = seed_opt->count() > 0;

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed, has_seed);
    if (est->parsed()) return cmd_estimate(config_path, data_path, out_dir);
    if (dia->parsed()) return cmd_diagnose(config_path, data_path, out_dir);
    if (fig1->parsed()) return cmd_experiment_fig1(out_dir, workers, seed, has_seed);
    if (norm->parsed()) return cmd_experiment_normality(out_dir, seed, has_seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const ReplicationFailureError& e) {
    std::fprintf(stderr, "replication failure: %s\n", e.what());
    return 5;
  } catch (const SingularMatrixError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const NonFiniteUpdateError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const DegenerateNormalizerError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
