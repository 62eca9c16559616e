#include "recest/experiments.hpp"

#include <cmath>
#include <span>

#include "recest/models.hpp"
#include "recest/normalizers.hpp"

namespace recest {

namespace {

double mad_or_floor(std::span<const double> data) {
  try {
    return mad_scale(data);
  } catch (const ZeroScaleError&) {
    return zero_scale_floor(data);
  }
}

}  // namespace

std::vector<Trajectory> fig1_estimators(const std::vector<double>& series,
                                        const Fig1Config& config) {
  const std::size_t p = static_cast<std::size_t>(config.prefix);
  if (series.size() != p + static_cast<std::size_t>(config.n))
    throw std::invalid_argument("fig1_estimators: series length mismatch");

  const std::span<const double> prefix(series.data(), p);
  const double theta0 = prefix_least_squares_ar1(prefix);
  const double s_x = mad_or_floor(prefix);

  std::vector<double> residuals;
  residuals.reserve(p - 1);
  for (std::size_t i = 1; i < p; ++i) residuals.push_back(series[i] - theta0 * series[i - 1]);
  const double s_r = mad_or_floor(residuals);
  const ScaleEstimates scales{s_x, s_r};

  // g replaced by N(0, s_r^2), so both constants reduce to closed forms.
  const double cg_huber = c_g_huber_normal(config.huber_c);
  const double cg_hampel = c_g_hampel_normal(config.hampel_alpha, config.hampel_beta);

  const PsiFunction phi_h = PsiFunction::huber(config.huber_c);
  const PsiFunction phi_a = PsiFunction::hampel(config.hampel_alpha, config.hampel_beta);

  // Normalizers seeded from the prefix: the (GG) increments accumulated over
  // the reserved observations, so the recursion starts non-singular.
  double gamma0_h = 0.0, gamma0_a = 0.0, i0 = 1e-6;
  for (std::size_t i = 1; i < p; ++i) {
    const double xp = series[i - 1];
    gamma0_h += cg_huber * s_x * phi_h(xp / s_x) * xp;
    gamma0_a += cg_hampel * s_x * phi_a(xp / s_x) * xp;
    i0 += xp * xp;
  }

  // Recursions consume X_0 = last prefix observation as the first regressor.
  const std::span<const double> tail(series.data() + (p - 1), series.size() - (p - 1));

  const ARModel ls_model = gaussian_ar_model(1, Vec{config.theta});
  SquareMatrix I0(1);
  I0(0, 0) = i0;

  std::vector<Trajectory> out;
  out.push_back(ar_likelihood_run(ls_model, Vec{theta0}, I0, tail));
  out.push_back(gm_recursion(tail, phi_h, scales, cg_huber, theta0, gamma0_h));
  out.push_back(gm_recursion(tail, phi_a, scales, cg_hampel, theta0, gamma0_a));
  return out;
}

Fig1Output run_fig1(const Fig1Config& config) {
  ReplicationPlan plan;
  plan.R = config.R;
  plan.base_seed = config.base_seed;
  plan.horizon = config.n;
  plan.prefix = config.prefix;
  plan.theta_true = config.theta;
  plan.estimator_ids = {"ls", "huber_gm", "hampel_gm"};

  AOConfig ao;
  ao.theta = config.theta;
  ao.eps = config.eps;
  ao.sigma2 = config.sigma2;
  ao.n = config.prefix + config.n;
  ao.burn_in = config.burn_in;

  const SeriesGenerator generate = [ao](Rng& rng) { return simulate_ao(ao, rng); };
  const Experiment experiment = [config](const std::vector<double>& series) {
    return fig1_estimators(series, config);
  };

  Fig1Output out;
  out.estimator_ids = plan.estimator_ids;
  out.mse = replicate(plan, generate, experiment, config.workers);

  // single realization from replication 0
  Rng rng(mix_seed(config.base_seed, 0));
  const std::vector<double> series = generate(rng);
  const std::vector<Trajectory> trajs = experiment(series);
  for (const Trajectory& traj : trajs) {
    std::vector<double> path;
    path.reserve(traj.records.size());
    for (const auto& rec : traj.records) path.push_back(rec.theta[0]);
    out.trace.push_back(std::move(path));
  }
  return out;
}

NormalityOutput run_normality(const NormalityExperimentConfig& config) {
  const IIDModel model = normal_location_model(config.sigma);
  const EstimatingFunction psi = score_function(model);
  const Normalizer gamma = fisher_normalizer(model);
  const Vec theta_true{config.theta_true};

  std::vector<double> samples(static_cast<std::size_t>(config.R));
  const double root_T = std::sqrt(static_cast<double>(config.T));
  // replications are cheap; worker plumbing is not needed here
  for (int r = 0; r < config.R; ++r) {
    Rng rng(mix_seed(config.base_seed, static_cast<std::uint64_t>(r)));
    std::vector<double> series(static_cast<std::size_t>(config.T));
    for (double& x : series) x = model.sample(theta_true, rng);
    const Trajectory traj = run(psi, gamma, Vec{0.0}, series);
    samples[static_cast<std::size_t>(r)] =
        root_T * (traj.records.back().theta[0] - config.theta_true);
  }

  SquareMatrix target(1);
  target(0, 0) = config.sigma * config.sigma;  // i^{-1}(theta)
  std::vector<Vec> sample_vecs;
  sample_vecs.reserve(samples.size());
  for (double s : samples) sample_vecs.push_back(Vec{s});

  NormalityOutput out;
  out.report = normality_check(sample_vecs, target);
  out.samples = std::move(samples);
  return out;
}

}  // namespace recest
