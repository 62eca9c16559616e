#include "recest/simulator.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace recest {

std::vector<double> simulate_ao(const AOConfig& config, Rng& rng) {
  if (config.n < 0 || config.burn_in < 0)
    throw std::invalid_argument("simulate_ao: negative length");
  if (!(config.eps >= 0.0 && config.eps <= 1.0))
    throw std::invalid_argument("simulate_ao: eps must lie in [0, 1]");
  if (!(config.sigma2 > 0.0)) throw std::invalid_argument("simulate_ao: sigma2 must be positive");

  const double sigma = std::sqrt(config.sigma2);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(config.n));
  double y = 0.0;
  for (int i = 0; i < config.burn_in + config.n; ++i) {
    y = config.theta * y + rng.normal();
    double x = y;
    if (config.eps > 0.0 && rng.uniform() < config.eps) x += sigma * rng.normal();
    if (i >= config.burn_in) out.push_back(x);
  }
  return out;
}

namespace {

struct ReplicationResult {
  bool failed = false;
  // squared errors [estimator][t-1]
  std::vector<std::vector<double>> sq_err;
};

ReplicationResult run_one(const ReplicationPlan& plan, const SeriesGenerator& generate,
                          const Experiment& experiment, int r) {
  ReplicationResult res;
  try {
    Rng rng(mix_seed(plan.base_seed, static_cast<std::uint64_t>(r)));
    const std::vector<double> series = generate(rng);
    const std::vector<Trajectory> trajs = experiment(series);
    if (trajs.size() != plan.estimator_ids.size())
      throw std::runtime_error("replicate: estimator count mismatch");
    res.sq_err.resize(trajs.size());
    for (std::size_t e = 0; e < trajs.size(); ++e) {
      const Trajectory& traj = trajs[e];
      if (traj.length() < plan.horizon)
        throw std::runtime_error("replicate: trajectory shorter than horizon");
      const int offset = traj.length() - plan.horizon;
      auto& row = res.sq_err[e];
      row.resize(static_cast<std::size_t>(plan.horizon));
      for (int t = 0; t < plan.horizon; ++t) {
        const double d = traj.records[static_cast<std::size_t>(offset + t)].theta[0] -
                         plan.theta_true;
        row[static_cast<std::size_t>(t)] = d * d;
      }
    }
  } catch (const std::exception&) {
    res.failed = true;
  }
  return res;
}

}  // namespace

MseMatrix replicate(const ReplicationPlan& plan, const SeriesGenerator& generate,
                    const Experiment& experiment, int workers) {
  if (plan.R < 1) throw std::invalid_argument("replicate: need R >= 1");
  if (workers < 1) workers = 1;

  std::vector<ReplicationResult> results(static_cast<std::size_t>(plan.R));
  if (workers == 1) {
    for (int r = 0; r < plan.R; ++r)
      results[static_cast<std::size_t>(r)] = run_one(plan, generate, experiment, r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < plan.R; r = next.fetch_add(1))
          results[static_cast<std::size_t>(r)] = run_one(plan, generate, experiment, r);
      });
    for (auto& th : pool) th.join();
  }

  MseMatrix out;
  out.estimator_ids = plan.estimator_ids;
  out.horizon = plan.horizon;
  out.mse.assign(plan.estimator_ids.size(),
                 std::vector<double>(static_cast<std::size_t>(plan.horizon), 0.0));
  // fixed summation order: replication index ascending
  for (int r = 0; r < plan.R; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    if (res.failed) {
      ++out.failures;
      continue;
    }
    ++out.replications_used;
    for (std::size_t e = 0; e < out.mse.size(); ++e)
      for (int t = 0; t < plan.horizon; ++t)
        out.mse[e][static_cast<std::size_t>(t)] += res.sq_err[e][static_cast<std::size_t>(t)];
  }
  if (out.failures > 0.05 * plan.R || out.replications_used == 0)
    throw ReplicationFailureError("replicate: " + std::to_string(out.failures) + " of " +
                                  std::to_string(plan.R) + " replications failed");
  for (auto& row : out.mse)
    for (double& v : row) v /= static_cast<double>(out.replications_used);
  return out;
}

}  // namespace recest
