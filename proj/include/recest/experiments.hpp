#ifndef RECEST_EXPERIMENTS_HPP
#define RECEST_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "recest/diagnostics.hpp"
#include "recest/robust.hpp"
#include "recest/simulator.hpp"

namespace recest {

/// The robust AR(1) comparison: least squares vs Huber-GM vs Hampel-GM on
/// additive-outlier data, with the prefix protocol (initial estimate and
/// scales from the first `prefix` observations, recursion on the rest).
struct Fig1Config {
  double theta = 0.6;
  double eps = 0.05;
  double sigma2 = 9.0;
  int n = 200;
  int prefix = 30;
  int burn_in = 50;
  int R = 300;
  std::uint64_t base_seed = 0x5eed0f161ULL;
  double huber_c = 1.8;
  double hampel_alpha = 1.8;
  double hampel_beta = 4.0;
  int workers = 1;
};

struct Fig1Output {
  MseMatrix mse;                                  // estimators: ls, huber_gm, hampel_gm
  std::vector<std::vector<double>> trace;         // [estimator][t-1], replication 0
  std::vector<std::string> estimator_ids;
};

/// Trajectories (ls, huber_gm, hampel_gm) for one prepared series of length
/// prefix + n; each trajectory has n records.
std::vector<Trajectory> fig1_estimators(const std::vector<double>& series,
                                        const Fig1Config& config);

Fig1Output run_fig1(const Fig1Config& config);

/// Monte Carlo normality of the normal-location likelihood recursion:
/// samples of sqrt(T) (theta_T - theta) across replications, checked
/// against N(0, sigma^2).
struct NormalityExperimentConfig {
  double sigma = 1.0;
  double theta_true = 0.5;
  int T = 500;
  int R = 2000;
  std::uint64_t base_seed = 0x5eedca41ULL;
  int workers = 1;
};

struct NormalityOutput {
  NormalityReport report;
  std::vector<double> samples;  // sqrt(T) (theta_T - theta_true)
};

NormalityOutput run_normality(const NormalityExperimentConfig& config);

}  // namespace recest

#endif  // RECEST_EXPERIMENTS_HPP
