#ifndef RECEST_SIMULATOR_HPP
#define RECEST_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "recest/engine.hpp"
#include "recest/rng.hpp"

namespace recest {

/// AR(1) with additive-effect outliers: Y_t = theta Y_{t-1} + w_t,
/// X_t = Y_t + v_t, w ~ N(0,1), v ~ (1-eps) delta_0 + eps N(0, sigma2).
struct AOConfig {
  double theta = 0.6;
  double eps = 0.05;
  double sigma2 = 9.0;
  int n = 230;       // returned after the burn-in
  int burn_in = 50;  // transient discarded (Y_0 = 0)
  std::uint64_t seed = 0;
};

/// Generates the contaminated series; length n after discarding burn_in.
/// With eps = 0 no contamination draws are consumed, so the output equals
/// the clean AR(1) path from the same seed stream.
std::vector<double> simulate_ao(const AOConfig& config, Rng& rng);

struct ReplicationPlan {
  int R = 300;
  std::uint64_t base_seed = 0;
  int horizon = 200;           // trajectory length expected from each estimator
  int prefix = 30;             // reserved head of each series
  double theta_true = 0.6;
  std::vector<std::string> estimator_ids;
};

struct MseMatrix {
  std::vector<std::string> estimator_ids;
  int horizon = 0;
  std::vector<std::vector<double>> mse;  // [estimator][t-1]
  int failures = 0;
  int replications_used = 0;
};

class ReplicationFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SeriesGenerator = std::function<std::vector<double>(Rng&)>;
using Experiment = std::function<std::vector<Trajectory>(const std::vector<double>& series)>;

/// Runs R seeded replications (seed_r = mix_seed(base_seed, r)) and averages
/// squared errors of the last `horizon` trajectory points per estimator.
/// Failed replications are excluded and counted; more than 5% failures
/// aborts. Assembly order is fixed by replication index, so the result is
/// identical for any worker count.
MseMatrix replicate(const ReplicationPlan& plan, const SeriesGenerator& generate,
                    const Experiment& experiment, int workers = 1);

}  // namespace recest

#endif  // RECEST_SIMULATOR_HPP
