#ifndef RECEST_DIAGNOSTICS_HPP
#define RECEST_DIAGNOSTICS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "recest/engine.hpp"
#include "recest/models.hpp"

namespace recest {

class GridMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The scaling matrices A_t of the asymptotic-linearity statements.
struct ScalingSequence {
  std::string tag;
  std::function<SquareMatrix(int t, const History& past)> at;
};

/// A_t = sqrt(t) * identity.
ScalingSequence sqrt_t_scaling(int dim);
/// A_t = sqrt(H_t) for a CAEF model, H_t = H_0 + sum_{s<=t} h(X_{s-1});
/// x0 is the observation preceding the probed series.
ScalingSequence caef_h_sqrt_scaling(const CAEFModel& model, double x0, double H0 = 0.0);

/// r_t = A_t (theta_t - theta*_t); both trajectories must share the time grid.
std::vector<Vec> linearity_residual(const Trajectory& traj, const Trajectory& linear_traj,
                                    const ScalingSequence& A, std::span<const double> series);

/// b_t(theta, u) = E_theta{ psi_t(theta + u) | F_{t-1} } by quadrature against
/// the model's one-step conditional law.
Vec conditional_drift(const ConditionalModel& model, const EstimatingFunction& psi, int t,
                      const Vec& theta, const Vec& u, const History& past,
                      const QuadratureOptions& opt = {});

/// Closed form of the drift for the conditionally additive family:
/// b_t(theta, u) = h(X_{t-1}) (gamma_dot(theta) - gamma_dot(theta + u)).
double caef_conditional_drift(const CAEFModel& model, double theta, double u, double x_prev);

/// R_t(theta, u) = Gamma_t(theta) Gamma_t^{-1}(theta + u) b_t(theta, u).
Vec r_field(const ConditionalModel& model, const EstimatingFunction& psi, const Normalizer& gamma,
            int t, const Vec& theta, const Vec& u, const History& past,
            const QuadratureOptions& opt = {});

/// The sequence A_t Gamma_t^{-1}(theta) A_t together with a convergence
/// indicator: the max pairwise entry deviation over the last quarter.
struct ConditionEProbe {
  std::vector<SquareMatrix> values;  // one per t = 1..n
  double tail_deviation = 0.0;
};
ConditionEProbe condition_E_probe(const Normalizer& gamma, const ScalingSequence& A,
                                  const Vec& theta, std::span<const double> series);

/// j_psi(theta) = E[ psi psi^T ] under the model density.
SquareMatrix j_psi(const IIDModel& model, const EstimatingFunction& psi, const Vec& theta,
                   const QuadratureOptions& opt = {});

struct NormalityReport {
  Vec sample_mean;
  SquareMatrix sample_cov;
  SquareMatrix target_cov;
  Vec ks_statistic;  // per component, against the target normal marginal
  int n_samples = 0;
};

/// Empirical moments of the root-scaled errors plus a per-component
/// Kolmogorov-Smirnov statistic against N(0, target_cov_jj).
NormalityReport normality_check(const std::vector<Vec>& samples, const SquareMatrix& target_cov);

/// One-sample KS statistic of `xs` against the N(0, sd^2) cdf.
double ks_statistic_normal(std::vector<double> xs, double sd);

}  // namespace recest

#endif  // RECEST_DIAGNOSTICS_HPP
