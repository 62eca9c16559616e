#include "recest/engine.hpp"

#include <cmath>

namespace recest {

StepState step(const StepState& state, const EstimatingFunction& psi, const Normalizer& gamma,
               double x_t, const History& history, GammaMode mode) {
  const int t = state.t + 1;
  if (history.length() != state.t)
    throw std::invalid_argument("step: history must hold exactly X_1..X_{t-1}");

  // Predictable part first: Gamma_t is fixed before x_t is read.
  SquareMatrix g;
  if (gamma.theta_free || mode == GammaMode::accumulate) {
    g = (state.gamma.dim() ? state.gamma
                           : (gamma.initial.dim() ? gamma.initial
                                                  : SquareMatrix(static_cast<std::size_t>(gamma.dim))));
    g += gamma.increment(t, state.theta, history);
  } else {
    g = gamma.cumulative(t, state.theta, history);
  }

  Vec p;
  try {
    p = psi.eval(t, state.theta, x_t, history);
  } catch (const std::exception& e) {
    throw NonFiniteUpdateError(std::string("step ") + std::to_string(t) +
                                   ": estimating function failed: " + e.what(),
                               t);
  }
  if (!finite(p))
    throw NonFiniteUpdateError("step " + std::to_string(t) + ": non-finite estimating function", t);

  Vec dx;
  try {
    dx = solve_linear(g, p);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("step " + std::to_string(t) + ": singular normalizer", t);
  }

  StepState next;
  next.t = t;
  next.theta = state.theta + dx;
  next.gamma = g;
  if (!finite(next.theta))
    throw NonFiniteUpdateError("step " + std::to_string(t) + ": non-finite update", t);
  return next;
}

Trajectory run(const EstimatingFunction& psi, const Normalizer& gamma, const Vec& theta0,
               std::span<const double> series, GammaMode mode) {
  if (series.empty()) throw std::invalid_argument("run: empty series");

  Trajectory traj;
  traj.theta0 = theta0;
  traj.records.reserve(series.size());

  StepState state;
  state.t = 0;
  state.theta = theta0;
  state.gamma = gamma.initial.dim() ? gamma.initial : SquareMatrix(static_cast<std::size_t>(gamma.dim));

  const History full(series);
  for (std::size_t i = 0; i < series.size(); ++i) {
    state = step(state, psi, gamma, series[i], full.prefix(static_cast<int>(i)), mode);
    traj.records.push_back({state.t, state.theta, state.gamma});
  }
  return traj;
}

Trajectory linear_statistic(const Vec& theta_true, const EstimatingFunction& psi,
                            const Normalizer& gamma, std::span<const double> series) {
  Trajectory traj;
  traj.theta0 = theta_true;
  traj.records.reserve(series.size());

  const std::size_t m = theta_true.size();
  SquareMatrix g = gamma.initial.dim() ? gamma.initial : SquareMatrix(m);
  Vec psi_sum(m, 0.0);
  Vec delta_star(m, 0.0);  // recursive route, Delta*_0 = 0

  const History full(series);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const History past = full.prefix(t - 1);

    const SquareMatrix dg = gamma.increment(t, theta_true, past);
    g += dg;
    const Vec p = psi.eval(t, theta_true, series[i], past);
    psi_sum += p;

    Vec closed, delta_closed;
    try {
      delta_closed = solve_linear(g, psi_sum);
      // Delta*_t = Delta*_{t-1} + Gamma_t^{-1}(psi_t - dGamma_t Delta*_{t-1})
      delta_star += solve_linear(g, p - matvec(dg, delta_star));
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("linear_statistic: singular normalizer at t=" + std::to_string(t),
                                t);
    }
    closed = theta_true + delta_closed;

    const double dev = max_abs(delta_closed - delta_star);
    if (dev > 1e-10 * (1.0 + max_abs(delta_closed)))
      throw std::runtime_error("linear_statistic: closed form and recursion disagree at t=" +
                               std::to_string(t));

    traj.records.push_back({t, closed, g});
  }
  return traj;
}

}  // namespace recest
