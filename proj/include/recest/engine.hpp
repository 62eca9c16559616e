#ifndef RECEST_ENGINE_HPP
#define RECEST_ENGINE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "recest/linalg.hpp"

namespace recest {

/// Read-only view of the observations X_1..X_t available at some step.
/// Indexing is 1-based to match the time index of the series; an optional
/// access log records every index read (used by the predictability probe).
class History {
 public:
  History() = default;
  History(std::span<const double> xs, std::vector<int>* access_log = nullptr)
      : xs_(xs), log_(access_log) {}

  /// X_t for t in 1..length().
  double x(int t) const {
    if (t < 1 || t > static_cast<int>(xs_.size()))
      throw std::out_of_range("History: observation index out of range");
    if (log_) log_->push_back(t);
    return xs_[static_cast<std::size_t>(t - 1)];
  }

  int length() const { return static_cast<int>(xs_.size()); }

  /// Observations 1..t, sharing the same access log.
  History prefix(int t) const {
    return History(xs_.subspan(0, static_cast<std::size_t>(t)), log_);
  }

 private:
  std::span<const double> xs_;
  std::vector<int>* log_ = nullptr;
};

/// The sequence psi_t(theta; X_t, X_1..X_{t-1}).
struct EstimatingFunction {
  int dim = 1;
  bool martingale_difference = false;
  std::function<Vec(int t, const Vec& theta, double x_t, const History& past)> eval;
};

/// Predictable normalizer: Gamma_t = initial + sum of increments.
/// theta_free marks increments that do not depend on theta, enabling the
/// O(1) accumulation fast path in the engine.
struct Normalizer {
  int dim = 1;
  bool theta_free = false;
  SquareMatrix initial;  // Gamma_0; zero by default
  std::function<SquareMatrix(int t, const Vec& theta, const History& past)> increment;

  /// Gamma_t(theta) = initial + sum_{s<=t} increment(s, theta, X_1..X_{s-1}).
  SquareMatrix cumulative(int t, const Vec& theta, const History& history) const {
    SquareMatrix g = initial.dim() ? initial : SquareMatrix(static_cast<std::size_t>(dim));
    for (int s = 1; s <= t; ++s) g += increment(s, theta, history.prefix(s - 1));
    return g;
  }
};

inline Normalizer zero_start_normalizer(
    int dim, bool theta_free,
    std::function<SquareMatrix(int, const Vec&, const History&)> inc) {
  Normalizer n;
  n.dim = dim;
  n.theta_free = theta_free;
  n.initial = SquareMatrix(static_cast<std::size_t>(dim));
  n.increment = std::move(inc);
  return n;
}

/// How Gamma_t(theta_hat_{t-1}) is formed for theta-dependent normalizers:
/// either the cumulative matrix is re-evaluated at the current estimate
/// (the literal reading of the recursion) or increments are accumulated at
/// the estimates current when they were produced. The two coincide for
/// theta-free increments.
enum class GammaMode { reevaluate, accumulate };

class NonFiniteUpdateError : public std::runtime_error {
 public:
  explicit NonFiniteUpdateError(std::string what, int step = -1)
      : std::runtime_error(std::move(what)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct StepState {
  int t = 0;
  Vec theta;
  SquareMatrix gamma;  // Gamma_t as used at this step (Gamma_0 for t = 0)
};

struct TrajectoryRecord {
  int t;
  Vec theta;
  SquareMatrix gamma;
};

struct Trajectory {
  Vec theta0;
  std::vector<TrajectoryRecord> records;

  const TrajectoryRecord& at(int t) const {
    return records.at(static_cast<std::size_t>(t - 1));
  }
  int length() const { return static_cast<int>(records.size()); }
};

/// One step of theta_t = theta_{t-1} + Gamma_t^{-1}(theta_{t-1}) psi_t(theta_{t-1}).
/// `history` must expose exactly the observations X_1..X_{t-1}; the normalizer
/// is evaluated before x_t is touched.
StepState step(const StepState& state, const EstimatingFunction& psi, const Normalizer& gamma,
               double x_t, const History& history, GammaMode mode = GammaMode::reevaluate);

/// Folds step() over the whole series.
Trajectory run(const EstimatingFunction& psi, const Normalizer& gamma, const Vec& theta0,
               std::span<const double> series, GammaMode mode = GammaMode::reevaluate);

/// The linear statistic theta*_t = theta + Gamma_t^{-1}(theta) sum_{s<=t} psi_s(theta),
/// computed both in closed form and through its one-step recursion; the two
/// routes are asserted to agree within 1e-10 at every t.
Trajectory linear_statistic(const Vec& theta_true, const EstimatingFunction& psi,
                            const Normalizer& gamma, std::span<const double> series);

}  // namespace recest

#endif  // RECEST_ENGINE_HPP
