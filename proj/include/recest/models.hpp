#ifndef RECEST_MODELS_HPP
#define RECEST_MODELS_HPP

#include <functional>
#include <span>

#include "recest/engine.hpp"
#include "recest/quadrature.hpp"
#include "recest/rng.hpp"

namespace recest {

/// Generic view of a statistical model as the diagnostics and normalizer
/// layers need it: the one-step conditional law of X_t given the past, the
/// score, and the conditional Fisher increment.
struct ConditionalModel {
  int dim = 1;
  bool fisher_theta_free = false;
  std::function<ConditionalLaw(int t, const Vec& theta, const History& past)> law;
  std::function<Vec(int t, const Vec& theta, double x, const History& past)> score;
  std::function<SquareMatrix(int t, const Vec& theta, const History& past)> fisher_increment;
};

/// i.i.d. scheme: common density f(theta, x), score, Fisher matrix, sampler.
struct IIDModel {
  int dim = 1;
  bool fisher_theta_free = false;  // i(theta) constant in theta
  std::function<double(const Vec& theta, double x)> density;
  std::function<Vec(const Vec& theta, double x)> score;
  std::function<SquareMatrix(const Vec& theta)> fisher;
  std::function<double(const Vec& theta, Rng&)> sample;
  std::function<ConditionalLaw(const Vec& theta)> law;
};

ConditionalModel as_conditional(const IIDModel& model);

/// Normal location family N(theta, sigma^2): l = (x - theta)/sigma^2, i = 1/sigma^2.
IIDModel normal_location_model(double sigma);

/// The score of an IIDModel as an estimating function (MLE recursion input).
EstimatingFunction score_function(const IIDModel& model);

/// Affine procedure theta_t = theta_{t-1} + Gamma_t^{-1}(h_t - gamma_t theta_{t-1}).
struct LinearProcedure {
  int dim = 1;
  std::function<Vec(int t, double x_t, const History& past)> h;       // adapted
  std::function<SquareMatrix(int t, const History& past)> gamma;      // predictable
  Normalizer normalizer;

  EstimatingFunction psi() const;
};

class PreconditionViolatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Trajectory linear_run(const LinearProcedure& spec, const Vec& theta0,
                      std::span<const double> series);

/// Direct evaluation of theta_t = Gamma_t^{-1}(theta_0 + sum h_s); requires
/// dGamma_t = gamma_t (checked to 1e-12).
Trajectory linear_closed_form(const LinearProcedure& spec, const Vec& theta0,
                              std::span<const double> series);

/// Conditionally additive exponential family (scalar theta):
/// transition density ~ exp(theta m(y,x) - gamma(theta) h(x)).
struct CAEFModel {
  std::function<double(double)> gamma, gamma_dot, gamma_ddot;
  std::function<double(double)> h;                     // h(x) >= 0
  std::function<double(double y, double x)> m_stat;    // m(y, x)
  std::function<double(double theta, double x, Rng&)> sample_transition;
  std::function<ConditionalLaw(double theta, double x)> law;
};

class DegenerateNormalizerError : public std::runtime_error {
 public:
  explicit DegenerateNormalizerError(std::string what, int step = -1)
      : std::runtime_error(std::move(what)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Likelihood recursion theta_t = theta_{t-1}
///   + (gamma_ddot(theta_{t-1}) H_t)^{-1} (m(X_t, X_{t-1}) - gamma_dot(theta_{t-1}) h(X_{t-1})),
/// H_t = H_0 + sum_{s<=t} h(X_{s-1}). The first series element is consumed
/// as X_0; records are for t = 1..n-1.
Trajectory caef_run(const CAEFModel& model, double theta0, std::span<const double> series,
                    double H0 = 0.0);

/// Galton-Watson with Poisson offspring in canonical parameterization:
/// gamma(l) = e^l, h(x) = x, m(y,x) = y, y | x ~ Poisson(e^l x).
CAEFModel galton_watson_poisson();

ConditionalModel as_conditional(const CAEFModel& model);

/// AR(m) process X_i = theta^T (X_{i-1},...,X_{i-m}) + xi_i.
struct ARModel {
  int order = 1;
  Vec theta;                                     // true coefficients (for simulation)
  std::function<double(double)> g;               // innovation density
  std::function<double(double)> score_ratio;     // g'/g
  double i_g = 1.0;                              // integral of (g'/g)^2 g
  std::function<double(Rng&)> sample_innovation;
};

ARModel gaussian_ar_model(int order, const Vec& theta, double sigma = 1.0);

/// Simulates the AR(m) path from zero initial state, discarding burn_in.
std::vector<double> ar_simulate(const ARModel& model, int n, int burn_in, Rng& rng);

/// Likelihood recursion (conditional Fisher normalizer, found recursively):
///   theta_t = theta_{t-1} - I_t^{-1} (g'/g)(residual) * window,
///   I_t = I_{t-1} + i_g * window window^T.
/// The first `order` observations seed the regressor window; records are
/// for t = 1..n-order.
Trajectory ar_likelihood_run(const ARModel& model, const Vec& theta0, const SquareMatrix& I0,
                             std::span<const double> series);

/// The AR lag window (X_{t-1},...,X_{t-m}) as a vector, most recent first.
Vec ar_window(std::span<const double> series, std::size_t next_index, int order);

}  // namespace recest

#endif  // RECEST_MODELS_HPP
