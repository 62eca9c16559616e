#ifndef RECEST_ROBUST_HPP
#define RECEST_ROBUST_HPP

#include <functional>
#include <span>
#include <stdexcept>

#include "recest/engine.hpp"
#include "recest/models.hpp"

namespace recest {

/// Huber function: identity clipped at +-c.
double huber(double x, double c);

/// Hampel two-part redescending function: identity to alpha, linear descent
/// to zero at beta, zero beyond.
double hampel(double x, double alpha, double beta);

/// Bounded odd psi-function with its tuning constants.
struct PsiFunction {
  enum class Kind { huber, hampel };
  Kind kind = Kind::huber;
  double c = 1.8;           // huber clip
  double alpha = 1.8;       // hampel identity bound
  double beta = 4.0;        // hampel redescend point

  double operator()(double x) const {
    return kind == Kind::huber ? recest::huber(x, c) : recest::hampel(x, alpha, beta);
  }

  static PsiFunction huber(double c);
  static PsiFunction hampel(double alpha, double beta);
};

struct ScaleEstimates {
  double s_x = 1.0;  // data scale
  double s_r = 1.0;  // residual scale
};

class ZeroScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NonPositiveCgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// median(|data_i|) / 0.6745; throws ZeroScale when the result is zero.
double mad_scale(std::span<const double> data);

/// Floor substituted by callers on ZeroScale.
inline double zero_scale_floor(std::span<const double> data) {
  double m = 0.0;
  for (double x : data) m = std::max(m, std::abs(x));
  return 1e-8 * (1.0 + m);
}

/// C_g = integral of g over [-c s_r, c s_r], by adaptive Simpson.
double c_g_huber(double c, double s_r, const std::function<double(double)>& g,
                 double tol = 1e-10);
/// Closed form for g = N(0, s_r^2): 2 Phi(c) - 1.
double c_g_huber_normal(double c);

/// The three-piece integral for the Hampel function.
double c_g_hampel(double alpha, double beta, double s_r, const std::function<double(double)>& g,
                  double tol = 1e-10);
double c_g_hampel_normal(double alpha, double beta);

/// GM recursion for AR(1):
///   theta_t = theta_{t-1} + Gamma_t^{-1} s_x phi(X_{t-1}/s_x) s_r phi((X_t - theta X_{t-1})/s_r)
/// with Gamma increments C_g s_x phi(X_{s-1}/s_x) X_{s-1}. The first series
/// element is consumed as X_0; records are for t = 1..n-1.
Trajectory gm_recursion(std::span<const double> series, const PsiFunction& phi,
                        const ScaleEstimates& scales, double C_g, double theta0,
                        double Gamma0 = 0.0);

/// Least-squares fit of X_t on X_{t-1} over a prefix (used for the initial
/// estimate of the simulation protocol).
double prefix_least_squares_ar1(std::span<const double> prefix);

}  // namespace recest

#endif  // RECEST_ROBUST_HPP
