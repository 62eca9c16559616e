#include "recest/robust.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "recest/quadrature.hpp"

namespace recest {

double huber(double x, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("huber: c must be positive");
  if (x > c) return c;
  if (x < -c) return -c;
  return x;
}

double hampel(double x, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha))
    throw std::invalid_argument("hampel: need 0 < alpha < beta");
  const double ax = std::abs(x);
  if (ax <= alpha) return x;
  if (ax >= beta) return 0.0;
  const double v = alpha * (beta - ax) / (beta - alpha);
  return x > 0.0 ? v : -v;
}

PsiFunction PsiFunction::huber(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("PsiFunction: c must be positive");
  PsiFunction p;
  p.kind = Kind::huber;
  p.c = c;
  return p;
}

PsiFunction PsiFunction::hampel(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha))
    throw std::invalid_argument("PsiFunction: need 0 < alpha < beta");
  PsiFunction p;
  p.kind = Kind::hampel;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

double mad_scale(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("mad_scale: empty data");
  std::vector<double> abs_vals(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) abs_vals[i] = std::abs(data[i]);
  std::sort(abs_vals.begin(), abs_vals.end());
  const std::size_t n = abs_vals.size();
  const double med =
      n % 2 == 1 ? abs_vals[n / 2] : 0.5 * (abs_vals[n / 2 - 1] + abs_vals[n / 2]);
  const double s = med / 0.6745;
  if (s == 0.0) throw ZeroScaleError("mad_scale: zero scale");
  return s;
}

double c_g_huber(double c, double s_r, const std::function<double(double)>& g, double tol) {
  if (!(c > 0.0) || !(s_r > 0.0)) throw std::invalid_argument("c_g_huber: need c, s_r > 0");
  return adaptive_simpson(g, -c * s_r, c * s_r, tol);
}

double c_g_huber_normal(double c) { return 2.0 * normal_cdf(c) - 1.0; }

double c_g_hampel(double alpha, double beta, double s_r, const std::function<double(double)>& g,
                  double tol) {
  if (!(alpha > 0.0) || !(beta > alpha) || !(s_r > 0.0))
    throw std::invalid_argument("c_g_hampel: need 0 < alpha < beta and s_r > 0");
  const double inner = adaptive_simpson(g, -alpha * s_r, alpha * s_r, tol);
  const double left = adaptive_simpson(g, -beta * s_r, -alpha * s_r, tol);
  const double right = adaptive_simpson(g, alpha * s_r, beta * s_r, tol);
  return inner - alpha / (beta - alpha) * (left + right);
}

double c_g_hampel_normal(double alpha, double beta) {
  const double inner = 2.0 * normal_cdf(alpha) - 1.0;
  const double shoulders = 2.0 * (normal_cdf(beta) - normal_cdf(alpha));
  return inner - alpha / (beta - alpha) * shoulders;
}

Trajectory gm_recursion(std::span<const double> series, const PsiFunction& phi,
                        const ScaleEstimates& scales, double C_g, double theta0, double Gamma0) {
  if (series.size() < 2)
    throw std::invalid_argument("gm_recursion: need X_0 plus at least one step");
  if (!(scales.s_x > 0.0) || !(scales.s_r > 0.0))
    throw std::invalid_argument("gm_recursion: scales must be positive");
  if (!(C_g > 0.0)) throw NonPositiveCgError("gm_recursion: C_g must be positive");

  Trajectory traj;
  traj.theta0 = Vec{theta0};
  traj.records.reserve(series.size() - 1);

  double theta = theta0;
  double gamma = Gamma0;
  double gamma_scale = std::abs(Gamma0);
  for (std::size_t i = 1; i < series.size(); ++i) {
    const int t = static_cast<int>(i);
    const double x_prev = series[i - 1];
    const double x = series[i];
    const double weighted_prev = scales.s_x * phi(x_prev / scales.s_x);
    gamma += C_g * weighted_prev * x_prev;
    gamma_scale = std::max(gamma_scale, std::abs(gamma));
    if (!(std::abs(gamma) > kSingularPivotRel * std::max(1.0, gamma_scale)))
      throw DegenerateNormalizerError("gm_recursion: degenerate normalizer at t=" +
                                          std::to_string(t),
                                      t);
    const double residual = x - theta * x_prev;
    theta += weighted_prev * scales.s_r * phi(residual / scales.s_r) / gamma;
    if (!std::isfinite(theta))
      throw NonFiniteUpdateError("gm_recursion: non-finite update at t=" + std::to_string(t), t);
    SquareMatrix g(1);
    g(0, 0) = gamma;
    traj.records.push_back({t, Vec{theta}, g});
  }
  return traj;
}

double prefix_least_squares_ar1(std::span<const double> prefix) {
  if (prefix.size() < 2) throw std::invalid_argument("prefix_least_squares_ar1: need >= 2 points");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    num += prefix[i] * prefix[i - 1];
    den += prefix[i - 1] * prefix[i - 1];
  }
  if (den == 0.0) throw std::invalid_argument("prefix_least_squares_ar1: degenerate prefix");
  return num / den;
}

}  // namespace recest
