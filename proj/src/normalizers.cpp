#include "recest/normalizers.hpp"

#include <cmath>

#include "recest/diagnostics.hpp"

namespace recest {

Normalizer fisher_normalizer(const ConditionalModel& model) {
  Normalizer n;
  n.dim = model.dim;
  n.theta_free = model.fisher_theta_free;
  n.initial = SquareMatrix(static_cast<std::size_t>(model.dim));
  auto fi = model.fisher_increment;
  n.increment = [fi](int t, const Vec& theta, const History& past) { return fi(t, theta, past); };
  return n;
}

Normalizer fisher_normalizer(const IIDModel& model) {
  return fisher_normalizer(as_conditional(model));
}

Normalizer caef_fisher_normalizer(const CAEFModel& model, double x0) {
  Normalizer n;
  n.dim = 1;
  n.theta_free = false;
  n.initial = SquareMatrix(1);
  n.increment = [model, x0](int t, const Vec& theta, const History& past) {
    const double x_prev = t == 1 ? x0 : past.x(t - 1);
    SquareMatrix inc(1);
    inc(0, 0) = model.gamma_ddot(theta[0]) * model.h(x_prev);
    return inc;
  };
  return n;
}

Normalizer bprime_normalizer(
    const EstimatingFunction& psi, const ConditionalModel& model, double fd_step,
    std::function<SquareMatrix(int t, const Vec& theta, const History& past)> analytic,
    const QuadratureOptions& opt) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("bprime_normalizer: fd_step must be positive");
  Normalizer n;
  n.dim = model.dim;
  n.theta_free = false;
  n.initial = SquareMatrix(static_cast<std::size_t>(model.dim));
  if (analytic) {
    n.increment = std::move(analytic);
    return n;
  }
  const int m = model.dim;
  n.increment = [psi, model, fd_step, opt, m](int t, const Vec& theta, const History& past) {
    const double h = fd_step * (1.0 + max_abs(theta));
    SquareMatrix out(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      Vec up(static_cast<std::size_t>(m), 0.0), dn(static_cast<std::size_t>(m), 0.0);
      up[static_cast<std::size_t>(j)] = h;
      dn[static_cast<std::size_t>(j)] = -h;
      const Vec bp = conditional_drift(model, psi, t, theta, up, past, opt);
      const Vec bm = conditional_drift(model, psi, t, theta, dn, past, opt);
      for (int i = 0; i < m; ++i)
        out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            -(bp[static_cast<std::size_t>(i)] - bm[static_cast<std::size_t>(i)]) / (2.0 * h);
    }
    return out;
  };
  return n;
}

Normalizer score_covariance_normalizer(const EstimatingFunction& psi, const ConditionalModel& model,
                                       const QuadratureOptions& opt) {
  Normalizer n;
  n.dim = model.dim;
  n.theta_free = false;
  n.initial = SquareMatrix(static_cast<std::size_t>(model.dim));
  const int m = model.dim;
  n.increment = [psi, model, opt, m](int t, const Vec& theta, const History& past) {
    const ConditionalLaw law = model.law(t, theta, past);
    const Vec flat = expect(
        law,
        [&](double z) {
          const Vec p = psi.eval(t, theta, z, past);
          const Vec l = model.score(t, theta, z, past);
          Vec f(static_cast<std::size_t>(m * m));
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
              f[static_cast<std::size_t>(i * m + j)] =
                  p[static_cast<std::size_t>(i)] * l[static_cast<std::size_t>(j)];
          return f;
        },
        opt);
    SquareMatrix out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            flat[static_cast<std::size_t>(i * m + j)];
    return out;
  };
  return n;
}

Normalizer tuned(const Normalizer& base, const SquareMatrix& C, std::function<double(int)> c_t) {
  Normalizer n;
  n.dim = base.dim;
  n.theta_free = base.theta_free;
  const SquareMatrix base_init =
      base.initial.dim() ? base.initial : SquareMatrix(static_cast<std::size_t>(base.dim));
  const double c1 = c_t(1);
  if (!(c1 >= 0.0)) throw std::invalid_argument("tuned: c_t must be non-negative");

  // initial = C + c_1 * Gamma_0; increments chosen so the cumulative matrix
  // telescopes to C + c_t * Gamma_t(theta) exactly.
  n.initial = C + c1 * base_init;
  n.increment = [base, base_init, c_t](int t, const Vec& theta, const History& past) {
    const double ct = c_t(t);
    const double cprev = t == 1 ? c_t(1) : c_t(t - 1);
    if (!(ct >= 0.0)) throw std::invalid_argument("tuned: c_t must be non-negative");
    SquareMatrix inc = base.increment(t, theta, past);
    if (ct != 1.0) inc *= ct;
    if (ct != cprev) {
      SquareMatrix prev_cum = base_init;
      for (int s = 1; s < t; ++s) prev_cum += base.increment(s, theta, past.prefix(s - 1));
      inc += (ct - cprev) * prev_cum;
    }
    return inc;
  };
  return n;
}

}  // namespace recest
