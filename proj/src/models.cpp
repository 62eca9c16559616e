#include "recest/models.hpp"

#include <cmath>

namespace recest {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ConditionalModel as_conditional(const IIDModel& model) {
  ConditionalModel cm;
  cm.dim = model.dim;
  cm.fisher_theta_free = model.fisher_theta_free;
  cm.law = [model](int, const Vec& theta, const History&) { return model.law(theta); };
  cm.score = [model](int, const Vec& theta, double x, const History&) {
    return model.score(theta, x);
  };
  cm.fisher_increment = [model](int, const Vec& theta, const History&) {
    return model.fisher(theta);
  };
  return cm;
}

IIDModel normal_location_model(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_location_model: sigma must be positive");
  IIDModel m;
  m.dim = 1;
  m.fisher_theta_free = true;
  const double s2 = sigma * sigma;
  m.density = [sigma, s2](const Vec& theta, double x) {
    const double u = (x - theta[0]) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
  };
  m.score = [s2](const Vec& theta, double x) { return Vec{(x - theta[0]) / s2}; };
  m.fisher = [s2](const Vec&) {
    SquareMatrix f(1);
    f(0, 0) = 1.0 / s2;
    return f;
  };
  m.sample = [sigma](const Vec& theta, Rng& rng) { return rng.normal(theta[0], sigma); };
  m.law = [sigma](const Vec& theta) { return normal_law(theta[0], sigma); };
  return m;
}

EstimatingFunction score_function(const IIDModel& model) {
  EstimatingFunction psi;
  psi.dim = model.dim;
  psi.martingale_difference = true;
  psi.eval = [model](int, const Vec& theta, double x, const History&) {
    return model.score(theta, x);
  };
  return psi;
}

EstimatingFunction LinearProcedure::psi() const {
  EstimatingFunction p;
  p.dim = dim;
  p.martingale_difference = true;
  auto hf = h;
  auto gf = gamma;
  p.eval = [hf, gf](int t, const Vec& theta, double x_t, const History& past) {
    return hf(t, x_t, past) - matvec(gf(t, past), theta);
  };
  return p;
}

Trajectory linear_run(const LinearProcedure& spec, const Vec& theta0,
                      std::span<const double> series) {
  return run(spec.psi(), spec.normalizer, theta0, series);
}

Trajectory linear_closed_form(const LinearProcedure& spec, const Vec& theta0,
                              std::span<const double> series) {
  const std::size_t m = theta0.size();
  Trajectory traj;
  traj.theta0 = theta0;
  traj.records.reserve(series.size());

  SquareMatrix g0 = spec.normalizer.initial.dim() ? spec.normalizer.initial : SquareMatrix(m);
  SquareMatrix g = g0;
  Vec acc = matvec(g0, theta0);  // Gamma_0 theta_0 + sum h_s
  const Vec dummy_theta(m, 0.0);

  const History full(series);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const History past = full.prefix(t - 1);
    const SquareMatrix dg = spec.normalizer.increment(t, dummy_theta, past);
    const SquareMatrix gt = spec.gamma(t, past);

    SquareMatrix diff = dg - gt;
    const double scale = std::max(1.0, std::max(dg.max_abs(), gt.max_abs()));
    if (diff.max_abs() > 1e-12 * scale)
      throw PreconditionViolatedError(
          "linear_closed_form: normalizer increments differ from gamma_t at t=" +
          std::to_string(t));

    g += dg;
    acc += spec.h(t, series[i], past);
    Vec theta;
    try {
      theta = solve_linear(g, acc);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("linear_closed_form: singular Gamma at t=" + std::to_string(t), t);
    }
    traj.records.push_back({t, theta, g});
  }
  return traj;
}

Trajectory caef_run(const CAEFModel& model, double theta0, std::span<const double> series,
                    double H0) {
  if (series.size() < 2) throw std::invalid_argument("caef_run: need X_0 plus at least one step");
  Trajectory traj;
  traj.theta0 = Vec{theta0};
  traj.records.reserve(series.size() - 1);

  double theta = theta0;
  double H = H0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const int t = static_cast<int>(i);
    const double x_prev = series[i - 1];
    const double x = series[i];
    H += model.h(x_prev);
    const double gdd = model.gamma_ddot(theta);
    const double norm = gdd * H;
    if (!std::isfinite(norm) || std::abs(norm) < 1e-300)
      throw DegenerateNormalizerError("caef_run: degenerate normalizer at t=" + std::to_string(t),
                                      t);
    theta += (model.m_stat(x, x_prev) - model.gamma_dot(theta) * model.h(x_prev)) / norm;
    if (!std::isfinite(theta))
      throw NonFiniteUpdateError("caef_run: non-finite update at t=" + std::to_string(t), t);
    SquareMatrix g(1);
    g(0, 0) = norm;
    traj.records.push_back({t, Vec{theta}, g});
  }
  return traj;
}

CAEFModel galton_watson_poisson() {
  CAEFModel m;
  m.gamma = [](double l) { return std::exp(l); };
  m.gamma_dot = [](double l) { return std::exp(l); };
  m.gamma_ddot = [](double l) { return std::exp(l); };
  m.h = [](double x) { return x; };
  m.m_stat = [](double y, double) { return y; };
  m.sample_transition = [](double theta, double x, Rng& rng) {
    return rng.poisson(std::exp(theta) * x);
  };
  m.law = [](double theta, double x) { return poisson_law(std::exp(theta) * x); };
  return m;
}

ConditionalModel as_conditional(const CAEFModel& model) {
  ConditionalModel cm;
  cm.dim = 1;
  cm.fisher_theta_free = false;
  cm.law = [model](int, const Vec& theta, const History& past) {
    return model.law(theta[0], past.x(past.length()));
  };
  cm.score = [model](int, const Vec& theta, double x, const History& past) {
    const double x_prev = past.x(past.length());
    return Vec{model.m_stat(x, x_prev) - model.gamma_dot(theta[0]) * model.h(x_prev)};
  };
  cm.fisher_increment = [model](int, const Vec& theta, const History& past) {
    SquareMatrix f(1);
    f(0, 0) = model.gamma_ddot(theta[0]) * model.h(past.x(past.length()));
    return f;
  };
  return cm;
}

ARModel gaussian_ar_model(int order, const Vec& theta, double sigma) {
  if (order < 1) throw std::invalid_argument("gaussian_ar_model: order must be >= 1");
  if (static_cast<int>(theta.size()) != order)
    throw std::invalid_argument("gaussian_ar_model: theta size must equal order");
  ARModel m;
  m.order = order;
  m.theta = theta;
  const double s2 = sigma * sigma;
  m.g = [sigma](double x) {
    const double u = x / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
  };
  m.score_ratio = [s2](double x) { return -x / s2; };
  m.i_g = 1.0 / s2;
  m.sample_innovation = [sigma](Rng& rng) { return sigma * rng.normal(); };
  return m;
}

std::vector<double> ar_simulate(const ARModel& model, int n, int burn_in, Rng& rng) {
  if (n < 0 || burn_in < 0) throw std::invalid_argument("ar_simulate: negative length");
  const int m = model.order;
  std::vector<double> state(static_cast<std::size_t>(m), 0.0);  // X_{t-1},...,X_{t-m}
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < burn_in + n; ++i) {
    double x = model.sample_innovation(rng);
    for (int j = 0; j < m; ++j) x += model.theta[static_cast<std::size_t>(j)] * state[static_cast<std::size_t>(j)];
    for (int j = m - 1; j > 0; --j) state[static_cast<std::size_t>(j)] = state[static_cast<std::size_t>(j - 1)];
    if (m > 0) state[0] = x;
    if (i >= burn_in) out.push_back(x);
  }
  return out;
}

Vec ar_window(std::span<const double> series, std::size_t next_index, int order) {
  Vec w(static_cast<std::size_t>(order));
  for (int j = 0; j < order; ++j)
    w[static_cast<std::size_t>(j)] = series[next_index - 1 - static_cast<std::size_t>(j)];
  return w;
}

Trajectory ar_likelihood_run(const ARModel& model, const Vec& theta0, const SquareMatrix& I0,
                             std::span<const double> series) {
  const int m = model.order;
  if (static_cast<int>(series.size()) <= m)
    throw std::invalid_argument("ar_likelihood_run: series shorter than the initial window");

  Trajectory traj;
  traj.theta0 = theta0;
  traj.records.reserve(series.size() - static_cast<std::size_t>(m));

  SquareMatrix I = I0.dim() ? I0 : SquareMatrix(static_cast<std::size_t>(m));
  Vec theta = theta0;
  for (std::size_t i = static_cast<std::size_t>(m); i < series.size(); ++i) {
    const int t = static_cast<int>(i) - m + 1;
    const Vec u = ar_window(series, i, m);
    I += model.i_g * outer(u, u);
    double res = series[i];
    for (int j = 0; j < m; ++j) res -= theta[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
    const double sr = model.score_ratio(res);
    Vec update;
    try {
      update = solve_linear(I, (-sr) * u);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("ar_likelihood_run: singular I_t at t=" + std::to_string(t), t);
    }
    theta += update;
    if (!finite(theta))
      throw NonFiniteUpdateError("ar_likelihood_run: non-finite update at t=" + std::to_string(t),
                                 t);
    traj.records.push_back({t, theta, I});
  }
  return traj;
}

}  // namespace recest
