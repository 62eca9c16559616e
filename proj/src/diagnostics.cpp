#include "recest/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace recest {

ScalingSequence sqrt_t_scaling(int dim) {
  ScalingSequence s;
  s.tag = "sqrt_t_identity";
  s.at = [dim](int t, const History&) {
    return std::sqrt(static_cast<double>(t)) * SquareMatrix::identity(static_cast<std::size_t>(dim));
  };
  return s;
}

ScalingSequence caef_h_sqrt_scaling(const CAEFModel& model, double x0, double H0) {
  ScalingSequence s;
  s.tag = "H_sqrt";
  s.at = [model, x0, H0](int t, const History& past) {
    double H = H0 + model.h(x0);
    for (int u = 1; u < t; ++u) H += model.h(past.x(u));
    SquareMatrix a(1);
    a(0, 0) = std::sqrt(H);
    return a;
  };
  return s;
}

std::vector<Vec> linearity_residual(const Trajectory& traj, const Trajectory& linear_traj,
                                    const ScalingSequence& A, std::span<const double> series) {
  if (traj.length() != linear_traj.length())
    throw GridMismatchError("linearity_residual: trajectory lengths differ");
  std::vector<Vec> out;
  out.reserve(traj.records.size());
  const History full(series);
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& a = traj.records[i];
    const auto& b = linear_traj.records[i];
    if (a.t != b.t) throw GridMismatchError("linearity_residual: time grids differ");
    const SquareMatrix At = A.at(a.t, full.prefix(a.t - 1));
    out.push_back(matvec(At, a.theta - b.theta));
  }
  return out;
}

Vec conditional_drift(const ConditionalModel& model, const EstimatingFunction& psi, int t,
                      const Vec& theta, const Vec& u, const History& past,
                      const QuadratureOptions& opt) {
  const ConditionalLaw law = model.law(t, theta, past);
  const Vec shifted = theta + u;
  return expect(law, [&](double z) { return psi.eval(t, shifted, z, past); }, opt);
}

double caef_conditional_drift(const CAEFModel& model, double theta, double u, double x_prev) {
  return model.h(x_prev) * (model.gamma_dot(theta) - model.gamma_dot(theta + u));
}

Vec r_field(const ConditionalModel& model, const EstimatingFunction& psi, const Normalizer& gamma,
            int t, const Vec& theta, const Vec& u, const History& past,
            const QuadratureOptions& opt) {
  const Vec b = conditional_drift(model, psi, t, theta, u, past, opt);
  const SquareMatrix g_theta = gamma.cumulative(t, theta, past);
  const SquareMatrix g_shift = gamma.cumulative(t, theta + u, past);
  return matvec(g_theta, solve_linear(g_shift, b));
}

ConditionEProbe condition_E_probe(const Normalizer& gamma, const ScalingSequence& A,
                                  const Vec& theta, std::span<const double> series) {
  ConditionEProbe probe;
  const std::size_t m = theta.size();
  SquareMatrix g = gamma.initial.dim() ? gamma.initial : SquareMatrix(m);
  const History full(series);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const History past = full.prefix(t - 1);
    g += gamma.increment(t, theta, past);
    const SquareMatrix At = A.at(t, past);
    // A_t Gamma_t^{-1} A_t, column by column
    SquareMatrix result(m);
    for (std::size_t j = 0; j < m; ++j) {
      Vec col(m);
      for (std::size_t r = 0; r < m; ++r) col[r] = At(r, j);
      Vec x = matvec(At, solve_linear(g, col));
      for (std::size_t r = 0; r < m; ++r) result(r, j) = x[r];
    }
    probe.values.push_back(result);
  }

  const std::size_t n = probe.values.size();
  const std::size_t tail_start = n - n / 4;
  double dev = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      double lo = probe.values[tail_start > 0 ? tail_start - 1 : 0](r, c), hi = lo;
      for (std::size_t k = tail_start; k < n; ++k) {
        lo = std::min(lo, probe.values[k](r, c));
        hi = std::max(hi, probe.values[k](r, c));
      }
      dev = std::max(dev, hi - lo);
    }
  probe.tail_deviation = dev;
  return probe;
}

SquareMatrix j_psi(const IIDModel& model, const EstimatingFunction& psi, const Vec& theta,
                   const QuadratureOptions& opt) {
  const int m = model.dim;
  const History empty;
  const ConditionalLaw law = model.law(theta);
  const Vec flat = expect(
      law,
      [&](double z) {
        const Vec p = psi.eval(1, theta, z, empty);
        Vec f(static_cast<std::size_t>(m * m));
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            f[static_cast<std::size_t>(i * m + j)] =
                p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
        return f;
      },
      opt);
  SquareMatrix out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          flat[static_cast<std::size_t>(i * m + j)];
  return out;
}

double ks_statistic_normal(std::vector<double> xs, double sd) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = normal_cdf(xs[i] / sd);
    const double di = static_cast<double>(i);
    d = std::max(d, std::max((di + 1.0) / n - F, F - di / n));
  }
  return d;
}

NormalityReport normality_check(const std::vector<Vec>& samples, const SquareMatrix& target_cov) {
  if (samples.size() < 100)
    throw InsufficientSamplesError("normality_check: need at least 100 samples");
  const std::size_t m = samples.front().size();
  const double n = static_cast<double>(samples.size());

  NormalityReport rep;
  rep.n_samples = static_cast<int>(samples.size());
  rep.target_cov = target_cov;
  rep.sample_mean.assign(m, 0.0);
  for (const Vec& s : samples) rep.sample_mean += s;
  for (double& v : rep.sample_mean) v /= n;

  rep.sample_cov = SquareMatrix(m);
  for (const Vec& s : samples) {
    const Vec d = s - rep.sample_mean;
    rep.sample_cov += outer(d, d);
  }
  rep.sample_cov *= 1.0 / (n - 1.0);

  rep.ks_statistic.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> comp(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) comp[i] = samples[i][j];
    rep.ks_statistic[j] = ks_statistic_normal(std::move(comp), std::sqrt(target_cov(j, j)));
  }
  return rep;
}

}  // namespace recest
