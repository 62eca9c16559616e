// Acceptance gate: one pass/fail line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "recest/diagnostics.hpp"
#include "recest/experiments.hpp"
#include "recest/models.hpp"
#include "recest/normalizers.hpp"
#include "recest/robust.hpp"
#include "recest/simulator.hpp"

using namespace recest;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, double seconds,
            const std::string& detail = "") {
  std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              seconds, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

void run_criterion(int id, const std::string& name, double time_limit,
                   const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ok && secs > time_limit) {
    ok = false;
    detail = "time limit " + std::to_string(time_limit) + "s exceeded";
  }
  report(id, name, ok, secs, detail);
}

EstimatingFunction location_psi() {
  EstimatingFunction psi;
  psi.dim = 1;
  psi.martingale_difference = true;
  psi.eval = [](int, const Vec& theta, double x, const History&) { return Vec{x - theta[0]}; };
  return psi;
}

Normalizer unit_increment() {
  return zero_start_normalizer(1, true, [](int, const Vec&, const History&) {
    SquareMatrix g(1);
    g(0, 0) = 1.0;
    return g;
  });
}

double quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const std::size_t idx = static_cast<std::size_t>(p * static_cast<double>(xs.size() - 1));
  return xs[idx];
}

double erf_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 80; ++n) {
    term *= -x * x / static_cast<double>(n);
    sum += term / static_cast<double>(2 * n + 1);
  }
  return 2.0 / std::sqrt(3.14159265358979323846) * sum;
}

double phi_oracle(double x) { return 0.5 * (1.0 + erf_series(x / std::sqrt(2.0))); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  run_criterion(1, "running-mean exact oracle", 1.0, [](std::string& detail) {
    for (int rep = 0; rep < 100; ++rep) {
      Rng rng(mix_seed(1001, static_cast<std::uint64_t>(rep)));
      std::vector<double> xs(1000);
      for (double& x : xs) x = rng.normal(0.5, 2.0);
      const Trajectory traj = run(location_psi(), unit_increment(), Vec{rng.normal()}, xs);
      double sum = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += xs[i];
        const double mean = sum / static_cast<double>(i + 1);
        if (std::abs(traj.records[i].theta[0] - mean) > 1e-12) {
          detail = "deviation at rep " + std::to_string(rep) + ", t = " + std::to_string(i + 1);
          return false;
        }
      }
    }
    return true;
  });

  run_criterion(2, "linear closed-form exact oracle", 5.0, [](std::string& detail) {
    Rng rng(1002);
    for (int kase = 0; kase < 50; ++kase) {
      const int m = 1 + kase % 3;
      std::vector<double> coef(static_cast<std::size_t>(m));
      for (double& c : coef) c = rng.normal();
      LinearProcedure spec;
      spec.dim = m;
      spec.h = [m, coef](int, double x_t, const History& past) {
        const double prev = past.length() > 0 ? past.x(past.length()) : 0.0;
        Vec v(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
          v[static_cast<std::size_t>(i)] = coef[static_cast<std::size_t>(i)] * x_t + 0.1 * prev;
        return v;
      };
      auto gamma_fn = [m](int t, const History& past) {
        const double prev = past.length() > 0 ? past.x(past.length()) : 0.0;
        SquareMatrix g = SquareMatrix::identity(static_cast<std::size_t>(m));
        g *= 1.0 + 0.05 * prev * prev;
        for (int i = 0; i + 1 < m; ++i) {
          const double off = 0.1 * std::sin(static_cast<double>(t));
          g(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)) = off;
          g(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(i)) = off;
        }
        return g;
      };
      spec.gamma = gamma_fn;
      spec.normalizer = zero_start_normalizer(
          m, true,
          [gamma_fn](int t, const Vec&, const History& past) { return gamma_fn(t, past); });

      std::vector<double> xs(1000);
      for (double& x : xs) x = rng.normal();
      Vec theta0(static_cast<std::size_t>(m));
      for (double& v : theta0) v = rng.normal();

      const Trajectory a = linear_run(spec, theta0, xs);
      const Trajectory b = linear_closed_form(spec, theta0, xs);
      for (int t = 1; t <= a.length(); ++t) {
        const double dev = max_abs(a.at(t).theta - b.at(t).theta);
        if (dev > 1e-10 * (1.0 + max_abs(b.at(t).theta))) {
          detail = "case " + std::to_string(kase) + " diverges at t = " + std::to_string(t);
          return false;
        }
      }
    }
    return true;
  });

  run_criterion(3, "exact linearity identity", 1.0, [](std::string& detail) {
    const IIDModel model = normal_location_model(1.0);
    Rng rng(1003);
    std::vector<double> xs(500);
    for (double& x : xs) x = rng.normal(0.5, 1.0);
    const EstimatingFunction psi = score_function(model);
    const Normalizer gamma = fisher_normalizer(model);
    const Trajectory traj = run(psi, gamma, Vec{4.0}, xs);
    const Trajectory lin = linear_statistic(Vec{0.5}, psi, gamma, xs);
    const auto res = linearity_residual(traj, lin, sqrt_t_scaling(1), xs);
    for (std::size_t i = 0; i < res.size(); ++i)
      if (max_abs(res[i]) > 1e-10) {
        detail = "residual " + std::to_string(max_abs(res[i])) + " at t = " + std::to_string(i + 1);
        return false;
      }
    return true;
  });

  run_criterion(4, "C_g constants", 1.0, [](std::string& detail) {
    const auto normal_pdf = [](double x, double sd) {
      const double u = x / sd;
      return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * 3.14159265358979323846));
    };
    const double huber_oracle = 2.0 * phi_oracle(1.8) - 1.0;
    const double hampel_oracle =
        (2.0 * phi_oracle(1.8) - 1.0) - (1.8 / 2.2) * 2.0 * (phi_oracle(4.0) - phi_oracle(1.8));
    bool ok = std::abs(c_g_huber_normal(1.8) - huber_oracle) <= 1e-8;
    for (double s_r : {1.0, 2.5}) {
      const double quad = c_g_huber(1.8, s_r, [&](double x) { return normal_pdf(x, s_r); });
      ok = ok && std::abs(quad - c_g_huber_normal(1.8)) <= 1e-8;
    }
    ok = ok && std::abs(c_g_hampel_normal(1.8, 4.0) - hampel_oracle) <= 1e-8;
    const double hq = c_g_hampel(1.8, 4.0, 1.0, [&](double x) { return normal_pdf(x, 1.0); });
    ok = ok && std::abs(hq - c_g_hampel_normal(1.8, 4.0)) <= 1e-8;
    detail = "huber = " + std::to_string(c_g_huber_normal(1.8)) +
             ", hampel = " + std::to_string(c_g_hampel_normal(1.8, 4.0));
    return ok;
  });

  run_criterion(5, "desk-scale asymptotic normality", 30.0, [](std::string& detail) {
    NormalityExperimentConfig cfg;
    const NormalityOutput out = run_normality(cfg);
    const double mean = out.report.sample_mean[0];
    const double var = out.report.sample_cov(0, 0);
    const double ks = out.report.ks_statistic[0];
    const double crit = 1.63 / std::sqrt(static_cast<double>(cfg.R));
    std::ostringstream ss;
    ss << "mean = " << mean << ", var = " << var << ", ks = " << ks << " (crit " << crit << ")";
    detail = ss.str();
    return var >= 0.9 && var <= 1.1 && std::abs(mean) <= 0.05 && ks < crit;
  });

  run_criterion(6, "asymptotic-linearity decrease", 60.0, [](std::string& detail) {
    // ridge start Gamma_0 = identity (the exposed tuning option) separates the
    // recursion from the linear statistic by a genuinely decaying term; with
    // Gamma_0 = 0 the two coincide exactly and the residual is pure rounding
    // noise with no decrease to observe
    const IIDModel model = normal_location_model(1.0);
    const EstimatingFunction psi = score_function(model);
    Normalizer gamma = fisher_normalizer(model);
    gamma.initial = SquareMatrix::identity(1);
    const double theta_true = 0.5;
    const int T = 1000, R = 500;
    std::vector<double> at100(R), at1000(R);
    for (int r = 0; r < R; ++r) {
      Rng rng(mix_seed(1006, static_cast<std::uint64_t>(r)));
      const double theta0 = rng.normal(theta_true, 1.0);
      std::vector<double> xs(static_cast<std::size_t>(T));
      for (double& x : xs) x = rng.normal(theta_true, 1.0);
      const Trajectory traj = run(psi, gamma, Vec{theta0}, xs);
      const Trajectory lin = linear_statistic(Vec{theta_true}, psi, gamma, xs);
      at100[static_cast<std::size_t>(r)] =
          std::sqrt(100.0) * std::abs(traj.at(100).theta[0] - lin.at(100).theta[0]);
      at1000[static_cast<std::size_t>(r)] =
          std::sqrt(1000.0) * std::abs(traj.at(1000).theta[0] - lin.at(1000).theta[0]);
    }
    const double med100 = quantile(at100, 0.5), med1000 = quantile(at1000, 0.5);
    const double p90100 = quantile(at100, 0.9), p901000 = quantile(at1000, 0.9);
    std::ostringstream ss;
    ss << "median " << med100 << " -> " << med1000 << ", p90 " << p90100 << " -> " << p901000;
    detail = ss.str();
    return med1000 < med100 && p901000 < p90100;
  });

  run_criterion(7, "robust AR(1) comparison ordering", 120.0, [](std::string& detail) {
    Fig1Config cfg;
    cfg.workers = 4;
    const Fig1Output out = run_fig1(cfg);
    const std::size_t last = static_cast<std::size_t>(cfg.n - 1);
    const double ls = out.mse.mse[0][last];
    const double hub = out.mse.mse[1][last];
    const double ham = out.mse.mse[2][last];
    std::ostringstream ss;
    ss << "mse(200): ls = " << ls << ", huber = " << hub << ", hampel = " << ham
       << ", failures = " << out.mse.failures;
    detail = ss.str();
    return hub < ls && ham < ls;
  });

  run_criterion(8, "branching-process consistency", 30.0, [](std::string& detail) {
    const CAEFModel gw = galton_watson_poisson();
    const double lambda = std::log(1.5);
    int ok_runs = 0;
    double max_probe_dev = 0.0;
    for (int r = 0; r < 200; ++r) {
      Rng rng(mix_seed(1008, static_cast<std::uint64_t>(r)));
      std::vector<double> series;
      series.push_back(10.0);
      for (int t = 1; t <= 500; ++t)
        series.push_back(gw.sample_transition(lambda, series.back(), rng));
      const Trajectory traj = caef_run(gw, 0.0, series);
      if (std::abs(traj.records.back().theta[0] - lambda) < 0.1) ++ok_runs;
      if (r < 5) {
        const std::vector<double> tail(series.begin() + 1, series.end());
        const auto probe =
            condition_E_probe(caef_fisher_normalizer(gw, series.front()),
                              caef_h_sqrt_scaling(gw, series.front()), Vec{lambda}, tail);
        const double want = 1.0 / gw.gamma_ddot(lambda);
        for (const auto& v : probe.values)
          max_probe_dev = std::max(max_probe_dev, std::abs(v(0, 0) - want));
      }
    }
    std::ostringstream ss;
    ss << ok_runs << "/200 within 0.1, probe deviation " << max_probe_dev;
    detail = ss.str();
    return ok_runs >= 180 && max_probe_dev <= 1e-8;
  });

  run_criterion(9, "martingale and score coherence", 5.0, [](std::string& detail) {
    bool ok = true;
    for (double sigma : {1.0, 2.0}) {
      const IIDModel model = normal_location_model(sigma);
      const Vec theta{0.4};
      const double mean_score =
          expect_scalar(model.law(theta), [&](double x) { return model.score(theta, x)[0]; });
      const double j = j_psi(model, score_function(model), theta)(0, 0);
      const double i = model.fisher(theta)(0, 0);
      ok = ok && std::abs(mean_score) <= 1e-6 && std::abs(j - i) <= 1e-6;

      const History empty;
      const Vec r0 = r_field(as_conditional(model), score_function(model),
                             fisher_normalizer(model), 3, theta, Vec{0.0}, empty);
      ok = ok && std::abs(r0[0]) <= 1e-8;
    }
    // the Markov family: R_t(theta, 0) via the closed-form drift
    const CAEFModel gw = galton_watson_poisson();
    ok = ok && std::abs(caef_conditional_drift(gw, std::log(1.5), 0.0, 25.0)) <= 1e-8;
    detail = ok ? "" : "a coherence identity failed";
    return ok;
  });

  run_criterion(10, "CLI determinism and parallel invariance", 240.0, [](std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "recest_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string cli = RECEST_CLI_PATH;
    const auto run_cli = [&](const std::string& args) {
      const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
      return WEXITSTATUS(std::system(cmd.c_str()));
    };
    if (run_cli("experiment-fig1 --workers 1 --out " + (base / "a").string()) != 0 ||
        run_cli("experiment-fig1 --workers 1 --out " + (base / "b").string()) != 0 ||
        run_cli("experiment-fig1 --workers 8 --out " + (base / "c").string()) != 0) {
      detail = "CLI run failed";
      return false;
    }
    for (const char* file : {"fig1_mse.csv", "fig1_trace.csv"}) {
      const std::string a = read_file(base / "a" / file);
      if (a.empty() || a != read_file(base / "b" / file) || a != read_file(base / "c" / file)) {
        detail = std::string(file) + " differs across runs";
        return false;
      }
    }
    return true;
  });

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
