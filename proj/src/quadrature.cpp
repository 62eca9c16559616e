#include "recest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace recest {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::pair<double, double>> compute_gauss_hermite(int n) {
  // Newton iteration on the Hermite recurrence (weight exp(-x^2)).
  std::vector<std::pair<double, double>> rule(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule[0].first;
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule[1].first;
    else
      z = 2.0 * z - rule[static_cast<std::size_t>(i - 2)].first;

    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 0.7511255444649425;  // pi^{-1/4}
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / (pp * pp);
    rule[static_cast<std::size_t>(i)] = {z, w};
    rule[static_cast<std::size_t>(n - 1 - i)] = {-z, w};
  }
  // ascending nodes
  std::sort(rule.begin(), rule.end());
  return rule;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_hermite_rule(int n) {
  if (n < 2) throw std::invalid_argument("gauss_hermite_rule: need n >= 2");
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

Vec gauss_hermite(const std::function<Vec(double)>& f, double mean, double sd, int n) {
  if (sd <= 0.0) throw std::invalid_argument("gauss_hermite: sd must be positive");
  const auto& rule = gauss_hermite_rule(n);
  const double sqrt2 = std::sqrt(2.0);
  Vec acc;
  for (const auto& [x, w] : rule) {
    Vec fx = f(mean + sqrt2 * sd * x);
    if (!finite(fx)) throw NonFiniteIntegrandError("gauss_hermite: non-finite integrand");
    if (acc.empty()) acc.assign(fx.size(), 0.0);
    for (std::size_t i = 0; i < fx.size(); ++i) acc[i] += w * fx[i];
  }
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  for (double& v : acc) v *= inv_sqrt_pi;
  return acc;
}

double gauss_hermite_scalar(const std::function<double(double)>& f, double mean, double sd, int n) {
  return gauss_hermite([&](double z) { return Vec{f(z)}; }, mean, sd, n)[0];
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  if (depth > 50) throw MaxDepthExceededError("adaptive_simpson: max recursion depth exceeded");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw NonFiniteIntegrandError("adaptive_simpson: non-finite integrand");
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(a < b)) throw std::invalid_argument("adaptive_simpson: need a < b");
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: need tol > 0");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw NonFiniteIntegrandError("adaptive_simpson: non-finite integrand");
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

ConditionalLaw normal_law(double mean, double sd) {
  ConditionalLaw law;
  law.kind = ConditionalLaw::Kind::gaussian;
  law.mean = mean;
  law.sd = sd;
  law.density = [mean, sd](double z) {
    const double u = (z - mean) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * kPi));
  };
  return law;
}

ConditionalLaw poisson_law(double mean) {
  ConditionalLaw law;
  law.kind = ConditionalLaw::Kind::discrete;
  law.mean = mean;
  if (mean <= 0.0) {  // point mass at zero
    law.sd = 0.0;
    law.support_lo = law.support_hi = 0;
    law.density = [](double k) { return k == 0.0 ? 1.0 : 0.0; };
    return law;
  }
  law.sd = std::sqrt(std::max(mean, 1e-300));
  law.support_lo = 0;
  law.support_hi = static_cast<long>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
  law.density = [mean](double k) {
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
  };
  return law;
}

Vec expect(const ConditionalLaw& law, const std::function<Vec(double)>& g,
           const QuadratureOptions& opt) {
  switch (law.kind) {
    case ConditionalLaw::Kind::gaussian:
      return gauss_hermite(g, law.mean, law.sd, opt.gh_nodes);
    case ConditionalLaw::Kind::continuous: {
      const double a = law.mean - opt.truncation_sds * law.sd;
      const double b = law.mean + opt.truncation_sds * law.sd;
      const std::size_t dim = g(law.mean).size();
      Vec out(dim);
      for (std::size_t i = 0; i < dim; ++i)
        out[i] = adaptive_simpson([&](double z) { return g(z)[i] * law.density(z); }, a, b,
                                  opt.simpson_tol);
      return out;
    }
    case ConditionalLaw::Kind::discrete: {
      Vec acc;
      for (long k = law.support_lo; k <= law.support_hi; ++k) {
        const double z = static_cast<double>(k);
        const double p = law.density(z);
        if (p == 0.0) continue;
        Vec gz = g(z);
        if (acc.empty()) acc.assign(gz.size(), 0.0);
        for (std::size_t i = 0; i < gz.size(); ++i) acc[i] += p * gz[i];
      }
      if (acc.empty()) acc.assign(g(0.0).size(), 0.0);
      return acc;
    }
  }
  throw std::logic_error("expect: unknown law kind");
}

double expect_scalar(const ConditionalLaw& law, const std::function<double(double)>& g,
                     const QuadratureOptions& opt) {
  return expect(law, [&](double z) { return Vec{g(z)}; }, opt)[0];
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace recest
