#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "recest/quadrature.hpp"

using namespace recest;

namespace {

// Independent error-function oracle: alternating Maclaurin series,
// erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1)).
double erf_series(double x) {
  double term = x;  // n = 0 term before the 2/sqrt(pi) factor
  double sum = x;
  for (int n = 1; n < 80; ++n) {
    term *= -x * x / static_cast<double>(n);
    sum += term / static_cast<double>(2 * n + 1);
  }
  return 2.0 / std::sqrt(3.14159265358979323846) * sum;
}

double phi_oracle(double x) { return 0.5 * (1.0 + erf_series(x / std::sqrt(2.0))); }

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

}  // namespace

TEST_CASE("gauss-hermite normalization and moments") {
  CHECK(gauss_hermite_scalar([](double) { return 1.0; }, 0.0, 1.0, 40) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gauss_hermite_scalar([](double z) { return z; }, 3.0, 2.0, 40) ==
        doctest::Approx(3.0).epsilon(1e-10));
  CHECK(gauss_hermite_scalar([](double z) { return z * z; }, 0.0, 2.0, 20) ==
        doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("gauss-hermite rule is cached and consistent") {
  const auto& r1 = gauss_hermite_rule(40);
  const auto& r2 = gauss_hermite_rule(40);
  CHECK(&r1 == &r2);
  CHECK(r1.size() == 40);
  double wsum = 0.0;
  for (const auto& [x, w] : r1) wsum += w;
  CHECK(wsum == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-12));
}

TEST_CASE("gauss-hermite vector form") {
  const Vec v = gauss_hermite([](double z) { return Vec{1.0, z}; }, 2.0, 1.0, 30);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("adaptive simpson basics") {
  CHECK(adaptive_simpson([](double x) { return x; }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::abs(x); }, -1.0, 1.0, 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("adaptive simpson matches the error-function oracle") {
  const double got = adaptive_simpson(std_normal_pdf, -1.8, 1.8, 1e-10);
  const double want = 2.0 * phi_oracle(1.8) - 1.0;
  CHECK(std::abs(got - want) <= 1e-8);
  CHECK(got == doctest::Approx(0.928139).epsilon(1e-5));
}

TEST_CASE("adaptive simpson depth cap") {
  const auto jump = [](double x) { return x < 0.333333333 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(adaptive_simpson(jump, 0.0, 1.0, 1e-300), MaxDepthExceededError);
}

TEST_CASE("non-finite integrand is rejected") {
  const auto bad = [](double x) { return x > 0.5 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS(adaptive_simpson(bad, 0.0, 1.0, 1e-6), NonFiniteIntegrandError);
}

TEST_CASE("normal law expectations") {
  const ConditionalLaw law = normal_law(1.5, 0.5);
  CHECK(expect_scalar(law, [](double z) { return z; }) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(expect_scalar(law, [](double z) { return (z - 1.5) * (z - 1.5); }) ==
        doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("poisson law expectations") {
  const ConditionalLaw law = poisson_law(3.0);
  CHECK(expect_scalar(law, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(expect_scalar(law, [](double z) { return z; }) == doctest::Approx(3.0).epsilon(1e-9));
  // variance of Poisson equals the mean
  CHECK(expect_scalar(law, [](double z) { return (z - 3.0) * (z - 3.0); }) ==
        doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("poisson law with zero mean is a point mass at zero") {
  const ConditionalLaw law = poisson_law(0.0);
  CHECK(expect_scalar(law, [](double z) { return z; }) == doctest::Approx(0.0));
  CHECK(expect_scalar(law, [](double) { return 1.0; }) == doctest::Approx(1.0));
}

TEST_CASE("continuous non-gaussian law via truncated simpson") {
  // Laplace(0, 1) marked continuous: mean 0, E|Z| = 1
  ConditionalLaw law;
  law.kind = ConditionalLaw::Kind::continuous;
  law.mean = 0.0;
  law.sd = std::sqrt(2.0);
  law.density = [](double x) { return 0.5 * std::exp(-std::abs(x)); };
  // truncation at mean +- 10 sd leaves ~7e-7 Laplace mass outside
  CHECK(expect_scalar(law, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(expect_scalar(law, [](double z) { return std::abs(z); }) ==
        doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("normal cdf against the series oracle") {
  for (double x : {-2.5, -1.0, 0.0, 0.7, 1.8, 2.83}) {
    CHECK(std::abs(normal_cdf(x) - phi_oracle(x)) <= 1e-12);
  }
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}
