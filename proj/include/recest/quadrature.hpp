#ifndef RECEST_QUADRATURE_HPP
#define RECEST_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "recest/linalg.hpp"

namespace recest {

class NonFiniteIntegrandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MaxDepthExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  int gh_nodes = 40;          // Gauss-Hermite nodes for normal weights
  double simpson_tol = 1e-9;  // adaptive Simpson tolerance
  double truncation_sds = 10.0;
};

/// Nodes and weights of the n-point (physicists') Gauss-Hermite rule,
/// weight exp(-x^2). Cached per n.
const std::vector<std::pair<double, double>>& gauss_hermite_rule(int n);

/// E[f(Z)] for Z ~ N(mean, sd^2) by n-node Gauss-Hermite.
Vec gauss_hermite(const std::function<Vec(double)>& f, double mean, double sd, int n);
double gauss_hermite_scalar(const std::function<double(double)>& f, double mean, double sd, int n);

/// Adaptive Simpson on [a, b] with the standard bisection error estimate;
/// recursion depth is capped at 50.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

/// A one-step conditional law, in the shape the quadrature layer needs:
/// exact Gauss-Hermite when the law is normal, truncated adaptive Simpson
/// for other continuous densities, direct summation for discrete ones.
struct ConditionalLaw {
  enum class Kind { gaussian, continuous, discrete };
  Kind kind = Kind::gaussian;
  double mean = 0.0;  // gaussian: exact parameters; continuous: truncation hints
  double sd = 1.0;
  std::function<double(double)> density;  // pdf (continuous) or pmf (discrete)
  long support_lo = 0, support_hi = 0;    // discrete support (inclusive)
};

ConditionalLaw normal_law(double mean, double sd);
ConditionalLaw poisson_law(double mean);

/// E[g(Z)] for Z distributed per the law.
Vec expect(const ConditionalLaw& law, const std::function<Vec(double)>& g,
           const QuadratureOptions& opt = {});
double expect_scalar(const ConditionalLaw& law, const std::function<double(double)>& g,
                     const QuadratureOptions& opt = {});

/// Standard normal cdf (used by the error-function oracles and the KS check).
double normal_cdf(double x);

}  // namespace recest

#endif  // RECEST_QUADRATURE_HPP
