#ifndef RECEST_NORMALIZERS_HPP
#define RECEST_NORMALIZERS_HPP

#include <functional>

#include "recest/engine.hpp"
#include "recest/models.hpp"

namespace recest {

/// Conditional Fisher normalizer: increments i_t(theta | past).
Normalizer fisher_normalizer(const ConditionalModel& model);
Normalizer fisher_normalizer(const IIDModel& model);

/// Fisher increments gamma_ddot(theta) h(X_{t-1}) for a CAEF model run on a
/// series whose preceding observation is x0.
Normalizer caef_fisher_normalizer(const CAEFModel& model, double x0);

/// Increments -b'_t(theta, 0): total differential of u -> b_t(theta, u) at 0,
/// columns by central finite difference with step fd_step*(1+|theta|), or an
/// analytic derivative closure when supplied.
Normalizer bprime_normalizer(
    const EstimatingFunction& psi, const ConditionalModel& model, double fd_step = 1e-5,
    std::function<SquareMatrix(int t, const Vec& theta, const History& past)> analytic = nullptr,
    const QuadratureOptions& opt = {});

/// Increments E{ psi_t l_t^T | F_{t-1} } by quadrature.
Normalizer score_covariance_normalizer(const EstimatingFunction& psi, const ConditionalModel& model,
                                       const QuadratureOptions& opt = {});

/// Tuning wrapper: cumulative evaluation yields C + c_t * Gamma_t(theta);
/// c_t must be non-negative and equal to 1 eventually.
Normalizer tuned(const Normalizer& base, const SquareMatrix& C, std::function<double(int)> c_t);

}  // namespace recest

#endif  // RECEST_NORMALIZERS_HPP
