#pragma once

#include <cstddef>

#include "sns/model.hpp"

namespace sns {

/// Pivot magnitude below which the direct stationary solve is declared singular.
inline constexpr double kSingularPivot = 1e-14;

/// Stationary distribution of a row-stochastic matrix by a direct LU solve of
/// (P^T - I) pi = 0 with the normalization sum(pi) = 1 substituted for the last
/// balance equation. Throws ValidationError on non-stochastic input and
/// NumericalError on a tiny pivot or a residual ||P^T pi - pi||_inf >= 1e-12.
Distribution stationary_distribution(const Matrix& P);

struct PowerIterationResult {
    Distribution pi;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Independent route: pi <- P^T pi from the uniform vector until the sup-norm
/// change drops below `tol` or `max_iters` is hit.
PowerIterationResult stationary_distribution_power(const Matrix& P, std::size_t max_iters = 1'000'000,
                                                   double tol = 1e-13);

/// True iff the chain is irreducible and aperiodic (primitive). Decided on the
/// support pattern only: P^k > 0 entrywise for k = (n-1)^2 + 1.
bool check_irreducible_aperiodic(const Matrix& P);

/// ||P^T pi - pi||_inf
double stationary_residual(const Matrix& P, const Distribution& pi);

}  // namespace sns
