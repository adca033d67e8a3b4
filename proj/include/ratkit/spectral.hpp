#pragma once

#include "ratkit/dense.hpp"

#include <cstddef>
#include <functional>

namespace ratkit {

using MatVec = std::function<DenseVector(const DenseVector&)>;

struct SpectralEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t iterations_used = 0;
    bool converged = false;

    double condition() const { return lambda_max / lambda_min; }
};

/// Extreme eigenvalues of an SPD matrix given its action and inverse action.
///
/// Power iteration on `apply` gives lambda_max, power iteration on
/// `apply_inverse` gives 1/lambda_min. Each run stops once successive Rayleigh
/// quotients agree to relative `tol`. Running out of iterations is not an
/// error: the best estimates come back with converged = false.
/// Magnitudes are returned, so a numerically indefinite input still yields a
/// usable (lambda_min, lambda_max) pair.
SpectralEstimate extreme_eigs_spd(const MatVec& apply, const MatVec& apply_inverse, std::size_t n,
                                  double tol = 1e-10, std::size_t max_iter = 2000);

/// Convenience wrapper that factors `a` (Cholesky, else LU) for the inverse action.
SpectralEstimate extreme_eigs_spd(const DenseMatrix& a, double tol = 1e-10, std::size_t max_iter = 2000);

} // namespace ratkit
