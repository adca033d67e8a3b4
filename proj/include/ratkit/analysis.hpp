#pragma once

#include "ratkit/dense.hpp"
#include "ratkit/factorization.hpp"
#include "ratkit/hessenberg.hpp"
#include "ratkit/krylov.hpp"
#include "ratkit/spectral.hpp"

#include <cstddef>

namespace ratkit {

/// Constant of the field-of-values bound for nonsymmetric A (Crouzeix).
/// Symmetric problems use 1.
inline constexpr double kFieldOfValuesConstant = 11.08;

/// Joukowski-type map psi(w) = gamma w + c0 + c1 / w taking the exterior of the
/// unit disk onto the exterior of [1/(lambdaN+lambda), 1/(lambda1+lambda)].
struct IntervalMap {
    double lambda1 = 0.0;
    double lambdaN = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
};

IntervalMap interval_map(double lambda1, double lambdaN, double lambda);
double psi(const IntervalMap& map, double w);
double psi_prime(const IntervalMap& map, double r);

/// The r > 1 with psi(r) = 1/lambda. Requires lambda1 < lambdaN.
double rhat(const IntervalMap& map);

class AprioriBound {
public:
    double rhat() const noexcept { return rhat_; }
    std::size_t mbar() const noexcept { return mbar_; }
    /// Uniform error bound for the best degree m-1 polynomial approximation of f.
    double bound_at(std::size_t m) const;
    double log_bound_at(std::size_t m) const;

private:
    friend AprioriBound apriori_bound(const IntervalMap& map);
    double rhat_ = 0.0;
    std::size_t mbar_ = 0;
    double lambda_ = 0.0;
    double psi_prime_ = 0.0;
};

/// Throws DomainError unless psi(1) < 1/lambda.
AprioriBound apriori_bound(const IntervalMap& map);

double lambda_star(const SpectralEstimate& est);

struct LambdaAdvice {
    double point = 0.0;
    /// Ordered (low <= high).
    double range_low = 0.0;
    double range_high = 0.0;
    /// Set when kappa is small enough that no regularization is needed and the
    /// nominal range collapses or inverts.
    bool well_conditioned = false;
};

inline constexpr double kWellConditionedKappa = 1e4;

LambdaAdvice lambda_heuristic(double kappa_est);

/// (kappa^(1/4) - 1) / (kappa^(1/4) + 1)
double convergence_factor(double kappa);

/// (lambda + lambda1) / lambda1
double cond_bound_spd(double lambda1, double lambda);

/// Condition estimate used for lambda selection: lambda_max/lambda_min of A for
/// symmetric A, sqrt of the extremes' ratio of A^T A otherwise.
double estimate_condition(const DenseMatrix& a);

/// det(lambda H - I) = lambda^m q_m(1/lambda) with q_m the characteristic
/// polynomial of H.
ScaledReal shifted_denominator(const DenseMatrix& h, double lambda);

/// ||x_m - A^-1 b|| from the Arnoldi data alone:
/// beta lambda^(m-1) prod(h_{j+1,j}) ||A^-1 (A + lambda I) v_{m+1}|| / |det(I - lambda H_m)|.
/// Returns 0 at breakdown.
double aposteriori_exact_error(const ArnoldiDecomposition& d, const DenseMatrix& a, const Factorization& factored_a,
                               double lambda);

/// Estimate of ||x_m - x|| / ||x|| from x - x_m = (A + lambda I) q_m(Z) x / (lambda q_m(1/lambda)),
/// with the operator norm replaced by its action on b:
/// lambda^(m-1) prod(h_{j+1,j}) ||(A + lambda I) v_{m+1}|| / |det(I - lambda H_m)|.
/// Not a guaranteed bound. Returns 0 at breakdown.
double aposteriori_relative_bound(const ArnoldiDecomposition& d, const DenseMatrix& a, double lambda);

} // namespace ratkit
