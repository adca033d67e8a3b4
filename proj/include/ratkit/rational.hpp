#pragma once

#include "ratkit/dense.hpp"
#include "ratkit/factorization.hpp"
#include "ratkit/krylov.hpp"
#include "ratkit/solve_report.hpp"

#include <cstddef>
#include <optional>

namespace ratkit {

/// Z = (A + lambda I)^-1, applied through a stored factorization.
class ShiftInvertOperator {
public:
    /// Throws SingularMatrixError (with a hint to raise lambda) when A + lambda I
    /// cannot be factored.
    ShiftInvertOperator(const DenseMatrix& a, double lambda);

    DenseVector apply(const DenseVector& v) const { return solve_factored(factorization_, v); }
    LinearOperator as_linear_operator() const;

    const Factorization& factorization() const noexcept { return factorization_; }
    double lambda() const noexcept { return lambda_; }
    std::size_t dimension() const noexcept { return factorization_.dimension; }

private:
    Factorization factorization_;
    double lambda_;
};

/// Q = (A^T A + lambda G)^-1 G with G = H^T H.
class RatOperator {
public:
    RatOperator(const DenseMatrix& a, const DenseMatrix& reg, double lambda);

    DenseVector apply(const DenseVector& v) const { return solve_factored(factorization_, gram_h_ * v); }
    LinearOperator as_linear_operator() const;

    /// Solves (H^T H) v = A^T b.
    DenseVector start_vector(const DenseVector& atb) const { return solve_factored(gram_factorization_, atb); }

    const Factorization& factorization() const noexcept { return factorization_; }
    const DenseMatrix& gram_h() const noexcept { return gram_h_; }
    double lambda() const noexcept { return lambda_; }
    std::size_t dimension() const noexcept { return factorization_.dimension; }

private:
    Factorization factorization_;
    Factorization gram_factorization_;
    DenseMatrix gram_h_;
    double lambda_;
};

/// y = f(H) e_1 for f(z) = z / (1 - lambda z), via (I - lambda H) y = H e_1.
/// Throws SingularFunctionError when I - lambda H is singular to working precision.
DenseVector eval_f_small(const DenseMatrix& h, double lambda);

SolveReport ra_solve(const DenseMatrix& a, const DenseVector& b, double lambda, const SolveOptions& opts = {},
                     const std::optional<DenseVector>& x_true = std::nullopt);

SolveReport riley_solve(const DenseMatrix& a, const DenseVector& b, double lambda, const SolveOptions& opts = {},
                        const std::optional<DenseVector>& x_true = std::nullopt);

SolveReport rat_solve(const DenseMatrix& a, const DenseVector& b_obs, const DenseMatrix& reg, double lambda,
                      const SolveOptions& opts = {}, const std::optional<DenseVector>& x_true = std::nullopt);

/// Solution of (A^T A + lambda H^T H) x = A^T b by one factored solve.
DenseVector tikhonov_solve(const DenseMatrix& a, const DenseVector& b_obs, const DenseMatrix& reg, double lambda);

/// Tridiagonal (-1, 2, -1), n >= 2.
DenseMatrix second_difference_matrix(std::size_t n);

} // namespace ratkit
