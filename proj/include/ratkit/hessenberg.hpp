#pragma once

#include "ratkit/dense.hpp"

namespace ratkit {

/// mantissa * 2^exponent, for determinants that over- or underflow a double.
struct ScaledReal {
    double mantissa = 0.0;
    long exponent = 0;

    /// Folds to a double; saturates to +-inf or 0 when not representable.
    double value() const;
    /// log10 |value|, -inf for zero.
    double log10_abs() const;

    static ScaledReal from(double x);
    ScaledReal& operator*=(double x);
    ScaledReal& operator*=(const ScaledReal& other);
};

/// Rejects matrices with entries below the first subdiagonal larger than
/// 1e-14 * max|H|.
void require_upper_hessenberg(const DenseMatrix& h);

/// det(H - shift I) for upper Hessenberg H by Hyman's method.
///
/// Each irreducible diagonal block is handled separately; within a block the
/// last unknown is fixed to 1 and the subdiagonal rows are back-substituted,
/// leaving the determinant as the first-row residual times the product of
/// subdiagonals. The running vector is rescaled to stay in range.
ScaledReal hessenberg_det_scaled(const DenseMatrix& h, double shift);

double hessenberg_det(const DenseMatrix& h, double shift);

} // namespace ratkit
