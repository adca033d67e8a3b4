#pragma once

#include "ratkit/dense.hpp"

#include <cstddef>
#include <vector>

namespace ratkit {

enum class FactorKind { PivotedLU, Cholesky };

/// A reusable decomposition of a square matrix.
///
/// PivotedLU: P A = L U with unit-lower L; `permutation[i]` is the row of A
/// that ended up in position i. Cholesky: A = L L^T, `upper` is left empty.
struct Factorization {
    FactorKind kind = FactorKind::PivotedLU;
    DenseMatrix lower;
    DenseMatrix upper;
    std::vector<std::size_t> permutation;
    std::size_t dimension = 0;
};

/// Pivots with magnitude below this are treated as exact zeros.
inline constexpr double kSingularPivot = 1e-300;

Factorization lu_factor(const DenseMatrix& a);

/// Requires symmetry to relative 1e-12; throws NotSpdError on a non-positive pivot.
Factorization cholesky_factor(const DenseMatrix& a);

/// Cholesky when `a` passes the symmetry test and is positive definite, LU otherwise.
Factorization factor_spd_or_lu(const DenseMatrix& a);

DenseVector solve_factored(const Factorization& f, const DenseVector& r);

/// Rebuilds the factored matrix (P^T L U or L L^T). Used to check factorizations.
DenseMatrix reconstruct(const Factorization& f);

} // namespace ratkit
