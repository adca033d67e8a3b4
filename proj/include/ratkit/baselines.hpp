#pragma once

#include "ratkit/dense.hpp"
#include "ratkit/solve_report.hpp"

#include <optional>

namespace ratkit {

/// Conjugate gradients from x_0 = 0. Requires a symmetric matrix; throws
/// IndefiniteMatrixError when p^T A p <= 0.
SolveReport cg_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts = {},
                     const std::optional<DenseVector>& x_true = std::nullopt);

/// Full GMRES from x_0 = 0 with Givens rotations on the Hessenberg least-squares problem.
SolveReport gmres_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts = {},
                        const std::optional<DenseVector>& x_true = std::nullopt);

/// CG on the normal equations A^T A x = A^T b without forming A^T A.
SolveReport cgls_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts = {},
                       const std::optional<DenseVector>& x_true = std::nullopt);

} // namespace ratkit
