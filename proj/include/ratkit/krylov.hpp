#pragma once

#include "ratkit/dense.hpp"
#include "ratkit/spectral.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ratkit {

/// A square linear map given only by its action.
struct LinearOperator {
    std::size_t dimension = 0;
    MatVec apply;

    DenseVector operator()(const DenseVector& v) const { return apply(v); }
};

LinearOperator as_operator(const DenseMatrix& a);

/// h_{m+1,m} <= tol * ||Z v_m|| declares an invariant Krylov subspace.
inline constexpr double kBreakdownTolerance = 1e-14;

/// State of the Arnoldi process after m steps: Z V_m = V_m H_m + h_next v_next e_m^T.
class ArnoldiDecomposition {
public:
    std::size_t m() const noexcept { return basis_.size(); }
    double beta() const noexcept { return beta_; }
    /// Set to zero when breakdown is declared.
    double h_next() const noexcept { return h_next_; }
    bool breakdown() const noexcept { return breakdown_; }

    /// m x m upper Hessenberg projection.
    const DenseMatrix& hessenberg() const noexcept { return hessenberg_; }
    /// Orthonormal basis vectors v_1..v_m.
    const std::vector<DenseVector>& basis() const noexcept { return basis_; }
    /// n x m matrix [v_1 ... v_m].
    DenseMatrix basis_matrix() const;
    /// v_{m+1}; absent after breakdown.
    const std::optional<DenseVector>& v_next() const noexcept { return v_next_; }
    /// Subdiagonal entries h_{2,1} .. h_{m+1,m}.
    const std::vector<double>& subdiagonal() const noexcept { return subdiagonal_; }

    /// V_m y
    DenseVector combine(const DenseVector& y) const;

private:
    friend ArnoldiDecomposition arnoldi_start(const LinearOperator& op, const DenseVector& b);
    friend ArnoldiDecomposition arnoldi_extend(const LinearOperator& op, ArnoldiDecomposition d);

    std::vector<DenseVector> basis_;
    DenseMatrix hessenberg_;
    std::vector<double> subdiagonal_;
    std::optional<DenseVector> v_next_;
    double h_next_ = 0.0;
    double beta_ = 0.0;
    bool breakdown_ = false;
};

/// m = 0 state holding v_1 = b/||b|| and beta = ||b||.
ArnoldiDecomposition arnoldi_start(const LinearOperator& op, const DenseVector& b);

/// One Arnoldi step (modified Gram-Schmidt plus one reorthogonalization pass).
/// Takes the decomposition by value so callers can move it through the loop.
ArnoldiDecomposition arnoldi_extend(const LinearOperator& op, ArnoldiDecomposition d);

} // namespace ratkit
