#include "ratkit/krylov.hpp"

#include "ratkit/errors.hpp"

#include <string>
#include <utility>

namespace ratkit {

LinearOperator as_operator(const DenseMatrix& a) {
    if (!a.square())
        throw ContractViolation("as_operator: matrix must be square");
    return {a.rows(), [a](const DenseVector& v) { return a * v; }};
}

DenseMatrix ArnoldiDecomposition::basis_matrix() const {
    const std::size_t n = basis_.empty() ? (v_next_ ? v_next_->size() : 0) : basis_.front().size();
    DenseMatrix v(n, basis_.size());
    for (std::size_t j = 0; j < basis_.size(); ++j)
        v.set_column(j, basis_[j]);
    return v;
}

DenseVector ArnoldiDecomposition::combine(const DenseVector& y) const {
    if (y.size() != basis_.size())
        throw ContractViolation("combine: coefficient count does not match basis size");
    DenseVector x(basis_.empty() ? 0 : basis_.front().size());
    for (std::size_t j = 0; j < basis_.size(); ++j)
        axpy(y[j], basis_[j], x);
    return x;
}

ArnoldiDecomposition arnoldi_start(const LinearOperator& op, const DenseVector& b) {
    if (b.size() != op.dimension)
        throw ContractViolation("arnoldi_start: starting vector length does not match operator dimension");
    const double beta = norm2(b);
    if (!(beta > 0.0))
        throw ContractViolation("arnoldi_start: starting vector must be nonzero");
    ArnoldiDecomposition d;
    d.beta_ = beta;
    d.v_next_ = (1.0 / beta) * b;
    return d;
}

ArnoldiDecomposition arnoldi_extend(const LinearOperator& op, ArnoldiDecomposition d) {
    if (d.breakdown_)
        throw ContractViolation("arnoldi_extend: decomposition has already broken down");
    if (d.m() >= op.dimension)
        throw ContractViolation("arnoldi_extend: Krylov space already spans the whole space (m = " +
                                std::to_string(d.m()) + ")");
    if (!d.v_next_)
        throw ContractViolation("arnoldi_extend: no next basis vector");

    const std::size_t m = d.m();
    d.basis_.push_back(std::move(*d.v_next_));
    d.v_next_.reset();

    DenseVector w = op(d.basis_.back());
    if (w.size() != op.dimension)
        throw ContractViolation("arnoldi_extend: operator changed the vector length");
    const double w_norm = norm2(w);

    DenseVector h(m + 1);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= m; ++i) {
            const double c = dot(d.basis_[i], w);
            h[i] += c;
            axpy(-c, d.basis_[i], w);
        }
    }
    const double h_next = norm2(w);

    DenseMatrix grown(m + 1, m + 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            grown(i, j) = d.hessenberg_(i, j);
    if (m > 0)
        grown(m, m - 1) = d.h_next_;
    for (std::size_t i = 0; i <= m; ++i)
        grown(i, m) = h[i];
    d.hessenberg_ = std::move(grown);

    if (h_next <= kBreakdownTolerance * w_norm || h_next == 0.0) {
        d.breakdown_ = true;
        d.h_next_ = 0.0;
    } else {
        d.h_next_ = h_next;
        d.v_next_ = (1.0 / h_next) * std::move(w);
    }
    d.subdiagonal_.push_back(d.h_next_);
    return d;
}

} // namespace ratkit
