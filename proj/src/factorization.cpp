#include "ratkit/factorization.hpp"

#include "ratkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace ratkit {

namespace {

void require_square_finite(const DenseMatrix& a, const char* who) {
    if (!a.square())
        throw ContractViolation(std::string(who) + ": matrix must be square");
    if (!all_finite(a))
        throw ContractViolation(std::string(who) + ": matrix has non-finite entries");
}

} // namespace

Factorization lu_factor(const DenseMatrix& a) {
    require_square_finite(a, "lu_factor");
    const std::size_t n = a.rows();
    DenseMatrix work = a;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(work(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(work(i, k)) > best) {
                best = std::abs(work(i, k));
                p = i;
            }
        }
        if (best < kSingularPivot) {
            throw SingularMatrixError(k, "lu_factor: matrix is singular to working precision at column " +
                                             std::to_string(k));
        }
        if (p != k) {
            auto rk = work.row(k);
            auto rp = work.row(p);
            std::swap_ranges(rk.begin(), rk.end(), rp.begin());
            std::swap(perm[k], perm[p]);
        }
        const double pivot = work(k, k);
        const auto rk = work.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = work(i, k) / pivot;
            work(i, k) = l;
            if (l == 0.0)
                continue;
            auto ri = work.row(i);
            for (std::size_t j = k + 1; j < n; ++j)
                ri[j] -= l * rk[j];
        }
    }

    Factorization f;
    f.kind = FactorKind::PivotedLU;
    f.dimension = n;
    f.permutation = std::move(perm);
    f.lower = DenseMatrix(n, n);
    f.upper = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        f.lower(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j)
            f.lower(i, j) = work(i, j);
        for (std::size_t j = i; j < n; ++j)
            f.upper(i, j) = work(i, j);
    }
    return f;
}

Factorization cholesky_factor(const DenseMatrix& a) {
    require_square_finite(a, "cholesky_factor");
    if (!is_symmetric(a))
        throw ContractViolation("cholesky_factor: matrix is not symmetric");
    const std::size_t n = a.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto lj = l.row(j);
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= lj[k] * lj[k];
        if (!(d > 0.0)) {
            throw NotSpdError(j, "cholesky_factor: non-positive pivot at column " + std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            const auto li = l.row(i);
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= li[k] * lj[k];
            l(i, j) = s / ljj;
        }
    }
    Factorization f;
    f.kind = FactorKind::Cholesky;
    f.dimension = n;
    f.lower = std::move(l);
    return f;
}

Factorization factor_spd_or_lu(const DenseMatrix& a) {
    if (is_symmetric(a)) {
        try {
            return cholesky_factor(a);
        } catch (const NotSpdError&) {
            // fall through to LU
        }
    }
    return lu_factor(a);
}

DenseVector solve_factored(const Factorization& f, const DenseVector& r) {
    const std::size_t n = f.dimension;
    if (r.size() != n) {
        throw ContractViolation("solve_factored: right-hand side has length " + std::to_string(r.size()) +
                                ", factorization has dimension " + std::to_string(n));
    }
    DenseVector y(n);
    const DenseMatrix& l = f.lower;

    if (f.kind == FactorKind::PivotedLU) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = r[f.permutation[i]];
            const auto li = l.row(i);
            for (std::size_t k = 0; k < i; ++k)
                s -= li[k] * y[k];
            y[i] = s;
        }
        const DenseMatrix& u = f.upper;
        for (std::size_t i = n; i-- > 0;) {
            const auto ui = u.row(i);
            double s = y[i];
            for (std::size_t k = i + 1; k < n; ++k)
                s -= ui[k] * y[k];
            y[i] = s / ui[i];
        }
        return y;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto li = l.row(i);
        double s = r[i];
        for (std::size_t k = 0; k < i; ++k)
            s -= li[k] * y[k];
        y[i] = s / li[i];
    }
    // L^T x = y, walking L by columns.
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= l(k, i) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

DenseMatrix reconstruct(const Factorization& f) {
    if (f.kind == FactorKind::Cholesky)
        return f.lower * transpose(f.lower);
    const DenseMatrix lu = f.lower * f.upper;
    DenseMatrix a(f.dimension, f.dimension);
    for (std::size_t i = 0; i < f.dimension; ++i) {
        auto dst = a.row(f.permutation[i]);
        const auto src = lu.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return a;
}

} // namespace ratkit
