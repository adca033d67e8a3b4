#include "ratkit/rational.hpp"

#include "ratkit/errors.hpp"
#include "report_builder.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ratkit {

namespace {

void require_system(const char* who, const DenseMatrix& a, const DenseVector& b, double lambda) {
    const std::string name(who);
    if (!a.square())
        throw ContractViolation(name + ": matrix must be square");
    if (b.size() != a.rows())
        throw ContractViolation(name + ": right-hand side length does not match the matrix");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ContractViolation(name + ": lambda must be positive and finite");
    if (!(norm2(b) > 0.0))
        throw ContractViolation(name + ": right-hand side must be nonzero");
}

Factorization factor_or_explain(const DenseMatrix& m, const std::string& what) {
    try {
        return factor_spd_or_lu(m);
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(e.column(), what + " is singular to working precision (" + e.what() +
                                                  "); try a larger lambda");
    }
}

Factorization cholesky_or_explain(const DenseMatrix& m, const std::string& what) {
    try {
        return cholesky_factor(m);
    } catch (const NotSpdError& e) {
        throw NotSpdError(e.column(), what + " is not positive definite to working precision (" + e.what() + ")");
    }
}

} // namespace

ShiftInvertOperator::ShiftInvertOperator(const DenseMatrix& a, double lambda)
    : factorization_(factor_or_explain(shifted(a, lambda), "A + lambda I")), lambda_(lambda) {}

LinearOperator ShiftInvertOperator::as_linear_operator() const {
    return {dimension(), [this](const DenseVector& v) { return apply(v); }};
}

RatOperator::RatOperator(const DenseMatrix& a, const DenseMatrix& reg, double lambda) : lambda_(lambda) {
    if (!a.square() || !reg.square() || reg.rows() != a.rows())
        throw ContractViolation("RatOperator: A and H must be square of the same size");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ContractViolation("RatOperator: lambda must be positive and finite");
    gram_h_ = gram(reg);
    gram_factorization_ = cholesky_or_explain(gram_h_, "H^T H");
    factorization_ = cholesky_or_explain(gram(a) + lambda * gram_h_, "A^T A + lambda H^T H");
}

LinearOperator RatOperator::as_linear_operator() const {
    return {dimension(), [this](const DenseVector& v) { return apply(v); }};
}

DenseVector eval_f_small(const DenseMatrix& h, double lambda) {
    if (!h.square() || h.rows() == 0)
        throw ContractViolation("eval_f_small: H must be square and nonempty");
    const std::size_t m = h.rows();
    DenseMatrix shifted_h = DenseMatrix::identity(m) - lambda * h;
    DenseVector rhs = h.column(0);

    Factorization f;
    try {
        f = lu_factor(shifted_h);
    } catch (const SingularMatrixError&) {
        throw SingularFunctionError("eval_f_small: I - lambda H is singular (1/lambda is an eigenvalue of H)");
    }
    const double scale = max_abs(shifted_h);
    const double tiny = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * scale;
    for (std::size_t i = 0; i < m; ++i)
        if (std::abs(f.upper(i, i)) <= tiny)
            throw SingularFunctionError("eval_f_small: I - lambda H is singular to working precision at pivot " +
                                        std::to_string(i + 1));
    DenseVector y = solve_factored(f, rhs);
    if (!all_finite(y))
        throw SingularFunctionError("eval_f_small: non-finite result");
    return y;
}

namespace {

/// Shared driver for RA and RAT: x_m = scale * V_m f(H_m) e_1.
SolveReport rational_arnoldi(detail::ReportBuilder& report, const LinearOperator& op, const DenseVector& start,
                             double lambda, std::size_t cap) {
    ArnoldiDecomposition d = arnoldi_start(op, start);
    const double scale = d.beta();
    while (report.recorded() < cap) {
        d = arnoldi_extend(op, std::move(d));
        DenseVector y;
        try {
            y = eval_f_small(d.hessenberg(), lambda);
        } catch (const SingularFunctionError& e) {
            return report.finish(StopReason::SingularFunction,
                                 "step " + std::to_string(d.m()) + ": " + e.what());
        }
        if (report.record(scale * d.combine(y)))
            return report.finish(StopReason::ResidualTol);
        if (d.breakdown())
            return report.finish(StopReason::Breakdown);
    }
    return report.finish(StopReason::MaxIter);
}

} // namespace

SolveReport ra_solve(const DenseMatrix& a, const DenseVector& b, double lambda, const SolveOptions& opts,
                     const std::optional<DenseVector>& x_true) {
    require_system("ra_solve", a, b, lambda);
    detail::ReportBuilder report("ra", lambda, a, b, x_true, opts);
    const ShiftInvertOperator z(a, lambda);
    return rational_arnoldi(report, z.as_linear_operator(), b, lambda, detail::iteration_cap(opts, a.rows()));
}

SolveReport riley_solve(const DenseMatrix& a, const DenseVector& b, double lambda, const SolveOptions& opts,
                        const std::optional<DenseVector>& x_true) {
    require_system("riley_solve", a, b, lambda);
    detail::ReportBuilder report("riley", lambda, a, b, x_true, opts);
    const ShiftInvertOperator z(a, lambda);
    const DenseVector zb = z.apply(b);
    DenseVector x = zb;
    const std::size_t cap = detail::iteration_cap(opts, a.rows());
    while (true) {
        if (report.record(x))
            return report.finish(StopReason::ResidualTol);
        if (report.recorded() >= cap)
            break;
        x = zb + lambda * z.apply(x);
    }
    return report.finish(StopReason::MaxIter);
}

SolveReport rat_solve(const DenseMatrix& a, const DenseVector& b_obs, const DenseMatrix& reg, double lambda,
                      const SolveOptions& opts, const std::optional<DenseVector>& x_true) {
    require_system("rat_solve", a, b_obs, lambda);
    detail::ReportBuilder report("rat", lambda, a, b_obs, x_true, opts);
    const RatOperator q(a, reg, lambda);
    const DenseVector v = q.start_vector(transpose_times(a, b_obs));
    if (!(norm2(v) > 0.0))
        throw ContractViolation("rat_solve: A^T b is zero");
    return rational_arnoldi(report, q.as_linear_operator(), v, lambda, detail::iteration_cap(opts, a.rows()));
}

DenseVector tikhonov_solve(const DenseMatrix& a, const DenseVector& b_obs, const DenseMatrix& reg, double lambda) {
    if (!a.square() || b_obs.size() != a.rows())
        throw ContractViolation("tikhonov_solve: shape mismatch");
    const RatOperator q(a, reg, lambda);
    return solve_factored(q.factorization(), transpose_times(a, b_obs));
}

DenseMatrix second_difference_matrix(std::size_t n) {
    if (n < 2)
        throw ContractViolation("second_difference_matrix: n must be at least 2");
    DenseMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        l(i, i) = 2.0;
        if (i + 1 < n) {
            l(i, i + 1) = -1.0;
            l(i + 1, i) = -1.0;
        }
    }
    return l;
}

std::string_view to_string(StopReason r) {
    switch (r) {
    case StopReason::MaxIter: return "max_iter";
    case StopReason::Breakdown: return "breakdown";
    case StopReason::ResidualTol: return "residual_tol";
    case StopReason::SingularFunction: return "singular_f";
    }
    return "unknown";
}

const IterationRecord& SolveReport::best() const {
    if (history.empty() || best_m == 0 || best_m > history.size())
        throw ContractViolation("SolveReport: empty history");
    return history[best_m - 1];
}

double SolveReport::best_value() const {
    const IterationRecord& r = best();
    return r.error_norm.value_or(r.residual_norm);
}

} // namespace ratkit
