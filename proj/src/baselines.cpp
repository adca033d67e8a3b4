#include "ratkit/baselines.hpp"

#include "ratkit/errors.hpp"
#include "ratkit/krylov.hpp"
#include "report_builder.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ratkit {

namespace {

void require_system(const std::string& who, const DenseMatrix& a, const DenseVector& b) {
    if (!a.square())
        throw ContractViolation(who + ": matrix must be square");
    if (b.size() != a.rows())
        throw ContractViolation(who + ": right-hand side length does not match the matrix");
}

} // namespace

SolveReport cg_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts,
                     const std::optional<DenseVector>& x_true) {
    require_system("cg_solve", a, b);
    if (!is_symmetric(a))
        throw ContractViolation("cg_solve: matrix is not symmetric");
    detail::ReportBuilder report("cg", 0.0, a, b, x_true, opts);
    const std::size_t cap = detail::iteration_cap(opts, a.rows());

    DenseVector x(a.rows());
    DenseVector r = b;
    DenseVector p = r;
    double rr = dot(r, r);
    if (rr == 0.0) {
        report.record(x);
        return report.finish(StopReason::Breakdown);
    }
    while (report.recorded() < cap) {
        const DenseVector ap = a * p;
        const double curvature = dot(p, ap);
        if (!(curvature > 0.0))
            throw IndefiniteMatrixError(report.recorded() + 1,
                                        "cg_solve: non-positive curvature p^T A p = " + std::to_string(curvature) +
                                            " at iteration " + std::to_string(report.recorded() + 1));
        const double alpha = rr / curvature;
        axpy(alpha, p, x);
        axpy(-alpha, ap, r);
        const double rr_next = dot(r, r);
        if (report.record(x))
            return report.finish(StopReason::ResidualTol);
        if (rr_next == 0.0)
            return report.finish(StopReason::Breakdown);
        p *= rr_next / rr;
        p += r;
        rr = rr_next;
    }
    return report.finish(StopReason::MaxIter);
}

SolveReport gmres_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts,
                        const std::optional<DenseVector>& x_true) {
    require_system("gmres_solve", a, b);
    detail::ReportBuilder report("gmres", 0.0, a, b, x_true, opts);
    const std::size_t cap = detail::iteration_cap(opts, a.rows());
    const LinearOperator op = as_operator(a);

    const double beta = norm2(b);
    if (beta == 0.0) {
        report.record(DenseVector(a.rows()));
        return report.finish(StopReason::Breakdown);
    }

    ArnoldiDecomposition d = arnoldi_start(op, b);
    std::vector<double> cs, sn;
    std::vector<double> g{beta};
    std::vector<std::vector<double>> r_cols; // column j of R holds j+1 entries

    while (report.recorded() < cap) {
        d = arnoldi_extend(op, std::move(d));
        const std::size_t m = d.m();
        std::vector<double> col(m + 1);
        for (std::size_t i = 0; i < m; ++i)
            col[i] = d.hessenberg()(i, m - 1);
        col[m] = d.h_next();
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double t = cs[i] * col[i] + sn[i] * col[i + 1];
            col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
            col[i] = t;
        }
        const double rho = std::hypot(col[m - 1], col[m]);
        const double c = rho == 0.0 ? 1.0 : col[m - 1] / rho;
        const double s = rho == 0.0 ? 0.0 : col[m] / rho;
        cs.push_back(c);
        sn.push_back(s);
        col[m - 1] = rho;
        col.pop_back();
        g.push_back(-s * g[m - 1]);
        g[m - 1] *= c;
        r_cols.push_back(std::move(col));

        DenseVector y(m);
        for (std::size_t i = m; i-- > 0;) {
            double acc = g[i];
            for (std::size_t j = i + 1; j < m; ++j)
                acc -= r_cols[j][i] * y[j];
            if (r_cols[i][i] == 0.0)
                throw SingularMatrixError(i, "gmres_solve: singular triangular factor");
            y[i] = acc / r_cols[i][i];
        }
        if (report.record(d.combine(y)))
            return report.finish(StopReason::ResidualTol);
        if (d.breakdown())
            return report.finish(StopReason::Breakdown);
    }
    return report.finish(StopReason::MaxIter);
}

SolveReport cgls_solve(const DenseMatrix& a, const DenseVector& b, const SolveOptions& opts,
                       const std::optional<DenseVector>& x_true) {
    require_system("cgls_solve", a, b);
    detail::ReportBuilder report("cgls", 0.0, a, b, x_true, opts);
    const std::size_t cap = detail::iteration_cap(opts, a.rows());

    DenseVector x(a.cols());
    DenseVector r = b;
    DenseVector s = transpose_times(a, r);
    DenseVector p = s;
    double gamma = dot(s, s);
    if (gamma == 0.0) {
        report.record(x);
        return report.finish(StopReason::Breakdown);
    }
    while (report.recorded() < cap) {
        const DenseVector q = a * p;
        const double qq = dot(q, q);
        if (qq == 0.0) {
            report.record(x);
            return report.finish(StopReason::Breakdown);
        }
        const double alpha = gamma / qq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        s = transpose_times(a, r);
        const double gamma_next = dot(s, s);
        if (report.record(x))
            return report.finish(StopReason::ResidualTol);
        if (gamma_next == 0.0)
            return report.finish(StopReason::Breakdown);
        p *= gamma_next / gamma;
        p += s;
        gamma = gamma_next;
    }
    return report.finish(StopReason::MaxIter);
}

} // namespace ratkit
