#pragma once

#include "ratkit/dense.hpp"
#include "ratkit/errors.hpp"
#include "ratkit/solve_report.hpp"

#include <optional>
#include <string>

namespace ratkit::detail {

/// Accumulates per-iteration records and tracks the best iterate.
class ReportBuilder {
public:
    ReportBuilder(std::string method, double lambda, const DenseMatrix& a, const DenseVector& b,
                  const std::optional<DenseVector>& x_true, const SolveOptions& opts)
        : a_(a), b_(b), x_true_(x_true), opts_(opts) {
        if (x_true_ && x_true_->size() != a.cols())
            throw ContractViolation(method + ": x_true length does not match the system");
        report_.method = std::move(method);
        report_.lambda = lambda;
    }

    /// Records x as iterate number history.size()+1. Returns true when the
    /// residual tolerance is met.
    bool record(const DenseVector& x) {
        IterationRecord rec;
        rec.m = report_.history.size() + 1;
        rec.residual_norm = norm2(b_ - a_ * x);
        if (x_true_)
            rec.error_norm = norm2(x - *x_true_);
        const double score = rec.error_norm.value_or(rec.residual_norm);
        // Strict comparison keeps the smallest m on ties; NaN never wins.
        if (report_.history.empty() || score < best_score_ || !(best_score_ == best_score_)) {
            best_score_ = score;
            report_.best_m = rec.m;
            report_.best_x = x;
        }
        report_.history.push_back(rec);
        if (opts_.keep_iterates)
            report_.iterates.push_back(x);
        return opts_.residual_tol && rec.residual_norm <= *opts_.residual_tol;
    }

    std::size_t recorded() const { return report_.history.size(); }

    SolveReport finish(StopReason reason, std::string note = {}) {
        report_.stopped_reason = reason;
        report_.note = std::move(note);
        return std::move(report_);
    }

private:
    const DenseMatrix& a_;
    const DenseVector& b_;
    const std::optional<DenseVector>& x_true_;
    const SolveOptions& opts_;
    SolveReport report_;
    double best_score_ = 0.0;
};

inline std::size_t iteration_cap(const SolveOptions& opts, std::size_t n) {
    const std::size_t cap = opts.max_iter.value_or(n);
    return cap < n ? cap : n;
}

} // namespace ratkit::detail
