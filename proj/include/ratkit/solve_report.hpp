#pragma once

#include "ratkit/dense.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ratkit {

enum class StopReason {
    MaxIter,
    Breakdown,
    ResidualTol,
    /// f(H_m) could not be evaluated (1/lambda is a Ritz value to working precision).
    SingularFunction,
};

std::string_view to_string(StopReason r);

struct IterationRecord {
    std::size_t m = 0;
    std::optional<double> error_norm; ///< ||x_m - x_true||, absent without x_true
    double residual_norm = 0.0;       ///< ||b - A x_m||
};

struct SolveOptions {
    /// Defaults to the system dimension.
    std::optional<std::size_t> max_iter;
    std::optional<double> residual_tol;
    /// Keep every iterate in SolveReport::iterates (tests and diagnostics).
    bool keep_iterates = false;
};

struct SolveReport {
    std::string method;
    double lambda = 0.0;
    std::vector<IterationRecord> history;
    std::size_t best_m = 0;
    DenseVector best_x;
    StopReason stopped_reason = StopReason::MaxIter;
    /// Diagnostic for SingularFunction stops.
    std::string note;
    std::vector<DenseVector> iterates;

    bool has_errors() const { return !history.empty() && history.front().error_norm.has_value(); }
    const IterationRecord& best() const;
    /// Error at best_m when x_true was given, residual otherwise.
    double best_value() const;
};

} // namespace ratkit
