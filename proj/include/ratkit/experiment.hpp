#pragma once

#include "ratkit/errors.hpp"
#include "ratkit/problems.hpp"
#include "ratkit/solve_report.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ratkit::exp {

/// Bad configuration or command line. `field` is the dotted config path or flag.
class UsageError : public Error {
public:
    UsageError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class LambdaPolicy { Star, HeuristicPoint, HeuristicRangeLow, HeuristicRangeHigh };

std::string_view to_string(LambdaPolicy p);
std::optional<LambdaPolicy> parse_policy(std::string_view s);

struct MethodSpec {
    std::string name; ///< ra, riley, rat, cg, gmres, cgls
    std::optional<double> lambda;
    std::optional<LambdaPolicy> policy;

    /// "ra@1e-09", "rat@star", "cg"
    std::string label() const;
};

bool method_uses_lambda(std::string_view name);

/// Parses "ra@1e-9", "rat@star", "gmres".
MethodSpec parse_method(std::string_view token, const std::string& field = "methods");

struct ProblemSpec {
    std::string kind = "shaw"; ///< gravity, foxgood, shaw, baart, franke, mtx
    std::optional<std::size_t> n;
    std::size_t grid_n = 15;
    double shape = 1.0;
    std::string matrix_path;
    std::string rhs_path;
};

enum class Regularization { SecondDifference, Identity };

struct ScenarioConfig {
    std::string name = "scenario";
    ProblemSpec problem;
    std::optional<NoiseSpec> noise;
    std::vector<MethodSpec> methods;
    /// Absent means the system dimension.
    std::optional<std::size_t> max_iter;
    std::optional<double> residual_tol;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir;
    Regularization regularization = Regularization::SecondDifference;
};

/// Flat `key = value` text with dotted keys; `#` starts a comment.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Throws UsageError naming the offending field.
void validate(const ScenarioConfig& cfg);

TestProblem build_problem(const ProblemSpec& spec);

/// Resolves a lambda policy against the problem matrix.
double resolve_lambda(LambdaPolicy policy, const DenseMatrix& a);

struct MethodResult {
    MethodSpec spec;
    std::optional<double> lambda_used;
    std::string status = "ok"; ///< ok or failed
    std::string message;
    std::optional<SolveReport> report;
    double wall_time_ms = 0.0;

    std::optional<double> err_min() const;
    std::optional<double> res_at_min() const;
    std::optional<std::size_t> nit() const;
};

struct ScenarioResult {
    std::string name;
    TestProblem problem;
    std::vector<MethodResult> methods;

    bool any_failed() const;
};

/// Runs every method of a validated config. Failures are recorded per method.
/// Log lines (resolved lambdas, failures) go to `log` when given.
ScenarioResult execute_scenario(const ScenarioConfig& cfg, std::ostream* log = nullptr);

/// `iter,error_norm,residual_norm` with %.17g values and an empty error column
/// when the exact solution is unknown.
std::string history_csv(const SolveReport& report);

/// One CSV per method plus summary.json. Returns the written paths.
std::vector<std::filesystem::path> write_scenario(const ScenarioResult& result, const std::filesystem::path& dir);

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log = nullptr);

struct TableRow {
    int table = 0;
    std::string problem;
    std::string variant; ///< noise draw for table 3, empty otherwise
    std::string method;
    std::optional<double> lambda;
    std::optional<double> paper_err;
    std::optional<double> paper_res;
    std::optional<std::size_t> paper_nit;
    std::optional<double> err;
    std::optional<double> res;
    std::optional<std::size_t> nit;
    /// measured, not-reported, not-implemented, failed
    std::string status;
    std::optional<double> band_low;
    std::optional<double> band_high;
    std::optional<std::size_t> nit_limit;
    /// pass, fail, or empty when nothing is compared
    std::string flag;
};

/// Runs the scenarios behind table 1, 2 or 3 and compares against the
/// published values.
std::vector<TableRow> reproduce_table(int table_id, std::uint64_t seed = 1);
std::string table_csv(const std::vector<TableRow>& rows);

struct SweepResult {
    std::string method;
    std::vector<double> lambdas;
    std::vector<std::optional<SolveReport>> reports;
    std::vector<std::string> messages;
    bool uses_error = true;
};

/// Runs `method` once per lambda (in parallel) on the same problem.
SweepResult sweep_lambda(const TestProblem& problem, std::string_view method, const std::vector<double>& lambdas,
                         std::optional<std::size_t> max_iter, Regularization reg = Regularization::SecondDifference);

/// Wide CSV: iter, then one column per lambda (error, or residual without x_true).
std::string sweep_history_csv(const SweepResult& sweep);
/// lambda,min_value,best_m,status
std::string sweep_min_csv(const SweepResult& sweep);

/// Entry point of the command-line tool. Returns the process exit status:
/// 0 success, 1 solver failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ratkit::exp
