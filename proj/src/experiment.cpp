#include "ratkit/experiment.hpp"

#include "ratkit/analysis.hpp"
#include "ratkit/baselines.hpp"
#include "ratkit/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace ratkit::exp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> to_double(std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t.front() == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
    const std::string t = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        return std::nullopt;
    return v;
}

double require_double(std::string_view value, const std::string& field) {
    if (auto v = to_double(value))
        return *v;
    throw UsageError(field, "expected a number, got '" + std::string(value) + "'");
}

std::uint64_t require_uint(std::string_view value, const std::string& field) {
    if (auto v = to_uint(value))
        return *v;
    throw UsageError(field, "expected a non-negative integer, got '" + std::string(value) + "'");
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::string format_g(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const std::set<std::string>& known_methods() {
    static const std::set<std::string> m{"ra", "riley", "rat", "cg", "gmres", "cgls"};
    return m;
}

const std::set<std::string>& known_problems() {
    static const std::set<std::string> p{"gravity", "foxgood", "shaw", "baart", "franke", "mtx"};
    return p;
}

std::size_t default_size(const std::string& kind) {
    if (kind == "gravity")
        return 100;
    if (kind == "foxgood")
        return 80;
    if (kind == "baart")
        return 120;
    return 64;
}

} // namespace

std::string_view to_string(LambdaPolicy p) {
    switch (p) {
    case LambdaPolicy::Star: return "star";
    case LambdaPolicy::HeuristicPoint: return "heuristic-point";
    case LambdaPolicy::HeuristicRangeLow: return "heuristic-range-low";
    case LambdaPolicy::HeuristicRangeHigh: return "heuristic-range-high";
    }
    return "unknown";
}

std::optional<LambdaPolicy> parse_policy(std::string_view s) {
    const std::string t = lower(trim(s));
    if (t == "star")
        return LambdaPolicy::Star;
    if (t == "heuristic-point")
        return LambdaPolicy::HeuristicPoint;
    if (t == "heuristic-range-low")
        return LambdaPolicy::HeuristicRangeLow;
    if (t == "heuristic-range-high")
        return LambdaPolicy::HeuristicRangeHigh;
    return std::nullopt;
}

bool method_uses_lambda(std::string_view name) { return name == "ra" || name == "riley" || name == "rat"; }

std::string MethodSpec::label() const {
    if (lambda)
        return name + "@" + format_g(*lambda, 6);
    if (policy)
        return name + "@" + std::string(to_string(*policy));
    return name;
}

MethodSpec parse_method(std::string_view token, const std::string& field) {
    const std::string t = trim(token);
    MethodSpec m;
    const auto at = t.find('@');
    m.name = lower(trim(t.substr(0, at)));
    if (m.name.empty())
        throw UsageError(field, "empty method entry");
    if (!known_methods().count(m.name))
        throw UsageError(field, "unknown method '" + m.name + "' (expected ra, riley, rat, cg, gmres or cgls)");
    if (at == std::string::npos)
        return m;
    const std::string arg = trim(t.substr(at + 1));
    if (!method_uses_lambda(m.name))
        throw UsageError(field, "method '" + m.name + "' takes no lambda");
    if (auto p = parse_policy(arg)) {
        m.policy = p;
    } else if (auto v = to_double(arg)) {
        if (!(*v > 0.0))
            throw UsageError(field, "lambda for '" + m.name + "' must be positive");
        m.lambda = v;
    } else {
        throw UsageError(field, "'" + arg + "' is neither a number nor a lambda policy");
    }
    return m;
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::optional<double> noise_delta;
    std::optional<std::uint64_t> noise_seed;
    std::set<std::string> seen;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw UsageError(key, "duplicate key");
        if (value.empty())
            throw UsageError(key, "missing value");

        if (key == "name") {
            cfg.name = value;
        } else if (key == "problem.kind") {
            cfg.problem.kind = lower(value);
        } else if (key == "problem.n") {
            cfg.problem.n = require_uint(value, key);
        } else if (key == "problem.grid_n") {
            cfg.problem.grid_n = require_uint(value, key);
        } else if (key == "problem.shape") {
            cfg.problem.shape = require_double(value, key);
        } else if (key == "problem.matrix") {
            cfg.problem.matrix_path = value;
        } else if (key == "problem.rhs") {
            cfg.problem.rhs_path = value;
        } else if (key == "noise.delta") {
            noise_delta = require_double(value, key);
        } else if (key == "noise.seed") {
            noise_seed = require_uint(value, key);
        } else if (key == "methods") {
            for (const std::string& tok : split_list(value))
                cfg.methods.push_back(parse_method(tok, key));
        } else if (key == "max_iter") {
            if (lower(value) != "n")
                cfg.max_iter = require_uint(value, key);
        } else if (key == "residual_tol") {
            cfg.residual_tol = require_double(value, key);
        } else if (key == "seed") {
            cfg.seed = require_uint(value, key);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "rat.regularization") {
            const std::string v = lower(value);
            if (v == "second-difference")
                cfg.regularization = Regularization::SecondDifference;
            else if (v == "identity")
                cfg.regularization = Regularization::Identity;
            else
                throw UsageError(key, "expected second-difference or identity");
        } else {
            throw UsageError(key, "unknown key");
        }
    }
    if (noise_delta)
        cfg.noise = NoiseSpec{*noise_delta, noise_seed.value_or(cfg.seed)};
    else if (noise_seed)
        throw UsageError("noise.seed", "given without noise.delta");
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("config", "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const ScenarioConfig& cfg) {
    const ProblemSpec& p = cfg.problem;
    if (!known_problems().count(p.kind))
        throw UsageError("problem.kind", "unknown problem '" + p.kind +
                                             "' (expected gravity, foxgood, shaw, baart, franke or mtx)");
    if (p.kind == "mtx" && p.matrix_path.empty())
        throw UsageError("problem.matrix", "required for problem.kind = mtx");
    if (p.kind == "franke") {
        if (p.grid_n < 2)
            throw UsageError("problem.grid_n", "must be at least 2");
        if (!(p.shape > 0.0))
            throw UsageError("problem.shape", "must be positive");
    }
    if (p.n && (p.kind == "franke" || p.kind == "mtx"))
        throw UsageError("problem.n", "not used by problem kind '" + p.kind + "'");
    if (p.n && *p.n < 8)
        throw UsageError("problem.n", "must be at least 8");
    if (p.kind == "shaw" && p.n && *p.n % 2 != 0)
        throw UsageError("problem.n", "shaw needs an even size");
    if (cfg.methods.empty())
        throw UsageError("methods", "at least one method is required");
    for (const MethodSpec& m : cfg.methods) {
        if (!known_methods().count(m.name))
            throw UsageError("methods", "unknown method '" + m.name + "'");
        if (method_uses_lambda(m.name) && !m.lambda && !m.policy)
            throw UsageError("methods", "method '" + m.name + "' needs a lambda (value or policy)");
        if (m.lambda && !(*m.lambda > 0.0))
            throw UsageError("methods", "lambda for '" + m.name + "' must be positive");
    }
    if (cfg.noise && (!(cfg.noise->delta >= 0.0) || !std::isfinite(cfg.noise->delta)))
        throw UsageError("noise.delta", "must be finite and >= 0");
    if (cfg.max_iter && *cfg.max_iter == 0)
        throw UsageError("max_iter", "must be positive");
    if (cfg.residual_tol && !(*cfg.residual_tol > 0.0))
        throw UsageError("residual_tol", "must be positive");
}

TestProblem build_problem(const ProblemSpec& spec) {
    if (spec.kind == "franke")
        return generate_franke_rbf(spec.grid_n, spec.shape);
    if (spec.kind == "mtx") {
        std::optional<std::filesystem::path> rhs;
        if (!spec.rhs_path.empty())
            rhs = spec.rhs_path;
        return load_matrix_market(spec.matrix_path, rhs);
    }
    return generate_fredholm(spec.kind, spec.n.value_or(default_size(spec.kind)));
}

double resolve_lambda(LambdaPolicy policy, const DenseMatrix& a) {
    if (policy == LambdaPolicy::Star) {
        if (!is_symmetric(a))
            throw UsageError("methods", "lambda policy 'star' needs a symmetric positive definite problem");
        return lambda_star(extreme_eigs_spd(a));
    }
    const LambdaAdvice advice = lambda_heuristic(std::max(1.0, estimate_condition(a)));
    switch (policy) {
    case LambdaPolicy::HeuristicPoint: return advice.point;
    case LambdaPolicy::HeuristicRangeLow: return advice.range_low;
    default: return advice.range_high;
    }
}

std::optional<double> MethodResult::err_min() const {
    if (!report || report->history.empty() || !report->has_errors())
        return std::nullopt;
    return report->best().error_norm;
}

std::optional<double> MethodResult::res_at_min() const {
    if (!report || report->history.empty())
        return std::nullopt;
    return report->best().residual_norm;
}

std::optional<std::size_t> MethodResult::nit() const {
    if (!report || report->history.empty())
        return std::nullopt;
    return report->best_m;
}

bool ScenarioResult::any_failed() const {
    return std::any_of(methods.begin(), methods.end(), [](const MethodResult& m) { return m.status != "ok"; });
}

namespace {

DenseMatrix regularization_matrix(Regularization reg, std::size_t n) {
    return reg == Regularization::Identity ? DenseMatrix::identity(n) : second_difference_matrix(n);
}

SolveReport dispatch(const std::string& method, const TestProblem& p, const DenseVector& b, double lambda,
                     const SolveOptions& opts, Regularization reg) {
    if (method == "ra")
        return ra_solve(p.a, b, lambda, opts, p.x_true);
    if (method == "riley")
        return riley_solve(p.a, b, lambda, opts, p.x_true);
    if (method == "rat")
        return rat_solve(p.a, b, regularization_matrix(reg, p.a.rows()), lambda, opts, p.x_true);
    if (method == "cg")
        return cg_solve(p.a, b, opts, p.x_true);
    if (method == "gmres")
        return gmres_solve(p.a, b, opts, p.x_true);
    if (method == "cgls")
        return cgls_solve(p.a, b, opts, p.x_true);
    throw UsageError("methods", "unknown method '" + method + "'");
}

} // namespace

ScenarioResult execute_scenario(const ScenarioConfig& cfg, std::ostream* log) {
    validate(cfg);
    ScenarioResult result;
    result.name = cfg.name;
    result.problem = build_problem(cfg.problem);
    const DenseVector b_obs = cfg.noise ? add_noise(result.problem.b, *cfg.noise) : result.problem.b;

    SolveOptions opts;
    opts.max_iter = cfg.max_iter;
    opts.residual_tol = cfg.residual_tol;

    for (const MethodSpec& spec : cfg.methods) {
        MethodResult mr;
        mr.spec = spec;
        const auto start = std::chrono::steady_clock::now();
        try {
            double lambda = 0.0;
            if (method_uses_lambda(spec.name)) {
                if (spec.lambda) {
                    lambda = *spec.lambda;
                } else {
                    lambda = resolve_lambda(*spec.policy, result.problem.a);
                    if (log)
                        *log << "ratkit: " << spec.name << ": lambda policy " << to_string(*spec.policy)
                             << " resolved to " << format_g(lambda, 6) << '\n';
                }
                mr.lambda_used = lambda;
            }
            mr.report = dispatch(spec.name, result.problem, b_obs, lambda, opts, cfg.regularization);
        } catch (const UsageError&) {
            throw;
        } catch (const Error& e) {
            mr.status = "failed";
            mr.message = e.what();
            if (log)
                *log << "ratkit: " << spec.label() << " failed: " << e.what() << '\n';
        }
        mr.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        result.methods.push_back(std::move(mr));
    }
    return result;
}

std::string history_csv(const SolveReport& report) {
    std::string out = "iter,error_norm,residual_norm\n";
    for (const IterationRecord& r : report.history) {
        out += std::to_string(r.m);
        out += ',';
        if (r.error_norm)
            out += format_g(*r.error_norm);
        out += ',';
        out += format_g(r.residual_norm);
        out += '\n';
    }
    return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw Error("write failed for '" + path.string() + "'");
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    if (v && std::isfinite(*v))
        return *v;
    return nullptr;
}

} // namespace

std::vector<std::filesystem::path> write_scenario(const ScenarioResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    std::map<std::string, int> uses;

    nlohmann::ordered_json summary;
    summary["scenario"] = result.name;
    nlohmann::ordered_json problem;
    problem["name"] = result.problem.name;
    problem["dimension"] = result.problem.a.rows();
    problem["has_exact_solution"] = result.problem.x_true.has_value();
    for (const auto& [k, v] : result.problem.params)
        problem["params"][k] = v;
    summary["problem"] = problem;
    summary["methods"] = nlohmann::ordered_json::array();

    for (const MethodResult& m : result.methods) {
        const int k = ++uses[m.spec.name];
        const std::string file = m.spec.name + (k > 1 ? "_" + std::to_string(k) : "") + ".csv";
        nlohmann::ordered_json j;
        j["method"] = m.spec.name;
        j["label"] = m.spec.label();
        j["lambda_used"] = optional_number(m.lambda_used);
        j["lambda_policy"] = m.spec.policy ? nlohmann::ordered_json(std::string(to_string(*m.spec.policy)))
                                           : nlohmann::ordered_json(nullptr);
        j["err_min"] = optional_number(m.err_min());
        j["res_at_min"] = optional_number(m.res_at_min());
        j["nit"] = m.nit() ? nlohmann::ordered_json(*m.nit()) : nlohmann::ordered_json(nullptr);
        j["wall_time_ms"] = m.wall_time_ms;
        j["status"] = m.status;
        if (m.report) {
            j["stopped_reason"] = std::string(to_string(m.report->stopped_reason));
            j["iterations"] = m.report->history.size();
            const auto path = dir / file;
            write_text(path, history_csv(*m.report));
            written.push_back(path);
            j["csv"] = file;
        }
        if (!m.message.empty())
            j["message"] = m.message;
        summary["methods"].push_back(j);
    }
    const auto path = dir / "summary.json";
    write_text(path, summary.dump(2) + "\n");
    written.push_back(path);
    return written;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log) {
    ScenarioResult result = execute_scenario(cfg, log);
    const auto written = write_scenario(result, cfg.output_dir.empty() ? "." : cfg.output_dir);
    if (log)
        for (const auto& p : written)
            *log << "ratkit: wrote " << p.string() << '\n';
    return result;
}

namespace {

enum class Cell { Measured, NotReported, NotImplemented };

struct PaperEntry {
    std::string method;
    Cell cell = Cell::Measured;
    std::optional<double> err;
    std::optional<double> res;
    std::optional<std::size_t> nit;
    /// Acceptance threshold on err and nit, when the row backs a criterion.
    std::optional<double> err_limit;
    std::optional<std::size_t> nit_limit;
};

struct PaperProblem {
    std::string name;
    std::size_t n;
    double lambda_ra;
    double lambda_riley;
    std::vector<PaperEntry> entries;
};

PaperEntry cell(std::string m, double err, double res, std::size_t nit) {
    PaperEntry e;
    e.method = std::move(m);
    e.err = err;
    e.res = res;
    e.nit = nit;
    return e;
}

PaperEntry blank(std::string m) {
    PaperEntry e;
    e.method = std::move(m);
    e.cell = Cell::NotReported;
    return e;
}

PaperEntry absent(std::string m) {
    PaperEntry e;
    e.method = std::move(m);
    e.cell = Cell::NotImplemented;
    return e;
}
PaperEntry criterion(PaperEntry e, double err_limit, std::size_t nit_limit) {
    e.err_limit = err_limit;
    e.nit_limit = nit_limit;
    return e;
}

std::vector<PaperProblem> table_one_two(int id) {
    if (id == 1)
        return {
            {"gravity", 100, 1e-9, 1e-11,
             {criterion(cell("ra", 1.6e-5, 8.1e-9, 2), 1e-3, 6), cell("cg", 1.7e-4, 7.5e-11, 96), absent("art"),
              blank("cgls"), absent("lsqr_b"), absent("mr2"), absent("minres"), cell("riley", 1.3e-3, 8.0e-11, 2)}},
            {"foxgood", 80, 1e-8, 1e-10,
             {criterion(cell("ra", 6.8e-7, 2.9e-10, 5), 1e-4, 10), blank("cg"), absent("art"),
              cell("cgls", 6.3e-6, 9.6e-14, 80), absent("lsqr_b"), absent("mr2"), absent("minres"),
              cell("riley", 6.3e-6, 5.2e-10, 2)}},
        };
    return {
        {"shaw", 64, 1e-9, 1e-10,
         {criterion(cell("ra", 3.3e-3, 2.0e-7, 7), 1e-2, 15), blank("gmres"), absent("art"),
          cell("cgls", 2.8e-2, 5.1e-10, 64), absent("lsqr_b"), absent("mr2"), absent("minres"),
          cell("riley", 9.6e-3, 8.0e-10, 2)}},
        {"baart", 120, 1e-8, 1e-10,
         {criterion(cell("ra", 8.3e-6, 1.3e-8, 6), 1e-4, 12), cell("gmres", 9.6e-6, 1.4e-15, 15), absent("art"),
          cell("cgls", 2.4e-2, 1.7e-14, 120), absent("lsqr_b"), blank("mr2"), blank("minres"),
          cell("riley", 1.3e-5, 1.3e-10, 2)}},
    };
}

void set_band(TableRow& row, const std::optional<double>& limit) {
    if (!row.paper_err || !(*row.paper_err > 0.0))
        return;
    const double decade = std::floor(std::log10(*row.paper_err));
    if (limit) {
        row.band_low = std::pow(10.0, decade);
        row.band_high = *limit;
    } else {
        row.band_low = std::pow(10.0, decade - 1.0);
        row.band_high = std::pow(10.0, decade + 2.0);
    }
}

void judge(TableRow& row) {
    if (row.status != "measured" || !row.band_low)
        return;
    bool ok = row.err && *row.err >= *row.band_low && *row.err <= *row.band_high;
    if (row.nit_limit)
        ok = ok && row.nit && *row.nit <= *row.nit_limit;
    row.flag = ok ? "pass" : "fail";
}

void fill_measured(TableRow& row, const std::optional<SolveReport>& report) {
    if (!report || report->history.empty())
        return;
    row.err = report->best().error_norm;
    row.res = report->best().residual_norm;
    row.nit = report->best_m;
}

std::optional<SolveReport> try_solve(const std::string& method, const TestProblem& p, const DenseVector& b,
                                     double lambda, std::string& message) {
    try {
        return dispatch(method, p, b, lambda, SolveOptions{}, Regularization::SecondDifference);
    } catch (const Error& e) {
        message = e.what();
        return std::nullopt;
    }
}

std::vector<TableRow> reproduce_fredholm_table(int id) {
    std::vector<TableRow> rows;
    for (const PaperProblem& pp : table_one_two(id)) {
        const TestProblem problem = generate_fredholm(pp.name, pp.n);
        for (const PaperEntry& e : pp.entries) {
            TableRow row;
            row.table = id;
            row.problem = pp.name + "(" + std::to_string(pp.n) + ")";
            row.method = e.method;
            row.paper_err = e.err;
            row.paper_res = e.res;
            row.paper_nit = e.nit;
            row.nit_limit = e.nit_limit;
            if (e.method == "ra")
                row.lambda = pp.lambda_ra;
            else if (e.method == "riley")
                row.lambda = pp.lambda_riley;
            if (e.cell == Cell::NotImplemented) {
                row.status = "not-implemented";
                rows.push_back(row);
                continue;
            }
            std::string message;
            fill_measured(row, try_solve(e.method, problem, problem.b, row.lambda.value_or(0.0), message));
            if (e.cell == Cell::NotReported) {
                row.status = "not-reported";
            } else {
                row.status = message.empty() ? "measured" : "failed";
                set_band(row, e.err_limit);
                judge(row);
                if (!message.empty())
                    row.flag = "fail";
            }
            rows.push_back(row);
        }
    }
    return rows;
}

struct RatColumn {
    double lambda;
    double err[4];
    std::size_t nit[4];
};

std::vector<TableRow> reproduce_noise_table(std::uint64_t seed) {
    // columns: shaw #1, shaw #2, baart #1, baart #2
    static const RatColumn rat[] = {
        {1e-3, {0.287, 0.215, 0.046, 0.046}, {5, 3, 2, 2}},   {1e-2, {0.293, 0.242, 0.028, 0.035}, {5, 5, 3, 3}},
        {1e-1, {0.226, 0.230, 0.022, 0.029}, {9, 7, 3, 3}},   {1e+0, {0.297, 0.269, 0.010, 0.013}, {7, 8, 3, 3}},
        {1e+1, {0.199, 0.269, 0.007, 0.009}, {14, 8, 3, 3}},  {1e+2, {0.293, 0.173, 0.008, 0.007}, {18, 10, 4, 3}},
        {1e+3, {0.288, 0.268, 0.008, 0.010}, {11, 13, 4, 4}}, {1e+4, {0.575, 0.522, 0.008, 0.010}, {10, 7, 4, 4}},
    };
    static const double gmres_err[4] = {0.392, 0.374, 0.059, 0.056};
    static const std::size_t gmres_nit[4] = {7, 7, 3, 3};
    static const double rat_limit[2] = {0.35, 0.02};

    std::vector<TableRow> rows;
    const std::pair<const char*, std::size_t> problems[2] = {{"shaw", 64}, {"baart", 120}};
    for (int pi = 0; pi < 2; ++pi) {
        const TestProblem problem = generate_fredholm(problems[pi].first, problems[pi].second);
        const DenseMatrix reg = second_difference_matrix(problem.a.rows());
        for (int draw = 0; draw < 2; ++draw) {
            const int col = 2 * pi + draw;
            const DenseVector b_obs = add_noise(problem.b, NoiseSpec{1e-3, seed + static_cast<std::uint64_t>(draw)});
            auto base = [&](const std::string& method) {
                TableRow row;
                row.table = 3;
                row.problem = std::string(problems[pi].first) + "(" + std::to_string(problems[pi].second) + ")";
                row.variant = "test#" + std::to_string(draw + 1);
                row.method = method;
                return row;
            };
            for (const RatColumn& rc : rat) {
                TableRow row = base("rat");
                row.lambda = rc.lambda;
                row.paper_err = rc.err[col];
                row.paper_nit = rc.nit[col];
                std::optional<SolveReport> report;
                std::string message;
                try {
                    report = rat_solve(problem.a, b_obs, reg, rc.lambda, SolveOptions{}, problem.x_true);
                } catch (const Error& e) {
                    message = e.what();
                }
                fill_measured(row, report);
                row.status = message.empty() ? "measured" : "failed";
                set_band(row, rc.lambda == 1e+1 ? std::optional<double>(rat_limit[pi]) : std::nullopt);
                judge(row);
                if (!message.empty())
                    row.flag = "fail";
                rows.push_back(row);
            }
            {
                TableRow row = base("gmres");
                row.paper_err = gmres_err[col];
                row.paper_nit = gmres_nit[col];
                std::string message;
                TestProblem noisy = problem;
                noisy.b = b_obs;
                fill_measured(row, try_solve("gmres", noisy, b_obs, 0.0, message));
                row.status = message.empty() ? "measured" : "failed";
                set_band(row, std::nullopt);
                judge(row);
                rows.push_back(row);
            }
            for (const char* m : {"art", "lsqr_b", "mr2"}) {
                TableRow row = base(m);
                row.status = "not-implemented";
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::string cell_text(const std::optional<double>& v, int digits = 17) { return v ? format_g(*v, digits) : ""; }
std::string cell_text(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }

} // namespace

std::vector<TableRow> reproduce_table(int table_id, std::uint64_t seed) {
    if (table_id == 1 || table_id == 2)
        return reproduce_fredholm_table(table_id);
    if (table_id == 3)
        return reproduce_noise_table(seed);
    throw UsageError("table", "table id must be 1, 2 or 3");
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out = "table,problem,variant,method,lambda,paper_err,paper_res,paper_nit,err,res,nit,status,band_low,"
                      "band_high,nit_limit,flag\n";
    for (const TableRow& r : rows) {
        out += std::to_string(r.table) + ',' + r.problem + ',' + r.variant + ',' + r.method + ',' +
               cell_text(r.lambda, 6) + ',' + cell_text(r.paper_err, 6) + ',' + cell_text(r.paper_res, 6) + ',' +
               cell_text(r.paper_nit) + ',' + cell_text(r.err) + ',' + cell_text(r.res) + ',' + cell_text(r.nit) +
               ',' + r.status + ',' + cell_text(r.band_low, 6) + ',' + cell_text(r.band_high, 6) + ',' +
               cell_text(r.nit_limit) + ',' + r.flag + '\n';
    }
    return out;
}

SweepResult sweep_lambda(const TestProblem& problem, std::string_view method, const std::vector<double>& lambdas,
                         std::optional<std::size_t> max_iter, Regularization reg) {
    const std::string name = lower(std::string(method));
    if (!method_uses_lambda(name))
        throw UsageError("method", "sweep needs ra, riley or rat, got '" + name + "'");
    if (lambdas.empty())
        throw UsageError("lambdas", "at least one lambda is required");
    for (double l : lambdas)
        if (!(l > 0.0) || !std::isfinite(l))
            throw UsageError("lambdas", "every lambda must be positive and finite");

    SweepResult sweep;
    sweep.method = name;
    sweep.lambdas = lambdas;
    sweep.uses_error = problem.x_true.has_value();
    SolveOptions opts;
    opts.max_iter = max_iter;

    std::vector<std::future<SolveReport>> jobs;
    jobs.reserve(lambdas.size());
    for (double l : lambdas)
        jobs.push_back(std::async(std::launch::async,
                                  [&, l] { return dispatch(name, problem, problem.b, l, opts, reg); }));
    for (auto& job : jobs) {
        try {
            sweep.reports.emplace_back(job.get());
            sweep.messages.emplace_back();
        } catch (const Error& e) {
            sweep.reports.emplace_back(std::nullopt);
            sweep.messages.emplace_back(e.what());
        }
    }
    return sweep;
}

std::string sweep_history_csv(const SweepResult& sweep) {
    std::string out = "iter";
    std::size_t rows = 0;
    for (std::size_t k = 0; k < sweep.lambdas.size(); ++k) {
        out += ",lambda=" + format_g(sweep.lambdas[k], 6);
        if (sweep.reports[k])
            rows = std::max(rows, sweep.reports[k]->history.size());
    }
    out += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        out += std::to_string(i + 1);
        for (const auto& rep : sweep.reports) {
            out += ',';
            if (rep && i < rep->history.size()) {
                const IterationRecord& r = rep->history[i];
                out += format_g(sweep.uses_error ? r.error_norm.value_or(r.residual_norm) : r.residual_norm);
            }
        }
        out += '\n';
    }
    return out;
}

std::string sweep_min_csv(const SweepResult& sweep) {
    std::string out = "lambda,min_value,best_m,status\n";
    for (std::size_t k = 0; k < sweep.lambdas.size(); ++k) {
        out += format_g(sweep.lambdas[k], 17) + ',';
        const auto& rep = sweep.reports[k];
        if (rep && !rep->history.empty())
            out += format_g(rep->best_value()) + ',' + std::to_string(rep->best_m) + ",ok\n";
        else
            out += ",,failed\n";
    }
    return out;
}

} // namespace ratkit::exp
