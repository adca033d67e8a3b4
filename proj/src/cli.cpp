#include "ratkit/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ratkit::exp {

namespace {

constexpr const char* kOutEnv = "RATKIT_OUT_DIR";

std::filesystem::path output_dir(const std::string& flag, const std::filesystem::path& from_config = {}) {
    if (!flag.empty())
        return flag;
    if (!from_config.empty())
        return from_config;
    if (const char* env = std::getenv(kOutEnv); env && *env)
        return env;
    return "ratkit_out";
}

void write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    err << "ratkit: wrote " << path.string() << '\n';
}

std::vector<double> parse_lambdas(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const MethodSpec probe = parse_method("ra@" + tok, "--lambdas");
        if (!probe.lambda)
            throw UsageError("--lambdas", "'" + tok + "' is not a number");
        out.push_back(*probe.lambda);
    }
    if (out.empty())
        throw UsageError("--lambdas", "at least one lambda is required");
    return out;
}

struct RunFlags {
    std::string config;
    std::optional<double> lambda;
    std::string policy;
    std::optional<double> noise_delta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_iter;
    std::string out;
};

int do_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg = load_config(f.config);
    if (f.seed) {
        cfg.seed = *f.seed;
        if (cfg.noise)
            cfg.noise->seed = *f.seed;
    }
    if (f.noise_delta)
        cfg.noise = NoiseSpec{*f.noise_delta, cfg.noise ? cfg.noise->seed : cfg.seed};
    if (f.max_iter)
        cfg.max_iter = f.max_iter;
    std::optional<LambdaPolicy> policy;
    if (!f.policy.empty()) {
        policy = parse_policy(f.policy);
        if (!policy)
            throw UsageError("--lambda-policy", "unknown policy '" + f.policy + "'");
    }
    for (MethodSpec& m : cfg.methods) {
        if (!method_uses_lambda(m.name))
            continue;
        if (f.lambda) {
            m.lambda = f.lambda;
            m.policy.reset();
        } else if (policy) {
            m.policy = policy;
            m.lambda.reset();
        }
    }
    cfg.output_dir = output_dir(f.out, cfg.output_dir);
    const ScenarioResult result = run_scenario(cfg, &err);
    for (const MethodResult& m : result.methods) {
        out << m.spec.label() << ": " << m.status;
        if (m.err_min())
            out << " err_min=" << *m.err_min();
        if (m.res_at_min())
            out << " res=" << *m.res_at_min();
        if (m.nit())
            out << " nit=" << *m.nit();
        if (m.lambda_used)
            out << " lambda=" << *m.lambda_used;
        out << '\n';
    }
    return result.any_failed() ? 1 : 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rational Arnoldi experiments for ill-conditioned linear systems", "ratkit"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("config", run_flags.config, "Scenario file (key = value)")->required();
    run->add_option("--lambda", run_flags.lambda, "Fixed lambda for every ra/riley/rat method");
    run->add_option("--lambda-policy", run_flags.policy,
                    "star, heuristic-point, heuristic-range-low or heuristic-range-high");
    run->add_option("--noise-delta", run_flags.noise_delta, "Relative noise level added to b");
    run->add_option("--seed", run_flags.seed, "Noise seed");
    run->add_option("--max-iter", run_flags.max_iter, "Iteration cap (default: dimension)");
    run->add_option("--out", run_flags.out, std::string("Output directory (default: $") + kOutEnv + ")");

    int table_id = 0;
    std::uint64_t table_seed = 1;
    std::string table_out;
    auto* table = app.add_subcommand("table", "Reproduce a published results table");
    table->add_option("id", table_id, "1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
    table->add_option("--seed", table_seed, "Seed of the first noise draw (table 3)");
    table->add_option("--out", table_out, "Output directory");

    std::string sweep_problem = "baart", sweep_method = "ra", sweep_lambdas, sweep_out;
    std::optional<std::size_t> sweep_n, sweep_max_iter;
    std::optional<double> sweep_noise;
    std::uint64_t sweep_seed = 1;
    auto* sweep = app.add_subcommand("sweep", "Minimum error against lambda for one method");
    sweep->add_option("--problem", sweep_problem, "gravity, foxgood, shaw, baart or franke");
    sweep->add_option("--n", sweep_n, "Problem size");
    sweep->add_option("--method", sweep_method, "ra, riley or rat");
    sweep->add_option("--lambdas", sweep_lambdas, "Comma-separated lambda values")->required();
    sweep->add_option("--max-iter", sweep_max_iter, "Iteration cap (default: dimension)");
    sweep->add_option("--noise-delta", sweep_noise, "Relative noise level added to b");
    sweep->add_option("--seed", sweep_seed, "Noise seed");
    sweep->add_option("--out", sweep_out, "Output directory");

    std::string gen_problem, gen_export;
    std::optional<std::size_t> gen_n;
    std::size_t gen_grid = 15;
    double gen_shape = 1.0;
    auto* gen = app.add_subcommand("gen", "Export a test problem in Matrix Market format");
    gen->add_option("problem", gen_problem, "gravity, foxgood, shaw, baart or franke")->required();
    gen->add_option("--export", gen_export, "Target directory")->required();
    gen->add_option("--n", gen_n, "Problem size");
    gen->add_option("--grid-n", gen_grid, "Franke grid points per side");
    gen->add_option("--shape", gen_shape, "Franke RBF shape parameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run)
            return do_run(run_flags, out, err);

        if (*table) {
            const auto rows = reproduce_table(table_id, table_seed);
            const auto path = output_dir(table_out) / ("table" + std::to_string(table_id) + ".csv");
            write_file(path, table_csv(rows), err);
            std::size_t pass = 0, fail = 0;
            for (const TableRow& r : rows) {
                pass += r.flag == "pass";
                fail += r.flag == "fail";
            }
            out << "table " << table_id << ": " << rows.size() << " rows, " << pass << " pass, " << fail << " fail\n";
            return 0;
        }

        if (*sweep) {
            ProblemSpec spec;
            spec.kind = sweep_problem;
            spec.n = sweep_n;
            ScenarioConfig probe;
            probe.problem = spec;
            probe.methods.push_back(parse_method(sweep_method + "@1", "--method"));
            validate(probe);
            const std::vector<double> lambdas = parse_lambdas(sweep_lambdas);
            TestProblem problem = build_problem(spec);
            if (sweep_noise)
                problem.b = add_noise(problem.b, NoiseSpec{*sweep_noise, sweep_seed});
            const SweepResult result = sweep_lambda(problem, sweep_method, lambdas, sweep_max_iter);
            const auto dir = output_dir(sweep_out);
            const std::string stem = "sweep_" + problem.name + "_" + result.method;
            write_file(dir / (stem + ".csv"), sweep_history_csv(result), err);
            write_file(dir / (stem + "_min.csv"), sweep_min_csv(result), err);
            bool failed = false;
            for (std::size_t k = 0; k < lambdas.size(); ++k) {
                if (!result.reports[k]) {
                    failed = true;
                    err << "ratkit: lambda " << lambdas[k] << " failed: " << result.messages[k] << '\n';
                    continue;
                }
                out << "lambda=" << lambdas[k] << " min=" << result.reports[k]->best_value()
                    << " m=" << result.reports[k]->best_m << '\n';
            }
            return failed ? 1 : 0;
        }

        if (*gen) {
            ProblemSpec spec;
            spec.kind = gen_problem;
            spec.n = gen_n;
            spec.grid_n = gen_grid;
            spec.shape = gen_shape;
            if (spec.kind == "mtx")
                throw UsageError("problem", "gen exports generated problems only");
            ScenarioConfig probe;
            probe.problem = spec;
            probe.methods.push_back(parse_method("cg", "methods"));
            validate(probe);
            const TestProblem p = build_problem(spec);
            const std::filesystem::path dir = gen_export;
            std::filesystem::create_directories(dir);
            write_matrix_market(dir / (p.name + "_A.mtx"), p.a);
            write_matrix_market(dir / (p.name + "_b.mtx"), p.b);
            if (p.x_true)
                write_matrix_market(dir / (p.name + "_x.mtx"), *p.x_true);
            out << "exported " << p.name << " (n=" << p.a.rows() << ") to " << dir.string() << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "ratkit: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedProblemError& e) {
        err << "ratkit: " << e.what() << '\n';
        return 2;
    } catch (const ContractViolation& e) {
        err << "ratkit: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "ratkit: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace ratkit::exp
