#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ttg/bench.hpp"
#include "ttg/bounds.hpp"
#include "ttg/exact.hpp"
#include "ttg/heuristic.hpp"
#include "ttg/milp.hpp"
#include "ttg/render.hpp"

namespace {

using ttg::i64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to '" + path + "'");
    out << content;
}

int default_workers() {
    if (const char* env = std::getenv("TT_GROUPER_WORKERS")) {
        const int value = std::atoi(env);
        if (value >= 1) return value;
    }
    return 1;
}

const char* flag_word(bool value) { return value ? "true" : "false"; }

struct LimitFlags {
    double time_limit = 0;
    i64 node_limit = 0;
    i64 target = 0;
    bool has_target = false;

    ttg::SolveLimits to_limits() const {
        ttg::SolveLimits limits;
        limits.time_limit = time_limit;
        limits.node_limit = node_limit;
        if (has_target) limits.target_cmax = target;
        return limits;
    }
};

void add_limit_flags(CLI::App* cmd, LimitFlags& flags) {
    cmd->add_option("--time-limit", flags.time_limit, "wall-clock budget in seconds (0 = unlimited)");
    cmd->add_option("--node-limit", flags.node_limit, "search node budget (0 = unlimited)");
    cmd->add_option("--target", flags.target, "stop once this cmax is reached")
        ->each([&flags](const std::string&) { flags.has_target = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grouping of periodic signals into messages and scheduling on a single resource"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "generate a random instance");
    ttg::GeneratorParams gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen_cmd->add_option("--n", gen_params.task_count, "number of tasks")->capture_default_str();
    gen_cmd->add_option("--r", gen_params.period_count, "number of distinct periods")->capture_default_str();
    gen_cmd->add_option("--base-period", gen_params.base_period, "shortest period T0")->capture_default_str();
    gen_cmd->add_option("--multipliers", gen_params.multiplier_choices, "adjacent period ratio choices")
        ->delimiter(',')
        ->capture_default_str();
    gen_cmd->add_option("--proc-min", gen_params.proc_min, "minimum processing time")->capture_default_str();
    gen_cmd->add_option("--proc-max", gen_params.proc_max, "maximum processing time")->capture_default_str();
    gen_cmd->add_option("--hs", gen_params.header_size, "header size")->capture_default_str();
    gen_cmd->add_option("--smax", gen_params.max_group_size, "maximum group size")->capture_default_str();
    gen_cmd->add_option("--weights", gen_params.period_weights, "period sampling weights (default uniform)")
        ->delimiter(',');
    gen_cmd->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    gen_cmd->add_option("-o,--output", gen_out, "output file (default stdout)");

    // validate
    auto* val_cmd = app.add_subcommand("validate", "check an instance file");
    std::string val_path;
    val_cmd->add_option("instance", val_path, "instance file")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    std::string solve_path, solve_method = "exact", solve_out;
    LimitFlags solve_limits;
    std::uint64_t solve_seed = 0;
    i64 solve_ls_iterations = 1000;
    solve_cmd->add_option("instance", solve_path, "instance file")->required();
    solve_cmd->add_option("--method", solve_method, "solver")
        ->check(CLI::IsMember({"exact", "oracle", "greedy", "local", "ub", "lb"}))
        ->capture_default_str();
    add_limit_flags(solve_cmd, solve_limits);
    solve_cmd->add_option("--seed", solve_seed, "seed for seeded methods")->capture_default_str();
    solve_cmd->add_option("--ls-iterations", solve_ls_iterations, "local search iteration budget")
        ->capture_default_str();
    solve_cmd->add_option("-o,--output", solve_out, "write the solution file here");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a solution file");
    std::string eval_instance, eval_solution;
    bool eval_rows = false;
    eval_cmd->add_option("instance", eval_instance, "instance file")->required();
    eval_cmd->add_option("solution", eval_solution, "solution file")->required();
    eval_cmd->add_flag("--rows", eval_rows, "also print per-row totals");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "compute lower/upper bounds");
    std::string bounds_path;
    LimitFlags bounds_limits;
    bounds_cmd->add_option("instance", bounds_path, "instance file")->required();
    add_limit_flags(bounds_cmd, bounds_limits);

    // export-lp
    auto* lp_cmd = app.add_subcommand("export-lp", "emit the MILP model as LP text");
    std::string lp_path, lp_out, lp_format = "lp";
    bool lp_literal = false;
    lp_cmd->add_option("instance", lp_path, "instance file")->required();
    lp_cmd->add_option("-o,--output", lp_out, "output file (default stdout)");
    lp_cmd->add_option("--format", lp_format, "output format")
        ->check(CLI::IsMember({"lp"}))
        ->capture_default_str();
    lp_cmd->add_flag("--literal-bigm", lp_literal, "use the task-count linking coefficient");

    // render
    auto* render_cmd = app.add_subcommand("render", "render a solution as a stacked chart");
    std::string render_instance, render_solution, render_out, render_format = "svg",
                render_color = "period";
    double render_px = 1.0, render_row_height = 24.0;
    bool render_no_headers = false;
    i64 render_quantum = 0;
    render_cmd->add_option("instance", render_instance, "instance file")->required();
    render_cmd->add_option("solution", render_solution, "solution file")->required();
    render_cmd->add_option("-o,--output", render_out, "output file (default stdout)");
    render_cmd->add_option("--format", render_format, "svg or text")
        ->check(CLI::IsMember({"svg", "text"}))
        ->capture_default_str();
    render_cmd->add_option("--px-per-unit", render_px, "pixels per time unit")->capture_default_str();
    render_cmd->add_option("--row-height", render_row_height, "row height in pixels")
        ->capture_default_str();
    render_cmd->add_option("--color-by", render_color, "period or group")
        ->check(CLI::IsMember({"period", "group"}))
        ->capture_default_str();
    render_cmd->add_flag("--no-headers", render_no_headers, "hide header prefixes");
    render_cmd->add_option("--quantum", render_quantum, "text mode: time units per character");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run solver comparisons or parameter sweeps");
    std::string bench_manifest, bench_out, bench_runs_out, bench_sweep_instance,
                bench_sweep_method = "exact";
    std::vector<std::string> bench_methods = {"greedy", "local", "ub", "lb"};
    std::vector<std::string> bench_imports;
    std::vector<i64> bench_hs_values, bench_smax_values;
    LimitFlags bench_limits;
    int bench_workers = default_workers();
    bool bench_timings = false;
    std::uint64_t bench_seed = 0;
    bench_cmd->add_option("manifest", bench_manifest, "manifest listing instance files and seeds");
    bench_cmd->add_option("--methods", bench_methods, "methods to compare")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("-o,--output", bench_out, "comparison table CSV (default table.csv)");
    bench_cmd->add_option("--runs-csv", bench_runs_out, "also write per-run records CSV");
    bench_cmd->add_option("--import", bench_imports, "merge run records from CSV files")
        ->delimiter(',');
    bench_cmd->add_option("--workers", bench_workers, "worker thread count (env TT_GROUPER_WORKERS)")
        ->capture_default_str();
    bench_cmd->add_flag("--timings", bench_timings, "write measured wall times into runs CSV");
    add_limit_flags(bench_cmd, bench_limits);
    bench_cmd->add_option("--sweep", bench_sweep_instance, "sweep mode: instance file to mutate");
    bench_cmd->add_option("--hs-values", bench_hs_values, "sweep header sizes")->delimiter(',');
    bench_cmd->add_option("--smax-values", bench_smax_values, "sweep maximum group sizes")
        ->delimiter(',');
    bench_cmd->add_option("--method", bench_sweep_method, "sweep mode solver")
        ->check(CLI::IsMember({"exact", "oracle", "greedy", "local", "ub", "lb"}))
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "seed for seeded sweep methods")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) {
            ttg::Instance instance = ttg::generate_instance(gen_params, gen_seed);
            write_output(gen_out, ttg::serialize_instance(instance));
            return 0;
        }

        if (val_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(val_path);
            ttg::ValidationReport report = ttg::validate(instance);
            std::cerr << report.to_string();
            std::cout << (report.ok ? "ok" : "invalid") << "\n";
            return report.ok ? 0 : 1;
        }

        if (solve_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(solve_path);
            ttg::SolveLimits limits = solve_limits.to_limits();
            ttg::Solution solution;
            i64 cmax = 0;
            bool optimal = false;
            bool relaxed = false;

            if (solve_method == "exact" || solve_method == "oracle") {
                ttg::SolveResult result = solve_method == "exact" ? ttg::solve_exact(instance, limits)
                                                                  : ttg::brute_force_oracle(instance);
                solution = std::move(result.solution);
                cmax = result.cmax;
                optimal = result.optimal;
                std::cerr << "nodes " << result.nodes << ", wall " << result.wall_time << "s\n";
            } else if (solve_method == "greedy" || solve_method == "local") {
                solution = ttg::construct_greedy(instance);
                if (solve_method == "local") {
                    ttg::LocalSearchConfig config;
                    config.max_iterations = solve_ls_iterations;
                    config.seed = solve_seed;
                    solution = ttg::local_search(instance, solution, config);
                }
                cmax = ttg::evaluate(instance, solution).cmax;
            } else {
                ttg::ReducedProblem problem = solve_method == "ub" ? ttg::upper_bound_problem(instance)
                                                                   : ttg::lower_bound_problem(instance);
                ttg::ReducedResult result = ttg::solve_reduced(problem, limits);
                solution = std::move(result.solution);
                cmax = result.value;
                optimal = result.optimal;
                if (solve_method == "lb") {
                    relaxed = true;
                    std::cerr << "note: lower-bound solutions relax the group size cap\n";
                }
            }

            if (!relaxed) {
                // cross-check the reported value against a fresh evaluation
                const i64 evaluated = ttg::evaluate(instance, solution).cmax;
                if (evaluated != cmax) {
                    std::cerr << "internal inconsistency: reported " << cmax << ", evaluated "
                              << evaluated << "\n";
                    return 1;
                }
            }
            std::cout << "cmax " << cmax << "\n";
            std::cout << "optimal " << flag_word(optimal) << "\n";
            if (!solve_out.empty()) {
                write_output(solve_out, ttg::serialize_solution(instance, solution, cmax));
            }
            return 0;
        }

        if (eval_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(eval_instance);
            ttg::Solution solution = ttg::parse_solution_file(eval_solution, instance);
            ttg::ValidationReport report = ttg::check_solution(instance, solution);
            if (!report.ok) {
                std::cerr << report.to_string();
                std::cout << "invalid" << "\n";
                return 1;
            }
            ttg::Evaluation eval = ttg::evaluate(instance, solution);
            std::cout << "cmax " << eval.cmax << "\n";
            std::cout << "feasible " << flag_word(eval.feasible) << "\n";
            std::cout << "margin " << eval.margin << "\n";
            if (eval_rows) {
                for (std::size_t k = 0; k < eval.row_totals.size(); k++) {
                    std::cout << "row " << k << " " << eval.row_totals[k] << "\n";
                }
            }
            return 0;
        }

        if (bounds_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(bounds_path);
            ttg::BoundsReport report = ttg::compute_bounds(instance, bounds_limits.to_limits());
            std::cout << "analytic_lower " << report.analytic_lower << "\n";
            std::cout << "lower " << report.lower << " "
                      << (report.lower_optimal ? "optimal" : "best-found") << "\n";
            std::cout << "upper " << report.upper << " "
                      << (report.upper_optimal ? "optimal" : "best-found") << "\n";
            return 0;
        }

        if (lp_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(lp_path);
            ttg::LpOptions options;
            options.literal_bigm = lp_literal;
            ttg::ModelStats stats = ttg::model_statistics(instance, options);
            if (stats.smax_exceeds_t0) {
                std::cerr << "warning: smax exceeds the shortest period; c <= T0 y assumes group "
                             "sizes <= T0\n";
            }
            write_output(lp_out, ttg::export_lp(instance, options));
            return 0;
        }

        if (render_cmd->parsed()) {
            ttg::Instance instance = ttg::parse_instance_file(render_instance);
            ttg::Solution solution = ttg::parse_solution_file(render_solution, instance);
            ttg::RenderSpec spec;
            spec.kind = render_format == "text" ? ttg::RenderSpec::Kind::Text : ttg::RenderSpec::Kind::Svg;
            spec.px_per_unit = render_px;
            spec.row_height = render_row_height;
            spec.color_by = render_color == "group" ? ttg::RenderSpec::ColorBy::Group
                                                    : ttg::RenderSpec::ColorBy::Period;
            spec.show_headers = !render_no_headers;
            spec.text_quantum = render_quantum;
            ttg::ScheduleTimeline timeline = ttg::expand_start_times(instance, solution);
            write_output(render_out, ttg::render_gantt(timeline, instance, spec));
            return 0;
        }

        if (bench_cmd->parsed()) {
            const bool table_mode = !bench_manifest.empty();
            const bool sweep_mode = !bench_sweep_instance.empty();
            if (table_mode == sweep_mode) {
                throw UsageError("bench needs either a manifest or --sweep <instance>");
            }

            if (sweep_mode) {
                if (bench_hs_values.empty() || bench_smax_values.empty()) {
                    throw UsageError("sweep mode needs --hs-values and --smax-values");
                }
                ttg::Instance instance = ttg::parse_instance_file(bench_sweep_instance);
                auto cells = ttg::sweep(instance, bench_hs_values, bench_smax_values,
                                        bench_sweep_method, bench_limits.to_limits(), bench_seed);
                write_output(bench_out.empty() ? "sweep.csv" : bench_out, ttg::sweep_to_csv(cells));
                return 0;
            }

            for (const std::string& method : bench_methods) {
                if (!ttg::is_known_method(method)) throw UsageError("unknown method '" + method + "'");
            }
            auto jobs = ttg::parse_manifest_file(bench_manifest);
            auto records = ttg::run_suite(jobs, bench_methods, bench_limits.to_limits(), bench_workers);
            for (const std::string& path : bench_imports) {
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot open import file '" + path + "'");
                auto imported = ttg::records_from_csv(in);
                records.insert(records.end(), imported.begin(), imported.end());
            }
            ttg::ComparisonTable table = ttg::summarize(records);
            for (const std::string& note : table.notes) std::cerr << "note: " << note << "\n";
            write_output(bench_out.empty() ? "table.csv" : bench_out, ttg::table_to_csv(table));
            if (!bench_runs_out.empty()) {
                write_output(bench_runs_out, ttg::records_to_csv(records, bench_timings));
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ttg::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
