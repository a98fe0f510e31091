#include "ttg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ttg/heuristic.hpp"

namespace ttg {

namespace {

std::string format2(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::string format6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) return 0;
    double sum = 0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

bool is_known_method(const std::string& method) {
    return method == "exact" || method == "oracle" || method == "greedy" || method == "local" ||
           method == "ub" || method == "lb";
}

std::map<std::string, double> best_gap(const std::vector<RunRecord>& instance_records) {
    std::optional<i64> best;
    for (const RunRecord& record : instance_records) {
        if (record.cmax && (!best || *record.cmax < *best)) best = *record.cmax;
    }
    if (!best) throw std::invalid_argument("best_gap: no successful record for this instance");

    std::map<std::string, double> gaps;
    for (const RunRecord& record : instance_records) {
        if (!record.cmax) continue;
        if (*record.cmax == *best) {
            gaps[record.method] = 0.0;
        } else {
            // best == 0 cannot coincide with cmax > 0 on real data; guard anyway.
            gaps[record.method] =
                100.0 * static_cast<double>(*record.cmax - *best) / static_cast<double>(std::max<i64>(*best, 1));
        }
    }
    return gaps;
}

std::map<std::string, double> rank_methods(const std::vector<RunRecord>& instance_records) {
    std::vector<const RunRecord*> succeeded;
    std::vector<const RunRecord*> failed;
    for (const RunRecord& record : instance_records) {
        (record.cmax ? succeeded : failed).push_back(&record);
    }
    std::stable_sort(succeeded.begin(), succeeded.end(),
                     [](const RunRecord* a, const RunRecord* b) { return *a->cmax < *b->cmax; });

    std::map<std::string, double> ranks;
    std::size_t position = 0;
    while (position < succeeded.size()) {
        std::size_t tie_end = position;
        while (tie_end < succeeded.size() && *succeeded[tie_end]->cmax == *succeeded[position]->cmax) {
            tie_end++;
        }
        const double shared = (static_cast<double>(position + 1) + static_cast<double>(tie_end)) / 2.0;
        for (std::size_t i = position; i < tie_end; i++) ranks[succeeded[i]->method] = shared;
        position = tie_end;
    }
    if (!failed.empty()) {
        const std::size_t first = succeeded.size() + 1;
        const std::size_t last = succeeded.size() + failed.size();
        const double shared = (static_cast<double>(first) + static_cast<double>(last)) / 2.0;
        for (const RunRecord* record : failed) ranks[record->method] = shared;
    }
    return ranks;
}

RunRecord run_method(const Instance& instance, const std::string& instance_id,
                     const std::string& method, const SolveLimits& limits, std::uint64_t seed) {
    if (!is_known_method(method)) {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    RunRecord record;
    record.instance_id = instance_id;
    record.method = method;
    record.seed = seed;
    const auto start = std::chrono::steady_clock::now();

    try {
        if (method == "exact") {
            SolveResult result = solve_exact(instance, limits);
            record.cmax = evaluate(instance, result.solution).cmax;
            record.optimal = result.optimal;
        } else if (method == "oracle") {
            SolveResult result = brute_force_oracle(instance);
            record.cmax = evaluate(instance, result.solution).cmax;
            record.optimal = result.optimal;
        } else if (method == "greedy") {
            record.cmax = evaluate(instance, construct_greedy(instance)).cmax;
        } else if (method == "local") {
            LocalSearchConfig config;
            config.seed = seed;
            Solution solution = local_search(instance, construct_greedy(instance), config);
            record.cmax = evaluate(instance, solution).cmax;
        } else if (method == "ub") {
            ReducedResult result = solve_reduced(upper_bound_problem(instance), limits);
            record.cmax = evaluate(instance, result.solution).cmax;  // genuine solution
            record.optimal = result.optimal;
        } else if (method == "lb") {
            // Bound value of the capacity-relaxed merged model, not a
            // feasible solution's cmax; skip the strict check.
            ReducedResult result = solve_reduced(lower_bound_problem(instance), limits);
            record.cmax = result.value;
            record.optimal = result.optimal;
        }
    } catch (const std::exception&) {
        record.cmax.reset();  // guard trips and invalid inputs become failures
    }

    record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::vector<RunRecord> run_suite(const std::vector<SuiteJob>& jobs,
                                 const std::vector<std::string>& methods, const SolveLimits& limits,
                                 int workers) {
    struct Cell {
        std::size_t job;
        std::size_t method;
    };
    std::vector<Cell> cells;
    for (std::size_t j = 0; j < jobs.size(); j++) {
        for (std::size_t m = 0; m < methods.size(); m++) cells.push_back({j, m});
    }

    // Parse once up front; a broken instance fails all its methods.
    std::vector<std::optional<Instance>> instances(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); j++) {
        try {
            instances[j] = parse_instance_file(jobs[j].path);
        } catch (const ParseError&) {
            instances[j] = std::nullopt;
        }
    }

    std::vector<RunRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const auto [j, m] = cells[i];
            if (instances[j]) {
                records[i] = run_method(*instances[j], jobs[j].path, methods[m], limits, jobs[j].seed);
            } else {
                records[i] = {jobs[j].path, methods[m], std::nullopt, false, 0, jobs[j].seed};
            }
        }
    };

    if (workers <= 1 || cells.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(workers, static_cast<int>(cells.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w < count; w++) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return records;
}

ComparisonTable summarize(const std::vector<RunRecord>& records) {
    // Group by instance, preserving first-appearance order for both
    // instances and methods.
    std::vector<std::string> instance_order;
    std::map<std::string, std::vector<RunRecord>> by_instance;
    std::vector<std::string> method_order;
    for (const RunRecord& record : records) {
        if (!by_instance.count(record.instance_id)) instance_order.push_back(record.instance_id);
        by_instance[record.instance_id].push_back(record);
        if (std::find(method_order.begin(), method_order.end(), record.method) == method_order.end()) {
            method_order.push_back(record.method);
        }
    }

    std::map<std::string, std::vector<double>> bgs, ranks;
    std::map<std::string, int> successes;
    ComparisonTable table;
    for (const std::string& id : instance_order) {
        const auto& group = by_instance[id];
        bool any_success = std::any_of(group.begin(), group.end(),
                                       [](const RunRecord& r) { return r.cmax.has_value(); });
        for (const RunRecord& record : group) {
            if (record.cmax) successes[record.method]++;
        }
        if (!any_success) {
            table.notes.push_back("instance '" + id + "' skipped: no method succeeded");
            continue;
        }
        for (const auto& [method, gap] : best_gap(group)) bgs[method].push_back(gap);
        for (const auto& [method, rank] : rank_methods(group)) ranks[method].push_back(rank);
    }

    for (const std::string& method : method_order) {
        MethodSummary row;
        row.method = method;
        row.successes = successes[method];
        row.mean_bg = mean(bgs[method]);
        row.median_bg = median(bgs[method]);
        row.mean_rank = mean(ranks[method]);
        table.rows.push_back(row);
    }
    return table;
}

std::vector<SweepCell> sweep(const Instance& instance, const std::vector<i64>& hs_values,
                             const std::vector<i64>& smax_values, const std::string& method,
                             const SolveLimits& limits, std::uint64_t seed) {
    std::vector<SweepCell> cells;
    for (i64 hs : hs_values) {
        for (i64 smax : smax_values) {
            SweepCell cell;
            cell.hs = hs;
            cell.smax = smax;
            Instance variant = instance;
            variant.header_size = hs;
            variant.max_group_size = smax;
            if (!validate(variant).ok) {
                cell.status = "invalid";
                cells.push_back(cell);
                continue;
            }
            RunRecord record = run_method(variant, "sweep", method, limits, seed);
            if (record.cmax) {
                cell.cmax = record.cmax;
                cell.optimal = record.optimal;
                cell.status = "ok";
                cell.upper = solve_reduced(upper_bound_problem(variant), limits).value;
                cell.lower = solve_reduced(lower_bound_problem(variant), limits).value;
            } else {
                cell.status = "failed";
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

std::vector<SuiteJob> parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("SYNTAX", 0, "cannot open manifest '" + path + "'");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::vector<SuiteJob> jobs;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::istringstream fields{std::string(line)};
        std::string file;
        if (!(fields >> file)) continue;
        SuiteJob job;
        std::filesystem::path p(file);
        job.path = p.is_absolute() ? p.string() : (base / p).string();
        std::string seed_token;
        if (fields >> seed_token) {
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(seed_token.data(), seed_token.data() + seed_token.size(), seed);
            if (ec != std::errc{} || ptr != seed_token.data() + seed_token.size()) {
                throw ParseError("BAD_VALUE", line_no, "manifest seed is not an integer");
            }
            job.seed = seed;
        }
        std::string extra;
        if (fields >> extra) throw ParseError("SYNTAX", line_no, "expected: <path> [seed]");
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::string records_to_csv(const std::vector<RunRecord>& records, bool with_timings) {
    std::string out = "instance,method,cmax,optimal,wall_time,seed\n";
    for (const RunRecord& record : records) {
        out += record.instance_id + "," + record.method + ",";
        if (record.cmax) out += std::to_string(*record.cmax);
        out += ",";
        out += record.optimal ? "1" : "0";
        out += "," + format6(with_timings ? record.wall_time : 0.0);
        out += "," + std::to_string(record.seed) + "\n";
    }
    return out;
}

std::vector<RunRecord> records_from_csv(std::istream& in) {
    std::vector<RunRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("instance,", 0) == 0) continue;  // header
        auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw ParseError("SYNTAX", line_no, "expected 6 CSV fields in run record");
        }
        RunRecord record;
        record.instance_id = fields[0];
        record.method = fields[1];
        if (!fields[2].empty()) {
            i64 cmax = 0;
            auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), cmax);
            if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size()) {
                throw ParseError("BAD_VALUE", line_no, "cmax is not an integer");
            }
            record.cmax = cmax;
        }
        record.optimal = fields[3] == "1" || fields[3] == "true";
        record.wall_time = std::strtod(fields[4].c_str(), nullptr);
        record.seed = std::strtoull(fields[5].c_str(), nullptr, 10);
        records.push_back(std::move(record));
    }
    return records;
}

std::string table_to_csv(const ComparisonTable& table) {
    std::string out = "method,successes,mean_bg,median_bg,mean_rank\n";
    for (const MethodSummary& row : table.rows) {
        out += row.method + "," + std::to_string(row.successes) + "," + format2(row.mean_bg) + "," +
               format2(row.median_bg) + "," + format2(row.mean_rank) + "\n";
    }
    return out;
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
    std::string out = "hs,smax,cmax,optimal,upper,lower,status\n";
    for (const SweepCell& cell : cells) {
        out += std::to_string(cell.hs) + "," + std::to_string(cell.smax) + ",";
        if (cell.cmax) out += std::to_string(*cell.cmax);
        out += ",";
        out += cell.optimal ? "1" : "0";
        out += ",";
        if (cell.upper) out += std::to_string(*cell.upper);
        out += ",";
        if (cell.lower) out += std::to_string(*cell.lower);
        out += "," + cell.status + "\n";
    }
    return out;
}

}  // namespace ttg
