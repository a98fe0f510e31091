#pragma once

#include <map>

#include "ttg/bounds.hpp"
#include "ttg/exact.hpp"

namespace ttg {

// Method ids understood by run_method: exact, oracle, greedy, local, ub, lb.
bool is_known_method(const std::string& method);

// Outcome of one (instance, method) run. A missing cmax marks a failure
// (exception, guard, or invalid instance). Solutions behind successful
// records have passed check_solution, except for lb whose merged groups are
// deliberately capacity-relaxed.
struct RunRecord {
    std::string instance_id;
    std::string method;
    std::optional<i64> cmax;
    bool optimal = false;
    double wall_time = 0;
    std::uint64_t seed = 0;
};

struct MethodSummary {
    std::string method;
    int successes = 0;
    double mean_bg = 0;
    double median_bg = 0;
    double mean_rank = 0;
};

struct ComparisonTable {
    std::vector<MethodSummary> rows;
    std::vector<std::string> notes;  // skipped instances etc.
};

struct SweepCell {
    i64 hs = 0;
    i64 smax = 0;
    std::string status;  // ok | invalid | failed
    std::optional<i64> cmax;
    bool optimal = false;
    std::optional<i64> upper;
    std::optional<i64> lower;
};

struct SuiteJob {
    std::string path;
    std::uint64_t seed = 0;
};

// Percent excess over the best cmax among this instance's successful
// records. Failures are excluded. Throws std::invalid_argument when no
// record succeeded.
std::map<std::string, double> best_gap(const std::vector<RunRecord>& instance_records);

// Competition ranking on cmax ascending; ties share the averaged rank and
// failures tie at the bottom, so ranks always sum to k(k+1)/2.
std::map<std::string, double> rank_methods(const std::vector<RunRecord>& instance_records);

RunRecord run_method(const Instance& instance, const std::string& instance_id,
                     const std::string& method, const SolveLimits& limits, std::uint64_t seed);

// Full instance x method matrix over a work queue with `workers` threads.
// Record order is (manifest order, method order) regardless of scheduling.
std::vector<RunRecord> run_suite(const std::vector<SuiteJob>& jobs,
                                 const std::vector<std::string>& methods, const SolveLimits& limits,
                                 int workers);

ComparisonTable summarize(const std::vector<RunRecord>& records);

// hs x smax grid of one method's cmax next to the two bound models.
std::vector<SweepCell> sweep(const Instance& instance, const std::vector<i64>& hs_values,
                             const std::vector<i64>& smax_values, const std::string& method,
                             const SolveLimits& limits, std::uint64_t seed = 0);

// Manifest: one `<path> [seed]` per line, '#' comments. Relative paths are
// resolved against the manifest's directory.
std::vector<SuiteJob> parse_manifest_file(const std::string& path);

// CSV codecs; stable column order, percents with two decimals. Wall times
// are written as zero unless with_timings is set, keeping seeded bench
// outputs byte-identical.
std::string records_to_csv(const std::vector<RunRecord>& records, bool with_timings = false);
std::vector<RunRecord> records_from_csv(std::istream& in);
std::string table_to_csv(const ComparisonTable& table);
std::string sweep_to_csv(const std::vector<SweepCell>& cells);

}  // namespace ttg
