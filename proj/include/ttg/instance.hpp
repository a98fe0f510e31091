#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttg {

using i64 = std::int64_t;

// One periodic signal: payload of `proc` time units released every `period`.
struct TaskSpec {
    std::string id;
    i64 period = 0;
    i64 proc = 0;

    bool operator==(const TaskSpec&) const = default;
};

// A grouping/scheduling instance. Periods are stored sorted ascending and
// must be harmonic (each one an integer multiple of its predecessor).
// header_size is paid once per nonempty group; max_group_size caps
// header + payload of a group.
struct Instance {
    std::vector<TaskSpec> tasks;
    std::vector<i64> periods;
    i64 header_size = 0;
    i64 max_group_size = 0;

    bool operator==(const Instance&) const = default;

    // Index of `period` in the sorted period list, -1 if absent.
    int period_index(i64 period) const;

    // Index of the task with this id, or nullopt.
    std::optional<int> task_index(std::string_view id) const;

    // Task indices partitioned by period class, indexed like `periods`.
    std::vector<std::vector<int>> tasks_by_period() const;
};

// Derived view of the period set: multipliers between adjacent periods,
// admissible first-occurrence interval counts |B_u| = T_u / T_0, and the
// stacked-schedule dimensions (row_count rows of length T_0 covering one
// hyperperiod T_{r-1}).
struct PeriodStructure {
    std::vector<i64> multipliers;      // size r-1
    std::vector<i64> interval_counts;  // size r, interval_counts[0] == 1
    i64 row_count = 0;
    i64 hyperperiod = 0;
};

enum class Code {
    NonHarmonic,
    TaskTooLarge,
    BadPeriodRef,
    DuplicateId,
    EmptyPeriodClass,
    NotPartition,
    IntervalOutOfRange,
    GroupTooLarge,
    MixedPeriodGroup,
    UnassignedNonemptyGroup,
};

// Stable textual name, e.g. "NON_HARMONIC".
const char* code_name(Code code);

struct Violation {
    Code code;
    std::string message;
    bool warning = false;
};

struct ValidationReport {
    bool ok = true;  // true iff no error-severity violation
    std::vector<Violation> violations;

    bool has(Code code) const;
    std::string to_string() const;
};

// Structural errors in instance/solution text files. `code` is one of
// MISSING_FIELD, DUPLICATE_FIELD, BAD_VALUE, UNKNOWN_KEYWORD, SYNTAX;
// `line` is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string code, int line, const std::string& message);

    const std::string& code() const { return code_; }
    int line() const { return line_; }

private:
    std::string code_;
    int line_;
};

struct GeneratorParams {
    int task_count = 50;
    int period_count = 3;
    i64 base_period = 1000;
    std::vector<i64> multiplier_choices = {2, 3, 4};
    i64 proc_min = 1;
    i64 proc_max = 100;
    i64 header_size = 10;
    i64 max_group_size = 300;
    std::vector<double> period_weights;  // empty = uniform over periods
};

ValidationReport validate(const Instance& instance);

// Requires a harmonic, ascending period list; throws std::invalid_argument
// otherwise. An empty period list yields an all-empty structure.
PeriodStructure derive_period_structure(const Instance& instance);

// Reads the line-oriented instance format ('#' starts a comment):
//   hs <int>
//   smax <int>
//   periods <int> <int> ...
//   task <id> <period> <proc>
// All three header keywords are required exactly once. Does not run
// validate(); structural checks only. Throws ParseError.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
Instance parse_instance_file(const std::string& path);

std::string serialize_instance(const Instance& instance);

// Deterministic for a fixed seed, independent of platform and standard
// library. The result always satisfies validate().ok: processing times are
// drawn from the admissible part of [proc_min, proc_max].
// Throws std::invalid_argument on unsatisfiable parameters.
Instance generate_instance(const GeneratorParams& params, std::uint64_t seed);

}  // namespace ttg
