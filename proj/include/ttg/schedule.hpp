#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttg/instance.hpp"

namespace ttg {

// A message: same-period tasks sent together. `members` holds indices into
// Instance::tasks, kept sorted ascending. group_id is unique within a period.
struct GroupRecord {
    int period_index = 0;
    int group_id = 0;
    std::vector<int> members;

    bool empty() const { return members.empty(); }
    bool operator==(const GroupRecord&) const = default;
};

inline constexpr i64 kUnassigned = -1;

// Grouping plus first-occurrence interval per group. `assignment` is
// parallel to `groups`; empty groups carry kUnassigned. Within each period,
// the groups' members must partition the period's task set.
struct Solution {
    std::vector<GroupRecord> groups;
    std::vector<i64> assignment;

    void add_group(int period_index, int group_id, std::vector<int> members, i64 interval);
    bool operator==(const Solution&) const = default;
};

// Per-interval loads and the stacked-row view of a solution. feasible means
// cmax <= T_0; capacity is reported, never enforced.
struct Evaluation {
    std::vector<std::vector<i64>> period_loads;  // [u][k], k in B_u
    std::vector<i64> row_totals;                 // size row_count
    i64 cmax = 0;
    bool feasible = true;
    i64 margin = 0;
};

// One periodic occurrence of a group. Rows can overflow their window when
// the solution is infeasible, so `row` is stored rather than derived from
// the start time.
struct Occurrence {
    int period_index = 0;
    int group_id = 0;
    i64 occurrence = 0;  // m-th repetition, start = first_start + m * T_u
    i64 row = 0;
    i64 start = 0;
    i64 end = 0;
};

struct ScheduleTimeline {
    i64 row_count = 0;
    std::vector<Occurrence> occurrences;  // ordered by (row, start)
};

// Size of a group: 0 when empty, header + payload sum otherwise. No
// capacity check here. The id overload throws std::invalid_argument on an
// unknown task id; the index overload throws std::out_of_range.
i64 group_size(const Instance& instance, std::span<const int> members);
i64 group_size(const Instance& instance, const std::vector<std::string>& member_ids);

// Checks membership partition, single-period groups, capacity, interval
// ranges, and assignment presence. Instance-level validation errors are
// included, so a broken instance also yields ok = false.
ValidationReport check_solution(const Instance& instance, const Solution& solution);

// Throws std::invalid_argument when check_solution fails.
Evaluation evaluate(const Instance& instance, const Solution& solution);

// Lays every row out back-to-back in canonical order: period index
// ascending, then group id. Throws when check_solution fails.
ScheduleTimeline expand_start_times(const Instance& instance, const Solution& solution);

// Cross-checks expand_start_times against evaluate: strict periodicity,
// no overlaps, and per-row extent equal to the row total.
bool timeline_consistency(const Instance& instance, const Solution& solution);

// Text form: optional `cmax <int>` line, then one line per nonempty group:
//   group <period_index> <group_id> interval <k> tasks <id> <id> ...
std::string serialize_solution(const Instance& instance, const Solution& solution,
                               std::optional<i64> cmax = std::nullopt);
Solution parse_solution(std::istream& in, const Instance& instance);
Solution parse_solution(const std::string& text, const Instance& instance);
Solution parse_solution_file(const std::string& path, const Instance& instance);

}  // namespace ttg
