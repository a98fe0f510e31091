#include "ttg/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ttg {

namespace {

void require_checked(const Instance& instance, const Solution& solution, const char* op) {
    ValidationReport report = check_solution(instance, solution);
    if (!report.ok) {
        throw std::invalid_argument(std::string(op) + ": solution fails check_solution:\n" +
                                    report.to_string());
    }
}

// Nonempty groups of each period bucketed by assigned interval and sorted
// by group id; [u][k] lists indices into solution.groups.
std::vector<std::vector<std::vector<int>>> bucket_by_interval(const Instance& instance,
                                                              const Solution& solution,
                                                              const PeriodStructure& ps) {
    std::vector<std::vector<std::vector<int>>> buckets(instance.periods.size());
    for (std::size_t u = 0; u < instance.periods.size(); u++) {
        buckets[u].resize(static_cast<std::size_t>(ps.interval_counts[u]));
    }
    for (std::size_t g = 0; g < solution.groups.size(); g++) {
        const GroupRecord& group = solution.groups[g];
        if (group.empty()) continue;
        buckets[group.period_index][solution.assignment[g]].push_back(static_cast<int>(g));
    }
    for (auto& period_buckets : buckets) {
        for (auto& bucket : period_buckets) {
            std::sort(bucket.begin(), bucket.end(), [&solution](int a, int b) {
                return solution.groups[a].group_id < solution.groups[b].group_id;
            });
        }
    }
    return buckets;
}

}  // namespace

void Solution::add_group(int period_index, int group_id, std::vector<int> members, i64 interval) {
    std::sort(members.begin(), members.end());
    groups.push_back({period_index, group_id, std::move(members)});
    assignment.push_back(groups.back().empty() ? kUnassigned : interval);
}

i64 group_size(const Instance& instance, std::span<const int> members) {
    if (members.empty()) return 0;
    i64 total = instance.header_size;
    for (int t : members) {
        total += instance.tasks.at(static_cast<std::size_t>(t)).proc;
    }
    return total;
}

i64 group_size(const Instance& instance, const std::vector<std::string>& member_ids) {
    std::vector<int> members;
    members.reserve(member_ids.size());
    for (const std::string& id : member_ids) {
        auto idx = instance.task_index(id);
        if (!idx) throw std::invalid_argument("unknown task id '" + id + "'");
        members.push_back(*idx);
    }
    return group_size(instance, members);
}

ValidationReport check_solution(const Instance& instance, const Solution& solution) {
    ValidationReport report = validate(instance);
    auto error = [&report](Code code, std::string message) {
        report.violations.push_back({code, std::move(message), false});
        report.ok = false;
    };
    if (solution.assignment.size() != solution.groups.size()) {
        error(Code::UnassignedNonemptyGroup, "assignment list does not match group list");
        return report;
    }
    if (!report.ok) return report;

    const PeriodStructure ps = derive_period_structure(instance);
    const int r = static_cast<int>(instance.periods.size());
    const int n = static_cast<int>(instance.tasks.size());

    std::set<std::pair<int, int>> group_keys;
    std::vector<int> times_grouped(n, 0);

    for (std::size_t g = 0; g < solution.groups.size(); g++) {
        const GroupRecord& group = solution.groups[g];
        std::string label = "group (" + std::to_string(group.period_index) + "," +
                            std::to_string(group.group_id) + ")";
        if (group.period_index < 0 || group.period_index >= r) {
            error(Code::BadPeriodRef, label + " has period index out of range");
            continue;
        }
        if (!group_keys.insert({group.period_index, group.group_id}).second) {
            error(Code::DuplicateId, label + " id is not unique within its period");
        }

        bool members_ok = true;
        for (int t : group.members) {
            if (t < 0 || t >= n) {
                error(Code::NotPartition, label + " refers to unknown task index " + std::to_string(t));
                members_ok = false;
                continue;
            }
            times_grouped[t]++;
            if (instance.tasks[t].period != instance.periods[group.period_index]) {
                error(Code::MixedPeriodGroup,
                      label + " contains task '" + instance.tasks[t].id + "' of period " +
                          std::to_string(instance.tasks[t].period));
            }
        }

        if (group.empty()) continue;  // empty groups are inert, assignment ignored

        i64 k = solution.assignment[g];
        if (k == kUnassigned) {
            error(Code::UnassignedNonemptyGroup, label + " is nonempty but has no interval");
        } else if (k < 0 || k >= ps.interval_counts[group.period_index]) {
            error(Code::IntervalOutOfRange,
                  label + " interval " + std::to_string(k) + " not in [0, " +
                      std::to_string(ps.interval_counts[group.period_index]) + ")");
        }
        if (members_ok) {
            i64 size = group_size(instance, group.members);
            if (size > instance.max_group_size) {
                error(Code::GroupTooLarge,
                      label + " size " + std::to_string(size) + " exceeds smax " +
                          std::to_string(instance.max_group_size));
            }
        }
    }

    for (int t = 0; t < n; t++) {
        if (times_grouped[t] == 0) {
            error(Code::NotPartition, "task '" + instance.tasks[t].id + "' is in no group");
        } else if (times_grouped[t] > 1) {
            error(Code::NotPartition, "task '" + instance.tasks[t].id + "' is in " +
                                          std::to_string(times_grouped[t]) + " groups");
        }
    }
    return report;
}

Evaluation evaluate(const Instance& instance, const Solution& solution) {
    require_checked(instance, solution, "evaluate");
    const PeriodStructure ps = derive_period_structure(instance);
    const std::size_t r = instance.periods.size();

    Evaluation eval;
    eval.period_loads.resize(r);
    for (std::size_t u = 0; u < r; u++) {
        eval.period_loads[u].assign(static_cast<std::size_t>(ps.interval_counts[u]), 0);
    }
    for (std::size_t g = 0; g < solution.groups.size(); g++) {
        const GroupRecord& group = solution.groups[g];
        if (group.empty()) continue;
        eval.period_loads[group.period_index][solution.assignment[g]] +=
            group_size(instance, group.members);
    }

    eval.row_totals.assign(static_cast<std::size_t>(ps.row_count), 0);
    for (i64 k = 0; k < ps.row_count; k++) {
        i64 total = 0;
        for (std::size_t u = 0; u < r; u++) {
            total += eval.period_loads[u][static_cast<std::size_t>(k % ps.interval_counts[u])];
        }
        eval.row_totals[static_cast<std::size_t>(k)] = total;
    }

    eval.cmax = 0;
    for (i64 total : eval.row_totals) eval.cmax = std::max(eval.cmax, total);
    if (r == 0) {
        eval.feasible = true;
        eval.margin = 0;
    } else {
        eval.feasible = eval.cmax <= instance.periods.front();
        eval.margin = instance.periods.front() - eval.cmax;
    }
    return eval;
}

ScheduleTimeline expand_start_times(const Instance& instance, const Solution& solution) {
    require_checked(instance, solution, "expand_start_times");
    const PeriodStructure ps = derive_period_structure(instance);
    const auto buckets = bucket_by_interval(instance, solution, ps);
    const i64 base = instance.periods.empty() ? 0 : instance.periods.front();

    ScheduleTimeline timeline;
    timeline.row_count = ps.row_count;
    for (i64 row = 0; row < ps.row_count; row++) {
        i64 cursor = row * base;
        for (std::size_t u = 0; u < instance.periods.size(); u++) {
            const i64 k = row % ps.interval_counts[u];
            for (int g : buckets[u][static_cast<std::size_t>(k)]) {
                const GroupRecord& group = solution.groups[g];
                const i64 size = group_size(instance, group.members);
                timeline.occurrences.push_back({group.period_index, group.group_id,
                                                row / ps.interval_counts[u], row, cursor,
                                                cursor + size});
                cursor += size;
            }
        }
    }
    return timeline;
}

bool timeline_consistency(const Instance& instance, const Solution& solution) {
    require_checked(instance, solution, "timeline_consistency");
    const ScheduleTimeline timeline = expand_start_times(instance, solution);
    const Evaluation eval = evaluate(instance, solution);
    const PeriodStructure ps = derive_period_structure(instance);
    const i64 base = instance.periods.empty() ? 0 : instance.periods.front();

    std::vector<std::vector<const Occurrence*>> per_row(static_cast<std::size_t>(ps.row_count));
    std::map<std::pair<int, int>, std::vector<const Occurrence*>> per_group;
    for (const Occurrence& occ : timeline.occurrences) {
        if (occ.row < 0 || occ.row >= ps.row_count) return false;
        if (occ.start < occ.row * base || occ.end < occ.start) return false;
        per_row[static_cast<std::size_t>(occ.row)].push_back(&occ);
        per_group[{occ.period_index, occ.group_id}].push_back(&occ);
    }

    // Rows: contiguous occupancy whose extent equals the evaluated total.
    for (i64 row = 0; row < ps.row_count; row++) {
        auto occs = per_row[static_cast<std::size_t>(row)];
        std::sort(occs.begin(), occs.end(),
                  [](const Occurrence* a, const Occurrence* b) { return a->start < b->start; });
        i64 cursor = row * base;
        for (const Occurrence* occ : occs) {
            if (occ->start < cursor) return false;  // overlap
            cursor = occ->end;
        }
        if (cursor - row * base != eval.row_totals[static_cast<std::size_t>(row)]) return false;
    }

    // Groups: right occurrence count and strict periodicity.
    for (const auto& [key, occs] : per_group) {
        const i64 period = instance.periods[static_cast<std::size_t>(key.first)];
        const i64 expected = ps.row_count / ps.interval_counts[static_cast<std::size_t>(key.first)];
        if (static_cast<i64>(occs.size()) != expected) return false;
        auto sorted = occs;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Occurrence* a, const Occurrence* b) { return a->occurrence < b->occurrence; });
        for (std::size_t m = 0; m < sorted.size(); m++) {
            if (sorted[m]->occurrence != static_cast<i64>(m)) return false;
            if (sorted[m]->start != sorted[0]->start + static_cast<i64>(m) * period) return false;
        }
    }
    return true;
}

std::string serialize_solution(const Instance& instance, const Solution& solution,
                               std::optional<i64> cmax) {
    std::vector<std::size_t> order;
    for (std::size_t g = 0; g < solution.groups.size(); g++) {
        if (!solution.groups[g].empty()) order.push_back(g);
    }
    std::sort(order.begin(), order.end(), [&solution](std::size_t a, std::size_t b) {
        const GroupRecord& ga = solution.groups[a];
        const GroupRecord& gb = solution.groups[b];
        return std::tie(ga.period_index, ga.group_id) < std::tie(gb.period_index, gb.group_id);
    });

    std::string out;
    if (cmax) out += "cmax " + std::to_string(*cmax) + "\n";
    for (std::size_t g : order) {
        const GroupRecord& group = solution.groups[g];
        out += "group " + std::to_string(group.period_index) + " " + std::to_string(group.group_id) +
               " interval " + std::to_string(solution.assignment[g]) + " tasks";
        for (int t : group.members) out += " " + instance.tasks.at(static_cast<std::size_t>(t)).id;
        out += "\n";
    }
    return out;
}

Solution parse_solution(std::istream& in, const Instance& instance) {
    Solution solution;
    std::string raw;
    int line_no = 0;
    bool have_cmax = false;

    auto parse_int = [](std::string_view token, int line, const char* what) {
        i64 value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw ParseError("BAD_VALUE", line,
                             std::string(what) + " is not an integer: '" + std::string(token) + "'");
        }
        return value;
    };

    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::istringstream fields{std::string(line)};
        std::vector<std::string> tokens;
        for (std::string token; fields >> token;) tokens.push_back(token);
        if (tokens.empty()) continue;

        if (tokens[0] == "cmax") {
            if (have_cmax) throw ParseError("DUPLICATE_FIELD", line_no, "cmax given twice");
            if (tokens.size() != 2) throw ParseError("SYNTAX", line_no, "expected: cmax <int>");
            parse_int(tokens[1], line_no, "cmax");  // advisory, value unused
            have_cmax = true;
        } else if (tokens[0] == "group") {
            if (tokens.size() < 6 || tokens[3] != "interval" || tokens[5] != "tasks") {
                throw ParseError("SYNTAX", line_no,
                                 "expected: group <period_index> <group_id> interval <k> tasks <id> ...");
            }
            GroupRecord group;
            group.period_index = static_cast<int>(parse_int(tokens[1], line_no, "period_index"));
            group.group_id = static_cast<int>(parse_int(tokens[2], line_no, "group_id"));
            i64 interval = parse_int(tokens[4], line_no, "interval");
            for (std::size_t f = 6; f < tokens.size(); f++) {
                auto idx = instance.task_index(tokens[f]);
                if (!idx) throw ParseError("BAD_VALUE", line_no, "unknown task id '" + tokens[f] + "'");
                group.members.push_back(*idx);
            }
            std::sort(group.members.begin(), group.members.end());
            solution.groups.push_back(std::move(group));
            solution.assignment.push_back(solution.groups.back().empty() ? kUnassigned : interval);
        } else {
            throw ParseError("UNKNOWN_KEYWORD", line_no, "unknown keyword '" + tokens[0] + "'");
        }
    }
    return solution;
}

Solution parse_solution(const std::string& text, const Instance& instance) {
    std::istringstream in(text);
    return parse_solution(in, instance);
}

Solution parse_solution_file(const std::string& path, const Instance& instance) {
    std::ifstream in(path);
    if (!in) throw ParseError("SYNTAX", 0, "cannot open solution file '" + path + "'");
    return parse_solution(in, instance);
}

}  // namespace ttg
