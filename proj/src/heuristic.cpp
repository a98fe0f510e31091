#include "ttg/heuristic.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace ttg {

namespace {

void require_valid(const Instance& instance, const char* op) {
    ValidationReport report = validate(instance);
    if (!report.ok) {
        throw std::invalid_argument(std::string(op) + ": invalid instance:\n" + report.to_string());
    }
}

// Objective: makespan first, squared row totals as a plateau tie-breaker.
struct Objective {
    i64 cmax;
    i64 sum_sq;
    auto operator<=>(const Objective&) const = default;
};

// Working copy of a solution with cached sizes, row totals, and a row-total
// histogram so candidate moves can be probed via sparse deltas and rolled
// back without touching the full row vector.
struct SearchState {
    const Instance& instance;
    PeriodStructure ps;
    std::vector<GroupRecord> groups;
    std::vector<i64> assignment;
    std::vector<i64> sizes;
    std::vector<i64> rows;
    std::map<i64, i64> histogram;  // row total -> row count
    i64 sum_sq = 0;

    SearchState(const Instance& inst, const Solution& solution)
        : instance(inst), ps(derive_period_structure(inst)) {
        for (std::size_t g = 0; g < solution.groups.size(); g++) {
            if (solution.groups[g].empty()) continue;  // inert
            groups.push_back(solution.groups[g]);
            assignment.push_back(solution.assignment[g]);
            sizes.push_back(group_size(inst, solution.groups[g].members));
        }
        rows.assign(static_cast<std::size_t>(ps.row_count), 0);
        for (std::size_t g = 0; g < groups.size(); g++) {
            for_rows(groups[g].period_index, assignment[g], [&](i64 row) { rows[row] += sizes[g]; });
        }
        for (i64 total : rows) {
            histogram[total]++;
            sum_sq += total * total;
        }
    }

    template <typename Fn>
    void for_rows(int period_index, i64 k, Fn&& fn) const {
        const i64 width = ps.interval_counts[period_index];
        for (i64 row = k; row < ps.row_count; row += width) fn(static_cast<std::size_t>(row));
    }

    Objective objective() const {
        return {histogram.empty() ? 0 : histogram.rbegin()->first, sum_sq};
    }

    void shift_row(std::size_t row, i64 delta) {
        const i64 old_total = rows[row];
        const i64 new_total = old_total + delta;
        auto it = histogram.find(old_total);
        if (--it->second == 0) histogram.erase(it);
        histogram[new_total]++;
        sum_sq += new_total * new_total - old_total * old_total;
        rows[row] = new_total;
    }

    void apply_deltas(const std::vector<std::pair<std::size_t, i64>>& deltas) {
        for (const auto& [row, delta] : deltas) shift_row(row, delta);
    }

    Objective probe(const std::vector<std::pair<std::size_t, i64>>& deltas) {
        apply_deltas(deltas);
        Objective result = objective();
        for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) shift_row(it->first, -it->second);
        return result;
    }

    int fresh_group_id(int period_index) const {
        int next = 0;
        for (const GroupRecord& group : groups) {
            if (group.period_index == period_index) next = std::max(next, group.group_id + 1);
        }
        return next;
    }

    Solution to_solution() const {
        Solution solution;
        solution.groups = groups;
        solution.assignment = assignment;
        return solution;
    }
};

// A committed move: row deltas plus a structural mutation.
struct Move {
    std::vector<std::pair<std::size_t, i64>> deltas;
    std::function<void(SearchState&)> commit;
};

void erase_member(GroupRecord& group, int task) {
    group.members.erase(std::find(group.members.begin(), group.members.end(), task));
}

void insert_member(GroupRecord& group, int task) {
    group.members.insert(std::upper_bound(group.members.begin(), group.members.end(), task), task);
}

void drop_group(SearchState& state, std::size_t g) {
    state.groups.erase(state.groups.begin() + static_cast<std::ptrdiff_t>(g));
    state.assignment.erase(state.assignment.begin() + static_cast<std::ptrdiff_t>(g));
    state.sizes.erase(state.sizes.begin() + static_cast<std::ptrdiff_t>(g));
}

}  // namespace

Solution construct_greedy(const Instance& instance) {
    require_valid(instance, "construct_greedy");
    const PeriodStructure ps = derive_period_structure(instance);
    const auto by_period = instance.tasks_by_period();

    // Grouping: first fit decreasing under the size cap, per period class.
    Solution solution;
    std::vector<std::size_t> group_index;  // flat index into solution.groups
    std::vector<i64> group_sizes;
    for (std::size_t u = 0; u < by_period.size(); u++) {
        std::vector<int> tasks = by_period[u];
        std::sort(tasks.begin(), tasks.end(), [&instance](int a, int b) {
            if (instance.tasks[a].proc != instance.tasks[b].proc) {
                return instance.tasks[a].proc > instance.tasks[b].proc;
            }
            return a < b;
        });
        std::size_t first_of_period = solution.groups.size();
        for (int t : tasks) {
            const i64 proc = instance.tasks[t].proc;
            bool placed = false;
            for (std::size_t g = first_of_period; g < solution.groups.size(); g++) {
                if (group_sizes[g] + proc <= instance.max_group_size) {
                    solution.groups[g].members.push_back(t);
                    group_sizes[g] += proc;
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                solution.add_group(static_cast<int>(u),
                                   static_cast<int>(solution.groups.size() - first_of_period), {t},
                                   kUnassigned);
                group_sizes.push_back(instance.header_size + proc);
            }
        }
    }
    for (GroupRecord& group : solution.groups) std::sort(group.members.begin(), group.members.end());

    // Interval assignment: biggest groups first onto the interval whose
    // touched rows end up lowest. Cmax couples rows across periods, so the
    // charge is the projected row maximum, not the local period load.
    std::vector<std::size_t> order(solution.groups.size());
    for (std::size_t g = 0; g < order.size(); g++) order[g] = g;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (group_sizes[a] != group_sizes[b]) return group_sizes[a] > group_sizes[b];
        const GroupRecord& ga = solution.groups[a];
        const GroupRecord& gb = solution.groups[b];
        return std::tie(ga.period_index, ga.group_id) < std::tie(gb.period_index, gb.group_id);
    });

    std::vector<i64> rows(static_cast<std::size_t>(ps.row_count), 0);
    for (std::size_t g : order) {
        const int u = solution.groups[g].period_index;
        const i64 width = ps.interval_counts[u];
        const i64 size = group_sizes[g];
        i64 best_k = 0;
        i64 best_proj = -1;
        for (i64 k = 0; k < width; k++) {
            i64 projected = 0;
            for (i64 row = k; row < ps.row_count; row += width) {
                projected = std::max(projected, rows[static_cast<std::size_t>(row)] + size);
            }
            if (best_proj < 0 || projected < best_proj) {
                best_proj = projected;
                best_k = k;
            }
        }
        solution.assignment[g] = best_k;
        for (i64 row = best_k; row < ps.row_count; row += width) {
            rows[static_cast<std::size_t>(row)] += size;
        }
    }
    return solution;
}

Solution local_search(const Instance& instance, const Solution& start,
                      const LocalSearchConfig& config) {
    {
        ValidationReport report = check_solution(instance, start);
        if (!report.ok) {
            throw std::invalid_argument("local_search: invalid start solution:\n" + report.to_string());
        }
    }
    SearchState state(instance, start);
    const i64 hs = instance.header_size;
    const i64 smax = instance.max_group_size;
    bool changed = false;

    for (i64 iteration = 0; iteration < config.max_iterations; iteration++) {
        const Objective current = state.objective();
        Objective best_obj = current;
        std::optional<Move> best_move;

        auto consider = [&](std::vector<std::pair<std::size_t, i64>> deltas,
                            std::function<void(SearchState&)> commit) {
            Objective probed = state.probe(deltas);
            if (probed < best_obj) {
                best_obj = probed;
                best_move = Move{std::move(deltas), std::move(commit)};
            }
        };

        const std::size_t n_groups = state.groups.size();
        for (std::size_t g = 0; g < n_groups; g++) {
            const GroupRecord& from = state.groups[g];
            const int u = from.period_index;
            const i64 width = state.ps.interval_counts[u];
            const i64 size_g = state.sizes[g];
            const i64 k_g = state.assignment[g];

            if (config.group_move) {
                for (i64 k = 0; k < width; k++) {
                    if (k == k_g) continue;
                    std::vector<std::pair<std::size_t, i64>> deltas;
                    state.for_rows(u, k_g, [&](std::size_t row) { deltas.emplace_back(row, -size_g); });
                    state.for_rows(u, k, [&](std::size_t row) { deltas.emplace_back(row, size_g); });
                    consider(std::move(deltas), [g, k](SearchState& s) { s.assignment[g] = k; });
                }
            }

            if (config.group_merge) {
                for (std::size_t h = g + 1; h < n_groups; h++) {
                    if (state.groups[h].period_index != u) continue;
                    const i64 merged_size = size_g + state.sizes[h] - hs;
                    if (merged_size > smax) continue;
                    for (i64 k : {state.assignment[g], state.assignment[h]}) {
                        std::vector<std::pair<std::size_t, i64>> deltas;
                        state.for_rows(u, k_g, [&](std::size_t row) { deltas.emplace_back(row, -size_g); });
                        state.for_rows(u, state.assignment[h],
                                       [&](std::size_t row) { deltas.emplace_back(row, -state.sizes[h]); });
                        state.for_rows(u, k, [&](std::size_t row) { deltas.emplace_back(row, merged_size); });
                        consider(std::move(deltas), [g, h, k, merged_size](SearchState& s) {
                            for (int t : s.groups[h].members) insert_member(s.groups[g], t);
                            s.sizes[g] = merged_size;
                            s.assignment[g] = k;
                            drop_group(s, h);
                        });
                        if (state.assignment[g] == state.assignment[h]) break;
                    }
                }
            }

            for (int t : from.members) {
                const i64 proc = instance.tasks[t].proc;
                // Removing the last member also removes the header.
                const i64 out_delta = from.members.size() == 1 ? -size_g : -proc;

                if (config.task_move) {
                    for (std::size_t h = 0; h < n_groups; h++) {
                        if (h == g || state.groups[h].period_index != u) continue;
                        if (state.sizes[h] + proc > smax) continue;
                        std::vector<std::pair<std::size_t, i64>> deltas;
                        state.for_rows(u, k_g, [&](std::size_t row) { deltas.emplace_back(row, out_delta); });
                        state.for_rows(u, state.assignment[h],
                                       [&](std::size_t row) { deltas.emplace_back(row, proc); });
                        consider(std::move(deltas), [g, h, t, proc](SearchState& s) {
                            erase_member(s.groups[g], t);
                            insert_member(s.groups[h], t);
                            s.sizes[h] += proc;
                            if (s.groups[g].members.empty()) {
                                drop_group(s, g);
                            } else {
                                s.sizes[g] -= proc;
                            }
                        });
                    }
                }

                if (config.group_split && from.members.size() >= 2) {
                    for (i64 k = 0; k < width; k++) {
                        std::vector<std::pair<std::size_t, i64>> deltas;
                        state.for_rows(u, k_g, [&](std::size_t row) { deltas.emplace_back(row, -proc); });
                        state.for_rows(u, k, [&](std::size_t row) { deltas.emplace_back(row, hs + proc); });
                        consider(std::move(deltas), [g, t, u, k, proc, hs](SearchState& s) {
                            erase_member(s.groups[g], t);
                            s.sizes[g] -= proc;
                            s.groups.push_back({u, s.fresh_group_id(u), {t}});
                            s.assignment.push_back(k);
                            s.sizes.push_back(hs + proc);
                        });
                    }
                }

                if (config.task_swap) {
                    for (std::size_t h = g + 1; h < n_groups; h++) {
                        if (state.groups[h].period_index != u) continue;
                        for (int t2 : state.groups[h].members) {
                            const i64 proc2 = instance.tasks[t2].proc;
                            if (proc == proc2) continue;  // no effect on loads
                            if (size_g - proc + proc2 > smax) continue;
                            if (state.sizes[h] - proc2 + proc > smax) continue;
                            std::vector<std::pair<std::size_t, i64>> deltas;
                            state.for_rows(u, k_g,
                                           [&](std::size_t row) { deltas.emplace_back(row, proc2 - proc); });
                            state.for_rows(u, state.assignment[h],
                                           [&](std::size_t row) { deltas.emplace_back(row, proc - proc2); });
                            consider(std::move(deltas), [g, h, t, t2, proc, proc2](SearchState& s) {
                                erase_member(s.groups[g], t);
                                insert_member(s.groups[g], t2);
                                erase_member(s.groups[h], t2);
                                insert_member(s.groups[h], t);
                                s.sizes[g] += proc2 - proc;
                                s.sizes[h] += proc - proc2;
                            });
                        }
                    }
                }
            }
        }

        if (!best_move) break;
        state.apply_deltas(best_move->deltas);
        best_move->commit(state);
        changed = true;
    }
    return changed ? state.to_solution() : start;
}

}  // namespace ttg
