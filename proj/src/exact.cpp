#include "ttg/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ttg/bounds.hpp"
#include "ttg/heuristic.hpp"

namespace ttg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

void require_valid(const Instance& instance, const char* op) {
    ValidationReport report = validate(instance);
    if (!report.ok) {
        throw std::invalid_argument(std::string(op) + ": invalid instance:\n" + report.to_string());
    }
}

double bell_number(int n) {
    std::vector<double> row{1.0};
    for (int i = 0; i < n; i++) {
        std::vector<double> next(row.size() + 1);
        next[0] = row.back();
        for (std::size_t j = 0; j < row.size(); j++) next[j + 1] = next[j] + row[j];
        row = std::move(next);
    }
    return row.front();
}

// ---------------------------------------------------------------------
// brute_force_oracle: nested exhaustive enumeration, period by period.
// Partitions are generated as restricted growth strings over the tasks in
// instance order; every partition is paired with every odometer of
// group -> interval choices. Row totals are recomputed from scratch at each
// leaf, independently of the branch-and-bound's incremental bookkeeping.
// ---------------------------------------------------------------------

struct OracleState {
    const Instance& instance;
    PeriodStructure ps;
    std::vector<std::vector<int>> by_period;

    std::vector<std::vector<std::vector<int>>> groups;  // [u] -> group member lists
    std::vector<std::vector<i64>> group_sizes;          // [u][g]
    std::vector<std::vector<i64>> chosen_k;             // [u][g]
    std::vector<std::vector<i64>> loads;                // [u][k]

    i64 best_cmax = -1;
    std::vector<std::vector<std::vector<int>>> best_groups;
    std::vector<std::vector<i64>> best_k;
    i64 leaves = 0;

    explicit OracleState(const Instance& inst)
        : instance(inst), ps(derive_period_structure(inst)), by_period(inst.tasks_by_period()) {
        const std::size_t r = inst.periods.size();
        groups.resize(r);
        group_sizes.resize(r);
        chosen_k.resize(r);
        loads.resize(r);
        for (std::size_t u = 0; u < r; u++) {
            loads[u].assign(static_cast<std::size_t>(ps.interval_counts[u]), 0);
        }
    }

    void leaf() {
        leaves++;
        i64 cmax = 0;
        for (i64 k = 0; k < ps.row_count; k++) {
            i64 total = 0;
            for (std::size_t u = 0; u < loads.size(); u++) {
                total += loads[u][static_cast<std::size_t>(k % ps.interval_counts[u])];
            }
            cmax = std::max(cmax, total);
        }
        if (best_cmax < 0 || cmax < best_cmax) {
            best_cmax = cmax;
            best_groups = groups;
            best_k = chosen_k;
        }
    }

    void assign_group(std::size_t u, std::size_t g) {
        if (g == groups[u].size()) {
            run_period(u + 1);
            return;
        }
        const i64 size = group_sizes[u][g];
        for (i64 k = 0; k < ps.interval_counts[u]; k++) {
            loads[u][static_cast<std::size_t>(k)] += size;
            chosen_k[u][g] = k;
            assign_group(u, g + 1);
            loads[u][static_cast<std::size_t>(k)] -= size;
        }
    }

    void partition_task(std::size_t u, std::size_t t) {
        if (t == by_period[u].size()) {
            chosen_k[u].assign(groups[u].size(), 0);
            assign_group(u, 0);
            return;
        }
        const int task = by_period[u][t];
        const i64 proc = instance.tasks[task].proc;
        const std::size_t ng = groups[u].size();
        for (std::size_t j = 0; j <= ng; j++) {
            if (j < ng) {
                if (group_sizes[u][j] + proc > instance.max_group_size) continue;
                groups[u][j].push_back(task);
                group_sizes[u][j] += proc;
                partition_task(u, t + 1);
                groups[u][j].pop_back();
                group_sizes[u][j] -= proc;
            } else {
                groups[u].push_back({task});
                group_sizes[u].push_back(instance.header_size + proc);
                partition_task(u, t + 1);
                groups[u].pop_back();
                group_sizes[u].pop_back();
            }
        }
    }

    void run_period(std::size_t u) {
        if (u == instance.periods.size()) {
            leaf();
            return;
        }
        partition_task(u, 0);
    }
};

// ---------------------------------------------------------------------
// solve_exact
// ---------------------------------------------------------------------

struct ExactSearch {
    const Instance& instance;
    const SolveLimits& limits;
    PeriodStructure ps;
    i64 hs, smax, row_count;

    std::vector<int> order;                        // period indices, branch order
    std::vector<std::vector<int>> ordered_tasks;   // [u] tasks desc proc, asc index
    std::vector<i64> occ;                          // rows touched by a period-u group
    std::vector<i64> payload;                      // [u] sum of procs
    std::vector<i64> suffix_mass;                  // untouched-period mass, by order pos

    struct OpenGroup {
        std::vector<int> members;
        i64 size;
    };
    std::vector<std::vector<OpenGroup>> groups_of;  // [u]
    std::vector<std::vector<i64>> ks_of;            // [u], parallel to groups_of

    std::vector<i64> rows;
    i64 root_lower = 0;

    i64 best_cmax = 0;
    Solution best_solution;
    bool improved_proven = false;  // best reached root_lower
    bool aborted = false;
    i64 nodes = 0;
    Clock::time_point start = Clock::now();

    ExactSearch(const Instance& inst, const SolveLimits& lim)
        : instance(inst),
          limits(lim),
          ps(derive_period_structure(inst)),
          hs(inst.header_size),
          smax(inst.max_group_size),
          row_count(ps.row_count) {
        const std::size_t r = inst.periods.size();
        auto by_period = inst.tasks_by_period();
        ordered_tasks = by_period;
        for (auto& tasks : ordered_tasks) {
            std::sort(tasks.begin(), tasks.end(), [&inst](int a, int b) {
                if (inst.tasks[a].proc != inst.tasks[b].proc) return inst.tasks[a].proc > inst.tasks[b].proc;
                return a < b;
            });
        }
        for (std::size_t u = 0; u < r; u++) order.push_back(static_cast<int>(u));
        std::sort(order.begin(), order.end(), [&by_period](int a, int b) {
            if (by_period[a].size() != by_period[b].size()) return by_period[a].size() > by_period[b].size();
            return a < b;
        });

        occ.resize(r);
        payload.assign(r, 0);
        for (std::size_t u = 0; u < r; u++) {
            occ[u] = row_count / ps.interval_counts[u];
            for (int t : by_period[u]) payload[u] += inst.tasks[t].proc;
        }

        // Minimum committed mass of a period nobody has touched yet: all its
        // payload plus one header per group at full payload capacity.
        suffix_mass.assign(order.size() + 1, 0);
        for (std::size_t pos = order.size(); pos-- > 0;) {
            const int u = order[pos];
            i64 mass = 0;
            if (!ordered_tasks[u].empty()) {
                const i64 min_groups = ceil_div(payload[u], smax - hs);
                mass = (payload[u] + min_groups * hs) * occ[u];
            }
            suffix_mass[pos] = suffix_mass[pos + 1] + mass;
        }

        groups_of.resize(r);
        ks_of.resize(r);
        rows.assign(static_cast<std::size_t>(row_count), 0);
    }

    bool count_node() {
        nodes++;
        if (limits.node_limit > 0 && nodes > limits.node_limit) aborted = true;
        if (limits.time_limit > 0 && (nodes & 1023) == 0 && seconds_since(start) > limits.time_limit) {
            aborted = true;
        }
        return !aborted;
    }

    bool done() const { return aborted || improved_proven; }

    void record_improvement(i64 cmax) {
        best_cmax = cmax;
        best_solution = snapshot();
        if (best_cmax <= root_lower) improved_proven = true;
        if (limits.target_cmax && best_cmax <= *limits.target_cmax) aborted = true;
    }

    Solution snapshot() const {
        Solution solution;
        for (std::size_t u = 0; u < groups_of.size(); u++) {
            for (std::size_t g = 0; g < groups_of[u].size(); g++) {
                solution.add_group(static_cast<int>(u), static_cast<int>(g), groups_of[u][g].members,
                                   ks_of[u][g]);
            }
        }
        return solution;
    }

    // Mass still to be paid by the current period given its open groups and
    // unplaced tasks; extra headers count only when the open free capacity
    // provably cannot absorb the remaining payload.
    i64 current_period_future_mass(int u, std::size_t next_task, i64 open_mass) const {
        i64 remaining = 0;
        for (std::size_t t = next_task; t < ordered_tasks[u].size(); t++) {
            remaining += instance.tasks[ordered_tasks[u][t]].proc;
        }
        i64 free_cap = 0;
        for (const OpenGroup& group : groups_of[u]) free_cap += smax - group.size;
        const i64 overflow = std::max<i64>(0, remaining - free_cap);
        const i64 extra_groups = overflow > 0 ? ceil_div(overflow, smax - hs) : 0;
        return open_mass + (remaining + extra_groups * hs) * occ[u];
    }

    bool prune(i64 cur_max, i64 mass_lb) const {
        const i64 avg = row_count > 0 ? ceil_div(mass_lb, row_count) : 0;
        return std::max({cur_max, avg, root_lower}) >= best_cmax;
    }

    void branch_period(std::size_t pos, i64 cur_max, i64 assigned_mass) {
        if (done()) return;
        if (pos == order.size()) {
            if (cur_max < best_cmax) record_improvement(cur_max);
            return;
        }
        partition_task(pos, order[pos], 0, cur_max, assigned_mass, 0);
    }

    // Canonical partition labeling: a task may join any open group or open
    // the next one, so each set partition of the period class is visited
    // exactly once.
    void partition_task(std::size_t pos, int u, std::size_t t, i64 cur_max, i64 assigned_mass,
                        i64 open_mass) {
        if (done()) return;
        if (t == ordered_tasks[u].size()) {
            assign_groups(pos, u, cur_max, assigned_mass);
            return;
        }
        const int task = ordered_tasks[u][t];
        const i64 proc = instance.tasks[task].proc;
        auto& groups = groups_of[u];
        const std::size_t ng = groups.size();
        for (std::size_t j = 0; j <= ng; j++) {
            if (done()) return;
            if (!count_node()) return;
            i64 delta_open;
            if (j < ng) {
                if (groups[j].size + proc > smax) continue;
                groups[j].members.push_back(task);
                groups[j].size += proc;
                delta_open = proc * occ[u];
            } else {
                groups.push_back({{task}, hs + proc});
                delta_open = (hs + proc) * occ[u];
            }
            const i64 mass_lb = assigned_mass +
                                current_period_future_mass(u, t + 1, open_mass + delta_open) +
                                suffix_mass[pos + 1];
            if (!prune(cur_max, mass_lb)) {
                partition_task(pos, u, t + 1, cur_max, assigned_mass, open_mass + delta_open);
            }
            if (j < ng) {
                groups[j].members.pop_back();
                groups[j].size -= proc;
            } else {
                groups.pop_back();
            }
        }
    }

    void assign_groups(std::size_t pos, int u, i64 cur_max, i64 assigned_mass) {
        auto& groups = groups_of[u];
        ks_of[u].assign(groups.size(), 0);
        // Largest groups first; ties keep creation order.
        std::vector<std::size_t> perm(groups.size());
        for (std::size_t g = 0; g < perm.size(); g++) perm[g] = g;
        std::stable_sort(perm.begin(), perm.end(),
                         [&groups](std::size_t a, std::size_t b) { return groups[a].size > groups[b].size; });

        i64 pending = 0;
        for (const OpenGroup& group : groups) pending += group.size * occ[u];
        assign_next(pos, u, perm, 0, cur_max, assigned_mass, pending, -1);
    }

    void assign_next(std::size_t pos, int u, const std::vector<std::size_t>& perm, std::size_t idx,
                     i64 cur_max, i64 assigned_mass, i64 pending, i64 prev_equal_k) {
        if (done()) return;
        if (idx == perm.size()) {
            branch_period(pos + 1, cur_max, assigned_mass);
            return;
        }
        const std::size_t g = perm[idx];
        const i64 size = groups_of[u][g].size;
        const i64 width = ps.interval_counts[u];

        // Interchangeable with the previous equal-size group: force
        // nondecreasing intervals.
        const bool tied = idx > 0 && groups_of[u][perm[idx - 1]].size == size;
        const i64 k_floor = tied ? prev_equal_k : 0;

        struct Candidate {
            i64 k;
            i64 projected;
        };
        std::vector<Candidate> candidates;
        for (i64 k = k_floor; k < width; k++) {
            i64 projected = cur_max;
            for (i64 row = k; row < row_count; row += width) {
                projected = std::max(projected, rows[static_cast<std::size_t>(row)] + size);
            }
            candidates.push_back({k, projected});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.projected != b.projected) return a.projected < b.projected;
            return a.k < b.k;
        });

        for (const Candidate& cand : candidates) {
            if (done()) return;
            if (!count_node()) return;
            const i64 mass_lb = assigned_mass + pending + suffix_mass[pos + 1];
            if (prune(cand.projected, mass_lb)) continue;
            for (i64 row = cand.k; row < row_count; row += width) {
                rows[static_cast<std::size_t>(row)] += size;
            }
            ks_of[u][g] = cand.k;
            assign_next(pos, u, perm, idx + 1, cand.projected, assigned_mass + size * occ[u],
                        pending - size * occ[u], cand.k);
            for (i64 row = cand.k; row < row_count; row += width) {
                rows[static_cast<std::size_t>(row)] -= size;
            }
        }
    }
};

}  // namespace

SolveResult brute_force_oracle(const Instance& instance) {
    const auto start = Clock::now();
    require_valid(instance, "brute_force_oracle");

    const auto by_period = instance.tasks_by_period();
    const PeriodStructure ps = derive_period_structure(instance);
    double space = 1.0;
    for (std::size_t u = 0; u < by_period.size(); u++) {
        const int n_u = static_cast<int>(by_period[u].size());
        space *= bell_number(n_u) * std::pow(static_cast<double>(ps.interval_counts[u]), n_u);
        if (space > 1e7) break;
    }
    if (space > 1e7) {
        throw SpaceTooLargeError("enumeration space estimate " + std::to_string(space) +
                                 " exceeds 1e7");
    }

    OracleState state(instance);
    state.run_period(0);

    SolveResult result;
    for (std::size_t u = 0; u < state.best_groups.size(); u++) {
        for (std::size_t g = 0; g < state.best_groups[u].size(); g++) {
            result.solution.add_group(static_cast<int>(u), static_cast<int>(g),
                                      state.best_groups[u][g], state.best_k[u][g]);
        }
    }
    result.cmax = state.best_cmax < 0 ? 0 : state.best_cmax;
    result.optimal = true;
    result.nodes = state.leaves;
    result.wall_time = seconds_since(start);
    return result;
}

SolveResult solve_exact(const Instance& instance, const SolveLimits& limits) {
    const auto start = Clock::now();
    require_valid(instance, "solve_exact");

    SolveResult result;
    result.solution = construct_greedy(instance);
    result.cmax = evaluate(instance, result.solution).cmax;

    ExactSearch search(instance, limits);
    search.root_lower = analytic_lower_bound(instance);
    search.best_cmax = result.cmax;
    search.best_solution = result.solution;

    const bool proven_at_root = result.cmax <= search.root_lower;
    const bool target_at_root = limits.target_cmax && result.cmax <= *limits.target_cmax;
    if (proven_at_root || target_at_root) {
        result.optimal = proven_at_root;
    } else {
        search.branch_period(0, 0, 0);
        result.solution = search.best_solution;
        result.cmax = search.best_cmax;
        result.optimal = search.improved_proven || !search.aborted;
    }
    result.nodes = search.nodes;
    result.wall_time = seconds_since(start);
    return result;
}

}  // namespace ttg
