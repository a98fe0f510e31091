#include "ttg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ttg {

namespace {

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

void require_valid(const Instance& instance, const char* op) {
    ValidationReport report = validate(instance);
    if (!report.ok) {
        throw std::invalid_argument(std::string(op) + ": invalid instance:\n" + report.to_string());
    }
}

// Assignment of reduced items to intervals. Shared by the greedy and the
// branch-and-bound; loads[u][k] includes the opening header where due.
struct ReducedState {
    const ReducedProblem& problem;
    i64 row_count;
    std::vector<i64> rows;
    std::vector<std::vector<i64>> opened;  // [u][k] item count
    std::vector<std::vector<i64>> chosen;  // [u][item] -> k

    explicit ReducedState(const ReducedProblem& p)
        : problem(p), row_count(p.structure.row_count) {
        rows.assign(static_cast<std::size_t>(std::max<i64>(row_count, 0)), 0);
        opened.resize(p.items_by_period.size());
        chosen.resize(p.items_by_period.size());
        for (std::size_t u = 0; u < p.items_by_period.size(); u++) {
            opened[u].assign(static_cast<std::size_t>(p.structure.interval_counts[u]), 0);
            chosen[u].assign(p.items_by_period[u].size(), -1);
        }
    }

    i64 width(std::size_t u) const { return problem.structure.interval_counts[u]; }

    i64 place_cost(std::size_t u, i64 k, i64 size) const {
        i64 cost = size;
        if (opened[u][static_cast<std::size_t>(k)] == 0) cost += problem.interval_open_cost;
        return cost;
    }

    void apply(std::size_t u, std::size_t item, i64 k, i64 cost) {
        for (i64 row = k; row < row_count; row += width(u)) {
            rows[static_cast<std::size_t>(row)] += cost;
        }
        opened[u][static_cast<std::size_t>(k)]++;
        chosen[u][item] = k;
    }

    void undo(std::size_t u, std::size_t item, i64 k, i64 cost) {
        for (i64 row = k; row < row_count; row += width(u)) {
            rows[static_cast<std::size_t>(row)] -= cost;
        }
        opened[u][static_cast<std::size_t>(k)]--;
        chosen[u][item] = -1;
    }

    i64 projected(std::size_t u, i64 k, i64 cost, i64 cur_max) const {
        i64 result = cur_max;
        for (i64 row = k; row < row_count; row += width(u)) {
            result = std::max(result, rows[static_cast<std::size_t>(row)] + cost);
        }
        return result;
    }

    i64 current_max() const {
        i64 m = 0;
        for (i64 v : rows) m = std::max(m, v);
        return m;
    }
};

struct ReducedSearch {
    ReducedState state;
    const SolveLimits& limits;
    std::vector<std::pair<std::size_t, std::size_t>> sequence;  // (u, item index), branch order
    std::vector<i64> suffix_mass;  // remaining item sizes at row multiplicity

    i64 best_value;
    std::vector<std::vector<i64>> best_chosen;
    bool aborted = false;
    i64 nodes = 0;
    i64 internal_node_cap;

    ReducedSearch(const ReducedProblem& problem, const SolveLimits& lim, i64 incumbent,
                  std::vector<std::vector<i64>> incumbent_chosen, i64 node_cap)
        : state(problem),
          limits(lim),
          best_value(incumbent),
          best_chosen(std::move(incumbent_chosen)),
          internal_node_cap(node_cap) {
        // Periods with more items first, then larger items first.
        std::vector<std::size_t> periods;
        for (std::size_t u = 0; u < problem.items_by_period.size(); u++) periods.push_back(u);
        std::sort(periods.begin(), periods.end(), [&problem](std::size_t a, std::size_t b) {
            if (problem.items_by_period[a].size() != problem.items_by_period[b].size()) {
                return problem.items_by_period[a].size() > problem.items_by_period[b].size();
            }
            return a < b;
        });
        for (std::size_t u : periods) {
            std::vector<std::size_t> items(problem.items_by_period[u].size());
            for (std::size_t i = 0; i < items.size(); i++) items[i] = i;
            std::sort(items.begin(), items.end(), [&problem, u](std::size_t a, std::size_t b) {
                if (problem.items_by_period[u][a].size != problem.items_by_period[u][b].size) {
                    return problem.items_by_period[u][a].size > problem.items_by_period[u][b].size;
                }
                return a < b;
            });
            for (std::size_t i : items) sequence.emplace_back(u, i);
        }

        suffix_mass.assign(sequence.size() + 1, 0);
        for (std::size_t i = sequence.size(); i-- > 0;) {
            const auto [u, item] = sequence[i];
            const i64 mult = state.row_count / state.width(u);
            suffix_mass[i] = suffix_mass[i + 1] + problem.items_by_period[u][item].size * mult;
        }
    }

    bool count_node() {
        nodes++;
        if (internal_node_cap > 0 && nodes > internal_node_cap) aborted = true;
        if (limits.node_limit > 0 && nodes > limits.node_limit) aborted = true;
        return !aborted;
    }

    void branch(std::size_t idx, i64 cur_max, i64 assigned_mass) {
        if (aborted) return;
        if (idx == sequence.size()) {
            if (cur_max < best_value) {
                best_value = cur_max;
                best_chosen = state.chosen;
            }
            return;
        }
        const auto [u, item] = sequence[idx];
        const i64 size = state.problem.items_by_period[u][item].size;
        const i64 width = state.width(u);

        // Equal-size items of one period are interchangeable; force
        // nondecreasing intervals between consecutive ones.
        i64 k_floor = 0;
        if (idx > 0) {
            const auto [pu, pitem] = sequence[idx - 1];
            if (pu == u && state.problem.items_by_period[u][pitem].size == size) {
                k_floor = state.chosen[u][pitem];
            }
        }

        struct Candidate {
            i64 k, cost, projected;
        };
        std::vector<Candidate> candidates;
        for (i64 k = k_floor; k < width; k++) {
            const i64 cost = state.place_cost(u, k, size);
            candidates.push_back({k, cost, state.projected(u, k, cost, cur_max)});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.projected != b.projected) return a.projected < b.projected;
            return a.k < b.k;
        });

        for (const Candidate& cand : candidates) {
            if (aborted) return;
            if (!count_node()) return;
            const i64 mult = state.row_count / width;
            const i64 mass_lb = assigned_mass + cand.cost * mult + suffix_mass[idx + 1];
            const i64 bound =
                std::max(cand.projected, state.row_count > 0 ? ceil_div(mass_lb, state.row_count) : 0);
            if (bound >= best_value) continue;
            state.apply(u, item, cand.k, cand.cost);
            branch(idx + 1, cand.projected, assigned_mass + cand.cost * mult);
            state.undo(u, item, cand.k, cand.cost);
        }
    }
};

// Descending-size first fit onto the least-loaded projection, then a
// steepest item-move descent.
std::pair<i64, std::vector<std::vector<i64>>> reduced_greedy(const ReducedProblem& problem) {
    ReducedState state(problem);
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t u = 0; u < problem.items_by_period.size(); u++) {
        for (std::size_t i = 0; i < problem.items_by_period[u].size(); i++) order.emplace_back(u, i);
    }
    std::sort(order.begin(), order.end(),
              [&problem](const auto& a, const auto& b) {
                  const i64 sa = problem.items_by_period[a.first][a.second].size;
                  const i64 sb = problem.items_by_period[b.first][b.second].size;
                  if (sa != sb) return sa > sb;
                  return a < b;
              });

    for (const auto& [u, item] : order) {
        const i64 size = problem.items_by_period[u][item].size;
        i64 best_k = 0, best_proj = -1;
        for (i64 k = 0; k < state.width(u); k++) {
            const i64 cost = state.place_cost(u, k, size);
            const i64 proj = state.projected(u, k, cost, 0);
            if (best_proj < 0 || proj < best_proj) {
                best_proj = proj;
                best_k = k;
            }
        }
        state.apply(u, item, best_k, state.place_cost(u, best_k, size));
    }

    // Item-move descent.
    bool improved = true;
    int rounds = 0;
    while (improved && rounds++ < 200) {
        improved = false;
        for (const auto& [u, item] : order) {
            const i64 size = problem.items_by_period[u][item].size;
            const i64 from = state.chosen[u][item];
            const i64 from_cost =
                size + (state.opened[u][static_cast<std::size_t>(from)] == 1 ? problem.interval_open_cost : 0);
            state.undo(u, item, from, from_cost);
            i64 best_k = from, best_proj = state.projected(u, from, state.place_cost(u, from, size), 0);
            for (i64 k = 0; k < state.width(u); k++) {
                if (k == from) continue;
                const i64 proj = state.projected(u, k, state.place_cost(u, k, size), 0);
                if (proj < best_proj) {
                    best_proj = proj;
                    best_k = k;
                }
            }
            state.apply(u, item, best_k, state.place_cost(u, best_k, size));
            if (best_k != from) improved = true;
        }
    }
    return {state.current_max(), state.chosen};
}

Solution reduced_solution(const ReducedProblem& problem,
                          const std::vector<std::vector<i64>>& chosen) {
    Solution solution;
    for (std::size_t u = 0; u < problem.items_by_period.size(); u++) {
        if (problem.kind == ReducedKind::UpperSingleton) {
            int next_id = 0;
            for (std::size_t i = 0; i < problem.items_by_period[u].size(); i++) {
                solution.add_group(static_cast<int>(u), next_id++,
                                   {problem.items_by_period[u][i].task}, chosen[u][i]);
            }
        } else {
            std::map<i64, std::vector<int>> merged;
            for (std::size_t i = 0; i < problem.items_by_period[u].size(); i++) {
                merged[chosen[u][i]].push_back(problem.items_by_period[u][i].task);
            }
            int next_id = 0;
            for (auto& [k, members] : merged) {
                solution.add_group(static_cast<int>(u), next_id++, std::move(members), k);
            }
        }
    }
    return solution;
}

}  // namespace

ReducedProblem upper_bound_problem(const Instance& instance) {
    require_valid(instance, "upper_bound_problem");
    ReducedProblem problem;
    problem.kind = ReducedKind::UpperSingleton;
    problem.structure = derive_period_structure(instance);
    problem.interval_open_cost = 0;
    problem.instance = &instance;
    problem.items_by_period.resize(instance.periods.size());
    const auto by_period = instance.tasks_by_period();
    for (std::size_t u = 0; u < by_period.size(); u++) {
        for (int t : by_period[u]) {
            problem.items_by_period[u].push_back({instance.header_size + instance.tasks[t].proc, t});
        }
    }
    return problem;
}

ReducedProblem lower_bound_problem(const Instance& instance) {
    require_valid(instance, "lower_bound_problem");
    ReducedProblem problem;
    problem.kind = ReducedKind::LowerMerged;
    problem.structure = derive_period_structure(instance);
    problem.interval_open_cost = instance.header_size;
    problem.instance = &instance;
    problem.items_by_period.resize(instance.periods.size());
    const auto by_period = instance.tasks_by_period();
    for (std::size_t u = 0; u < by_period.size(); u++) {
        for (int t : by_period[u]) {
            problem.items_by_period[u].push_back({instance.tasks[t].proc, t});
        }
    }
    return problem;
}

ReducedResult solve_reduced(const ReducedProblem& problem, const SolveLimits& limits) {
    if (problem.instance == nullptr) {
        throw std::invalid_argument("solve_reduced: problem carries no instance");
    }

    double space = 1.0;
    for (std::size_t u = 0; u < problem.items_by_period.size(); u++) {
        space *= std::pow(static_cast<double>(problem.structure.interval_counts[u]),
                          static_cast<double>(problem.items_by_period[u].size()));
        if (space > 1e18) break;
    }
    const bool small = space <= 1e7;

    auto [greedy_value, greedy_chosen] = reduced_greedy(problem);

    // Large assignment spaces run under an internal node cap; an exhausted
    // search is still reported optimal.
    const i64 node_cap = small ? 0 : 2'000'000;
    ReducedSearch search(problem, limits, greedy_value, std::move(greedy_chosen), node_cap);
    search.branch(0, 0, 0);

    ReducedResult result;
    result.value = search.best_value;
    result.solution = reduced_solution(problem, search.best_chosen);
    result.optimal = !search.aborted;
    result.nodes = search.nodes;
    return result;
}

i64 analytic_lower_bound(const Instance& instance) {
    require_valid(instance, "analytic_lower_bound");
    if (instance.periods.empty() || instance.tasks.empty()) return 0;
    const PeriodStructure ps = derive_period_structure(instance);

    // Header-free average utilization across rows.
    i64 mass = 0;
    for (const TaskSpec& task : instance.tasks) {
        mass += task.proc * (ps.hyperperiod / task.period);
    }
    i64 bound = ceil_div(mass, ps.row_count);

    // Any task's group occupies at least header + proc of some row.
    for (const TaskSpec& task : instance.tasks) {
        bound = std::max(bound, instance.header_size + task.proc);
    }

    // Base-period tasks hit every row; at least one header among them.
    i64 base_load = 0;
    bool base_nonempty = false;
    for (const TaskSpec& task : instance.tasks) {
        if (task.period == instance.periods.front()) {
            base_load += task.proc;
            base_nonempty = true;
        }
    }
    if (base_nonempty) bound = std::max(bound, instance.header_size + base_load);
    return bound;
}

BoundsReport compute_bounds(const Instance& instance, const SolveLimits& limits) {
    BoundsReport report;
    report.analytic_lower = analytic_lower_bound(instance);
    ReducedResult lower = solve_reduced(lower_bound_problem(instance), limits);
    ReducedResult upper = solve_reduced(upper_bound_problem(instance), limits);
    report.lower = lower.value;
    report.upper = upper.value;
    report.lower_optimal = lower.optimal;
    report.upper_optimal = upper.optimal;
    return report;
}

}  // namespace ttg
