#pragma once

#include "ttg/exact.hpp"
#include "ttg/schedule.hpp"

namespace ttg {

enum class ReducedKind {
    UpperSingleton,  // one fixed-size item per task (header included)
    LowerMerged,     // task payloads; one header per used (period, interval)
};

struct ReducedItem {
    i64 size = 0;
    int task = -1;
};

// Interval-assignment relaxation/restriction of an instance. The lower
// variant drops the group capacity entirely; a merged group only pays its
// interval's single header. `instance` must outlive the problem.
struct ReducedProblem {
    ReducedKind kind = ReducedKind::UpperSingleton;
    PeriodStructure structure;
    std::vector<std::vector<ReducedItem>> items_by_period;
    i64 interval_open_cost = 0;  // hs for LowerMerged, 0 for UpperSingleton
    const Instance* instance = nullptr;
};

struct ReducedResult {
    i64 value = 0;
    Solution solution;  // LowerMerged solutions may exceed max_group_size
    bool optimal = false;
    i64 nodes = 0;
};

struct BoundsReport {
    i64 analytic_lower = 0;
    i64 lower = 0;
    i64 upper = 0;
    bool lower_optimal = false;
    bool upper_optimal = false;
};

// Every task in its own group; requires validate(instance).ok.
ReducedProblem upper_bound_problem(const Instance& instance);

// All same-period tasks sharing an interval merged into one uncapped group.
ReducedProblem lower_bound_problem(const Instance& instance);

// Exact branch-and-bound when the assignment space is small, otherwise a
// greedy construction plus local search refined by a budgeted search; the
// optimal flag is set only on exhaustion.
ReducedResult solve_reduced(const ReducedProblem& problem, const SolveLimits& limits = {});

// max(header-free average utilization, largest mandatory row contribution).
// Cheap and weak; used for root pruning.
i64 analytic_lower_bound(const Instance& instance);

BoundsReport compute_bounds(const Instance& instance, const SolveLimits& limits = {});

}  // namespace ttg
