#pragma once

#include "ttg/schedule.hpp"

namespace ttg {

struct LocalSearchConfig {
    i64 max_iterations = 1000;
    bool task_move = true;
    bool task_swap = true;
    bool group_move = true;
    bool group_merge = true;
    bool group_split = true;
    std::uint64_t seed = 0;  // reserved for randomized variants
};

// First-fit-decreasing grouping per period, then groups in descending size
// onto the interval with the least projected row maximum. Deterministic;
// always returns a check_solution-valid solution.
Solution construct_greedy(const Instance& instance);

// Steepest descent over the enabled neighborhoods, minimizing
// (cmax, sum of squared row totals) lexicographically. Never returns a
// solution worse than `start`; every intermediate stays valid.
Solution local_search(const Instance& instance, const Solution& start,
                      const LocalSearchConfig& config = {});

}  // namespace ttg
