#pragma once

#include "ttg/schedule.hpp"

namespace ttg {

// Budgets for search-based solvers; 0 means unlimited. target_cmax stops
// the search as soon as an incumbent reaches it.
struct SolveLimits {
    double time_limit = 0;  // seconds
    i64 node_limit = 0;
    std::optional<i64> target_cmax;
};

struct SolveResult {
    Solution solution;
    i64 cmax = 0;
    bool optimal = false;
    i64 nodes = 0;
    double wall_time = 0;  // seconds
};

class SpaceTooLargeError : public std::runtime_error {
public:
    explicit SpaceTooLargeError(const std::string& message)
        : std::runtime_error("SPACE_TOO_LARGE: " + message) {}
};

// Exhaustive reference solver: enumerates every set partition of each
// period class (rejecting oversized groups) and every interval assignment.
// Guarded by prod_u Bell(|T_u|) * |B_u|^|T_u| <= 1e7; throws
// SpaceTooLargeError beyond that. Always returns a true optimum.
SolveResult brute_force_oracle(const Instance& instance);

// Branch-and-bound over (task -> group, group -> interval) decisions with
// canonical partition labeling, equal-size interval ordering, and mass/row
// lower-bound pruning. Deterministic for fixed limits when node-budgeted.
// optimal is true only when the search space was exhausted (or the incumbent
// met a proven lower bound).
SolveResult solve_exact(const Instance& instance, const SolveLimits& limits = {});

}  // namespace ttg
