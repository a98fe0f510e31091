#pragma once

#include <map>

#include "ttg/schedule.hpp"

namespace ttg {

struct LpOptions {
    // Reproduce the |T_u| linking coefficient between payload and group-use
    // indicator instead of the sound sum-of-processing-times big-M.
    bool literal_bigm = false;
};

// Closed-form variable/constraint counts of the exported model.
struct ModelStats {
    i64 x_vars = 0;  // task -> group membership, sum over u of |T_u|^2
    i64 z_vars = 0;  // group nonempty indicators
    i64 s_vars = 0;  // group sizes
    i64 y_vars = 0;  // group -> interval, sum over u of |T_u| * |B_u|
    i64 c_vars = 0;  // per-interval contributions
    i64 p_vars = 0;  // per-period interval loads, sum over u of |B_u|

    i64 assign_rows = 0;  // one per task
    i64 zlink_rows = 0;   // one per group slot
    i64 sdef_rows = 0;
    i64 scap_rows = 0;
    i64 gsched_rows = 0;
    i64 cup_rows = 0;  // c <= s
    i64 ccap_rows = 0;  // c <= T_0 y
    i64 clow_rows = 0;  // c >= s - T_0 (1 - y)
    i64 pdef_rows = 0;
    i64 cmax_rows = 0;  // one per stacked row

    std::vector<i64> zlink_bigm;  // per period
    i64 clink_bigm = 0;           // T_0
    bool smax_exceeds_t0 = false;
};

// LP-format text (Minimize / Subject To / Generals / Binaries / End) of the
// full grouping model. Variables are named x_u_i_j, z_u_j, s_u_j, y_u_j_k,
// c_u_j_k, p_u_k, Cmax, with u the period index, i the task's position
// within its period class, j the group slot, and k the interval; see the
// README for the full scheme. Requires validate(instance).ok.
std::string export_lp(const Instance& instance, const LpOptions& options = {});

ModelStats model_statistics(const Instance& instance, const LpOptions& options = {});

// Values for every model variable encoding `solution`; the Cmax entry is
// evaluate(...).cmax. Empty group slots get z = 0, s = 0 and park at
// interval 0, matching the model's convention that every slot is scheduled.
std::map<std::string, i64> solution_to_model_assignment(const Instance& instance,
                                                        const Solution& solution);

}  // namespace ttg
