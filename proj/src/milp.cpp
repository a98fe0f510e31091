#include "ttg/milp.hpp"

#include <algorithm>

namespace ttg {

namespace {

void require_valid(const Instance& instance, const char* op) {
    ValidationReport report = validate(instance);
    if (!report.ok) {
        throw std::invalid_argument(std::string(op) + ": invalid instance:\n" + report.to_string());
    }
}

std::string var_x(std::size_t u, std::size_t i, std::size_t j) {
    return "x_" + std::to_string(u) + "_" + std::to_string(i) + "_" + std::to_string(j);
}
std::string var_z(std::size_t u, std::size_t j) {
    return "z_" + std::to_string(u) + "_" + std::to_string(j);
}
std::string var_s(std::size_t u, std::size_t j) {
    return "s_" + std::to_string(u) + "_" + std::to_string(j);
}
std::string var_y(std::size_t u, std::size_t j, i64 k) {
    return "y_" + std::to_string(u) + "_" + std::to_string(j) + "_" + std::to_string(k);
}
std::string var_c(std::size_t u, std::size_t j, i64 k) {
    return "c_" + std::to_string(u) + "_" + std::to_string(j) + "_" + std::to_string(k);
}
std::string var_p(std::size_t u, i64 k) {
    return "p_" + std::to_string(u) + "_" + std::to_string(k);
}

// Linear expression printer for the fixed-keyword LP dialect; one
// constraint per line, coefficient omitted when 1.
struct LpLine {
    std::string text;
    bool first = true;

    explicit LpLine(const std::string& label) : text(" " + label + ":") {}

    void term(i64 coef, const std::string& var) {
        if (coef == 0) return;
        if (first) {
            text += coef < 0 ? " - " : " ";
            first = false;
        } else {
            text += coef < 0 ? " - " : " + ";
        }
        const i64 mag = coef < 0 ? -coef : coef;
        if (mag != 1) text += std::to_string(mag) + " ";
        text += var;
    }

    std::string done(const char* relation, i64 rhs) {
        if (first) text += " 0";  // degenerate all-zero expression
        return text + " " + relation + " " + std::to_string(rhs) + "\n";
    }
};

}  // namespace

ModelStats model_statistics(const Instance& instance, const LpOptions& options) {
    require_valid(instance, "model_statistics");
    const PeriodStructure ps = derive_period_structure(instance);
    const auto by_period = instance.tasks_by_period();

    ModelStats stats;
    for (std::size_t u = 0; u < by_period.size(); u++) {
        const i64 n_u = static_cast<i64>(by_period[u].size());
        const i64 b_u = ps.interval_counts[u];
        stats.x_vars += n_u * n_u;
        stats.z_vars += n_u;
        stats.s_vars += n_u;
        stats.y_vars += n_u * b_u;
        stats.c_vars += n_u * b_u;
        stats.p_vars += b_u;

        stats.assign_rows += n_u;
        stats.zlink_rows += n_u;
        stats.sdef_rows += n_u;
        stats.scap_rows += n_u;
        stats.gsched_rows += n_u;
        stats.cup_rows += n_u * b_u;
        stats.ccap_rows += n_u * b_u;
        stats.clow_rows += n_u * b_u;
        stats.pdef_rows += b_u;

        i64 big_m = 0;
        if (options.literal_bigm) {
            big_m = n_u;
        } else {
            for (int t : by_period[u]) big_m += instance.tasks[t].proc;
        }
        stats.zlink_bigm.push_back(big_m);
    }
    stats.cmax_rows = ps.row_count;
    if (!instance.periods.empty()) {
        stats.clink_bigm = instance.periods.front();
        stats.smax_exceeds_t0 = instance.max_group_size > instance.periods.front();
    }
    return stats;
}

std::string export_lp(const Instance& instance, const LpOptions& options) {
    require_valid(instance, "export_lp");
    const PeriodStructure ps = derive_period_structure(instance);
    const auto by_period = instance.tasks_by_period();
    const ModelStats stats = model_statistics(instance, options);
    const i64 t0 = instance.periods.empty() ? 0 : instance.periods.front();

    std::string out;
    out += "\\ grouped periodic scheduling model\n";
    if (stats.smax_exceeds_t0) {
        out += "\\ warning: smax " + std::to_string(instance.max_group_size) +
               " exceeds the shortest period " + std::to_string(t0) +
               "; the contribution link c <= T0 y assumes group sizes <= T0\n";
    }
    out += "Minimize\n obj: Cmax\nSubject To\n";

    for (std::size_t u = 0; u < by_period.size(); u++) {
        const std::size_t n_u = by_period[u].size();
        const i64 b_u = ps.interval_counts[u];
        const std::string us = std::to_string(u);

        for (std::size_t i = 0; i < n_u; i++) {
            LpLine line("assign_" + us + "_" + std::to_string(i));
            for (std::size_t j = 0; j < n_u; j++) line.term(1, var_x(u, i, j));
            out += line.done("=", 1);
        }
        for (std::size_t j = 0; j < n_u; j++) {
            const std::string js = std::to_string(j);
            {
                LpLine line("zlink_" + us + "_" + js);
                for (std::size_t i = 0; i < n_u; i++) {
                    line.term(instance.tasks[by_period[u][i]].proc, var_x(u, i, j));
                }
                line.term(-stats.zlink_bigm[u], var_z(u, j));
                out += line.done("<=", 0);
            }
            {
                LpLine line("sdef_" + us + "_" + js);
                line.term(1, var_s(u, j));
                line.term(-instance.header_size, var_z(u, j));
                for (std::size_t i = 0; i < n_u; i++) {
                    line.term(-instance.tasks[by_period[u][i]].proc, var_x(u, i, j));
                }
                out += line.done("=", 0);
            }
            {
                LpLine line("scap_" + us + "_" + js);
                line.term(1, var_s(u, j));
                out += line.done("<=", instance.max_group_size);
            }
            {
                LpLine line("gsched_" + us + "_" + js);
                for (i64 k = 0; k < b_u; k++) line.term(1, var_y(u, j, k));
                out += line.done("=", 1);
            }
            for (i64 k = 0; k < b_u; k++) {
                const std::string suffix = us + "_" + js + "_" + std::to_string(k);
                {
                    LpLine line("cup_" + suffix);
                    line.term(1, var_c(u, j, k));
                    line.term(-1, var_s(u, j));
                    out += line.done("<=", 0);
                }
                {
                    LpLine line("ccap_" + suffix);
                    line.term(1, var_c(u, j, k));
                    line.term(-t0, var_y(u, j, k));
                    out += line.done("<=", 0);
                }
                {
                    LpLine line("clow_" + suffix);
                    line.term(1, var_c(u, j, k));
                    line.term(-1, var_s(u, j));
                    line.term(-t0, var_y(u, j, k));
                    out += line.done(">=", -t0);
                }
            }
        }
        for (i64 k = 0; k < b_u; k++) {
            LpLine line("pdef_" + us + "_" + std::to_string(k));
            line.term(1, var_p(u, k));
            for (std::size_t j = 0; j < n_u; j++) line.term(-1, var_c(u, j, k));
            out += line.done("=", 0);
        }
    }

    for (i64 k = 0; k < ps.row_count; k++) {
        LpLine line("cmax_" + std::to_string(k));
        for (std::size_t u = 0; u < by_period.size(); u++) {
            line.term(1, var_p(u, k % ps.interval_counts[u]));
        }
        line.term(-1, "Cmax");
        out += line.done("<=", 0);
    }

    out += "Generals\n Cmax\n";
    for (std::size_t u = 0; u < by_period.size(); u++) {
        for (std::size_t j = 0; j < by_period[u].size(); j++) out += " " + var_s(u, j) + "\n";
        for (std::size_t j = 0; j < by_period[u].size(); j++) {
            for (i64 k = 0; k < ps.interval_counts[u]; k++) out += " " + var_c(u, j, k) + "\n";
        }
        for (i64 k = 0; k < ps.interval_counts[u]; k++) out += " " + var_p(u, k) + "\n";
    }
    out += "Binaries\n";
    for (std::size_t u = 0; u < by_period.size(); u++) {
        const std::size_t n_u = by_period[u].size();
        for (std::size_t i = 0; i < n_u; i++) {
            for (std::size_t j = 0; j < n_u; j++) out += " " + var_x(u, i, j) + "\n";
        }
        for (std::size_t j = 0; j < n_u; j++) out += " " + var_z(u, j) + "\n";
        for (std::size_t j = 0; j < n_u; j++) {
            for (i64 k = 0; k < ps.interval_counts[u]; k++) out += " " + var_y(u, j, k) + "\n";
        }
    }
    out += "End\n";
    return out;
}

std::map<std::string, i64> solution_to_model_assignment(const Instance& instance,
                                                        const Solution& solution) {
    const Evaluation eval = evaluate(instance, solution);  // also enforces check_solution
    const PeriodStructure ps = derive_period_structure(instance);
    const auto by_period = instance.tasks_by_period();

    // Nonempty groups take the leading model slots of their period, ordered
    // by group id; there are at most |T_u| of them.
    std::vector<std::vector<std::size_t>> slot_groups(instance.periods.size());
    for (std::size_t u = 0; u < slot_groups.size(); u++) {
        for (std::size_t g = 0; g < solution.groups.size(); g++) {
            if (solution.groups[g].period_index == static_cast<int>(u) && !solution.groups[g].empty()) {
                slot_groups[u].push_back(g);
            }
        }
        std::sort(slot_groups[u].begin(), slot_groups[u].end(), [&solution](std::size_t a, std::size_t b) {
            return solution.groups[a].group_id < solution.groups[b].group_id;
        });
    }

    std::map<std::string, i64> values;
    values["Cmax"] = eval.cmax;
    for (std::size_t u = 0; u < by_period.size(); u++) {
        const std::size_t n_u = by_period[u].size();
        std::vector<int> position_of(instance.tasks.size(), -1);
        for (std::size_t i = 0; i < n_u; i++) position_of[by_period[u][i]] = static_cast<int>(i);

        for (std::size_t j = 0; j < n_u; j++) {
            const bool used = j < slot_groups[u].size();
            const std::size_t g = used ? slot_groups[u][j] : 0;
            const i64 size = used ? group_size(instance, solution.groups[g].members) : 0;
            const i64 interval = used ? solution.assignment[g] : 0;

            values[var_z(u, j)] = used ? 1 : 0;
            values[var_s(u, j)] = size;
            for (std::size_t i = 0; i < n_u; i++) values[var_x(u, i, j)] = 0;
            if (used) {
                for (int t : solution.groups[g].members) values[var_x(u, position_of[t], j)] = 1;
            }
            for (i64 k = 0; k < ps.interval_counts[u]; k++) {
                const bool here = k == interval;
                values[var_y(u, j, k)] = here ? 1 : 0;
                values[var_c(u, j, k)] = here ? size : 0;
            }
        }
        for (i64 k = 0; k < ps.interval_counts[u]; k++) {
            values[var_p(u, k)] = eval.period_loads[u][static_cast<std::size_t>(k)];
        }
    }
    return values;
}

}  // namespace ttg
