#pragma once

// Shared fixtures: the worked micro instance, the seeded micro suite used
// by the oracle-equivalence and bound tests, and a small LP-text parser
// that stays independent of the exporter's internals.

#include <charconv>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttg/instance.hpp"
#include "ttg/schedule.hpp"

namespace testutil {

using ttg::i64;

// Two periods {4, 8}, hs = 1, smax = 4, tasks 2@4, 1@8, 1@8.
// Optimal cmax is 5: full enumeration shows grouping the two period-8
// tasks costs 6, splitting them across intervals costs 5.
inline ttg::Instance instance_a() {
    ttg::Instance instance;
    instance.periods = {4, 8};
    instance.header_size = 1;
    instance.max_group_size = 4;
    instance.tasks = {{"t1", 4, 2}, {"t2", 8, 1}, {"t3", 8, 1}};
    return instance;
}

// t1 alone at interval 0; t2, t3 in singleton groups at intervals 0 and 1.
inline ttg::Solution solution_a_star() {
    ttg::Solution solution;
    solution.add_group(0, 0, {0}, 0);
    solution.add_group(1, 0, {1}, 0);
    solution.add_group(1, 1, {2}, 1);
    return solution;
}

// Micro suite: n <= 8 tasks, r <= 2 periods with multiplier 2 (keeps the
// oracle enumeration guard satisfied for every split of 8 tasks),
// proc <= 10, hs <= 3, smax alternating between tight and huge. The base
// period 128 dominates any reachable group size (3 + 8*10), so the model's
// T_0-based contribution links stay sound on this suite.
inline ttg::GeneratorParams micro_params(int seed) {
    ttg::GeneratorParams params;
    params.task_count = 1 + seed % 8;
    params.period_count = 1 + seed % 2;
    params.base_period = 128;
    params.multiplier_choices = {2};
    params.proc_min = 1;
    params.proc_max = 10;
    params.header_size = seed % 4;
    params.max_group_size = seed % 2 == 0 ? params.header_size + 10 : 1000;
    return params;
}

inline ttg::Instance micro_instance(int seed) {
    return ttg::generate_instance(micro_params(seed), static_cast<std::uint64_t>(seed));
}

// Large-scale suite parameters (up to 600 tasks, 6 periods).
inline ttg::GeneratorParams large_params(int seed) {
    ttg::GeneratorParams params;
    params.task_count = 50 + (seed * 37) % 551;
    params.period_count = 1 + seed % 6;
    params.base_period = 1000;
    params.multiplier_choices = {2, 3, 4};
    params.proc_min = 1;
    params.proc_max = 100;
    params.header_size = (seed * 13) % 120;
    params.max_group_size = params.header_size + 50 + seed % 300;
    return params;
}

// ---------------------------------------------------------------------
// Minimal LP-text reader for the dialect the exporter writes.
// ---------------------------------------------------------------------

struct LpTerm {
    i64 coef = 0;
    std::string var;
};

struct LpConstraint {
    std::string label;
    std::vector<LpTerm> terms;
    std::string relation;  // <=, >=, =
    i64 rhs = 0;
};

struct LpModel {
    std::vector<LpConstraint> constraints;
    std::vector<std::string> generals;
    std::vector<std::string> binaries;
};

inline std::vector<std::string> lp_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') i++;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ') i++;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

inline bool lp_integer(const std::string& token, i64& value) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

inline LpModel parse_lp(const std::string& text) {
    LpModel model;
    enum class Section { None, Objective, Constraints, Bounds, Generals, Binaries };
    Section section = Section::None;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line[0] == '\\') continue;

        if (line == "Minimize" || line == "Maximize") {
            section = Section::Objective;
            continue;
        }
        if (line == "Subject To") {
            section = Section::Constraints;
            continue;
        }
        if (line == "Bounds") {
            section = Section::Bounds;
            continue;
        }
        if (line == "Generals") {
            section = Section::Generals;
            continue;
        }
        if (line == "Binaries") {
            section = Section::Binaries;
            continue;
        }
        if (line == "End") break;

        auto tokens = lp_tokens(line);
        if (tokens.empty()) continue;
        if (section == Section::Generals) {
            model.generals.push_back(tokens.at(0));
            continue;
        }
        if (section == Section::Binaries) {
            model.binaries.push_back(tokens.at(0));
            continue;
        }
        if (section != Section::Constraints) continue;

        LpConstraint constraint;
        if (tokens[0].back() != ':') throw std::runtime_error("constraint without label: " + line);
        constraint.label = tokens[0].substr(0, tokens[0].size() - 1);

        i64 sign = 1;
        bool have_coef = false;
        i64 coef = 1;
        for (std::size_t t = 1; t < tokens.size(); t++) {
            const std::string& token = tokens[t];
            if (token == "+") {
                sign = 1;
            } else if (token == "-") {
                sign = -1;
            } else if (token == "<=" || token == ">=" || token == "=") {
                constraint.relation = token;
                i64 rhs = 0;
                if (t + 1 >= tokens.size() || !lp_integer(tokens[t + 1], rhs)) {
                    throw std::runtime_error("bad rhs in: " + line);
                }
                constraint.rhs = rhs;
                break;
            } else {
                i64 value = 0;
                if (lp_integer(token, value)) {
                    coef = value;
                    have_coef = true;
                } else {
                    constraint.terms.push_back({sign * (have_coef ? coef : 1), token});
                    sign = 1;
                    coef = 1;
                    have_coef = false;
                }
            }
        }
        if (constraint.relation.empty()) throw std::runtime_error("constraint without relation: " + line);
        model.constraints.push_back(std::move(constraint));
    }
    return model;
}

// Family of a constraint label ("assign_0_1" -> "assign").
inline std::string lp_family(const std::string& label) {
    const auto underscore = label.find('_');
    return underscore == std::string::npos ? label : label.substr(0, underscore);
}

}  // namespace testutil
