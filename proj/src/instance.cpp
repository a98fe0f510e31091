#include "ttg/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ttg {

namespace {

// splitmix64; fixed algorithm so generated instances are identical across
// compilers and standard libraries.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    i64 range(i64 lo, i64 hi) {  // inclusive
        return lo + static_cast<i64>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

i64 parse_int_token(std::string_view token, int line, const std::string& what) {
    i64 value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("BAD_VALUE", line, what + " is not an integer: '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) i++;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') i++;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

}  // namespace

const char* code_name(Code code) {
    switch (code) {
        case Code::NonHarmonic: return "NON_HARMONIC";
        case Code::TaskTooLarge: return "TASK_TOO_LARGE";
        case Code::BadPeriodRef: return "BAD_PERIOD_REF";
        case Code::DuplicateId: return "DUPLICATE_ID";
        case Code::EmptyPeriodClass: return "EMPTY_PERIOD_CLASS";
        case Code::NotPartition: return "NOT_PARTITION";
        case Code::IntervalOutOfRange: return "INTERVAL_OUT_OF_RANGE";
        case Code::GroupTooLarge: return "GROUP_TOO_LARGE";
        case Code::MixedPeriodGroup: return "MIXED_PERIOD_GROUP";
        case Code::UnassignedNonemptyGroup: return "UNASSIGNED_NONEMPTY_GROUP";
    }
    return "UNKNOWN";
}

bool ValidationReport::has(Code code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [code](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const Violation& v : violations) {
        out += v.warning ? "warning " : "error ";
        out += code_name(v.code);
        out += ": ";
        out += v.message;
        out += '\n';
    }
    return out;
}

ParseError::ParseError(std::string code, int line, const std::string& message)
    : std::runtime_error(code + (line > 0 ? " (line " + std::to_string(line) + "): " : ": ") + message),
      code_(std::move(code)),
      line_(line) {}

int Instance::period_index(i64 period) const {
    auto it = std::lower_bound(periods.begin(), periods.end(), period);
    if (it == periods.end() || *it != period) return -1;
    return static_cast<int>(it - periods.begin());
}

std::optional<int> Instance::task_index(std::string_view id) const {
    for (std::size_t i = 0; i < tasks.size(); i++) {
        if (tasks[i].id == id) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::vector<std::vector<int>> Instance::tasks_by_period() const {
    std::vector<std::vector<int>> by_period(periods.size());
    for (std::size_t i = 0; i < tasks.size(); i++) {
        int u = period_index(tasks[i].period);
        if (u >= 0) by_period[u].push_back(static_cast<int>(i));
    }
    return by_period;
}

ValidationReport validate(const Instance& instance) {
    ValidationReport report;
    auto error = [&report](Code code, std::string message) {
        report.violations.push_back({code, std::move(message), false});
        report.ok = false;
    };
    auto warn = [&report](Code code, std::string message) {
        report.violations.push_back({code, std::move(message), true});
    };

    for (std::size_t u = 0; u < instance.periods.size(); u++) {
        if (instance.periods[u] <= 0) {
            error(Code::NonHarmonic, "period " + std::to_string(instance.periods[u]) + " is not positive");
        }
        if (u == 0) continue;
        i64 prev = instance.periods[u - 1];
        i64 cur = instance.periods[u];
        if (prev > 0 && cur % prev != 0) {
            error(Code::NonHarmonic,
                  "period " + std::to_string(cur) + " is not a multiple of " + std::to_string(prev));
        } else if (cur <= prev) {
            error(Code::NonHarmonic, "periods are not strictly increasing at " + std::to_string(cur));
        }
    }

    std::map<std::string_view, int> seen;
    for (std::size_t i = 0; i < instance.tasks.size(); i++) {
        const TaskSpec& task = instance.tasks[i];
        auto [it, inserted] = seen.emplace(task.id, static_cast<int>(i));
        if (!inserted) {
            error(Code::DuplicateId, "task id '" + task.id + "' appears more than once");
        }
        if (instance.period_index(task.period) < 0) {
            error(Code::BadPeriodRef,
                  "task '" + task.id + "' references period " + std::to_string(task.period) +
                      " which is not in the period set");
        }
        if (instance.header_size + task.proc > instance.max_group_size) {
            error(Code::TaskTooLarge,
                  "task '" + task.id + "' cannot fit in any group: header " +
                      std::to_string(instance.header_size) + " + proc " + std::to_string(task.proc) +
                      " > smax " + std::to_string(instance.max_group_size));
        }
    }

    auto by_period = instance.tasks_by_period();
    for (std::size_t u = 0; u < by_period.size(); u++) {
        if (by_period[u].empty()) {
            warn(Code::EmptyPeriodClass, "no task has period " + std::to_string(instance.periods[u]));
        }
    }
    return report;
}

PeriodStructure derive_period_structure(const Instance& instance) {
    PeriodStructure ps;
    if (instance.periods.empty()) return ps;

    const i64 base = instance.periods.front();
    if (base <= 0) throw std::invalid_argument("base period must be positive");
    ps.interval_counts.push_back(1);
    for (std::size_t u = 1; u < instance.periods.size(); u++) {
        i64 prev = instance.periods[u - 1];
        i64 cur = instance.periods[u];
        if (cur % prev != 0 || cur <= prev) {
            throw std::invalid_argument("periods are not harmonic: " + std::to_string(cur) +
                                        " after " + std::to_string(prev));
        }
        ps.multipliers.push_back(cur / prev);
        ps.interval_counts.push_back(cur / base);
    }
    ps.hyperperiod = instance.periods.back();
    ps.row_count = ps.interval_counts.back();
    return ps;
}

Instance parse_instance(std::istream& in) {
    Instance instance;
    bool have_hs = false, have_smax = false, have_periods = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        std::string_view keyword = fields[0];
        if (keyword == "hs") {
            if (have_hs) throw ParseError("DUPLICATE_FIELD", line_no, "hs given twice");
            if (fields.size() != 2) throw ParseError("SYNTAX", line_no, "expected: hs <int>");
            instance.header_size = parse_int_token(fields[1], line_no, "hs");
            if (instance.header_size < 0) throw ParseError("BAD_VALUE", line_no, "hs must be >= 0");
            have_hs = true;
        } else if (keyword == "smax") {
            if (have_smax) throw ParseError("DUPLICATE_FIELD", line_no, "smax given twice");
            if (fields.size() != 2) throw ParseError("SYNTAX", line_no, "expected: smax <int>");
            instance.max_group_size = parse_int_token(fields[1], line_no, "smax");
            if (instance.max_group_size < 1) throw ParseError("BAD_VALUE", line_no, "smax must be >= 1");
            have_smax = true;
        } else if (keyword == "periods") {
            if (have_periods) throw ParseError("DUPLICATE_FIELD", line_no, "periods given twice");
            for (std::size_t f = 1; f < fields.size(); f++) {
                i64 p = parse_int_token(fields[f], line_no, "period");
                if (p < 1) throw ParseError("BAD_VALUE", line_no, "periods must be >= 1");
                instance.periods.push_back(p);
            }
            have_periods = true;
        } else if (keyword == "task") {
            if (fields.size() != 4) throw ParseError("SYNTAX", line_no, "expected: task <id> <period> <proc>");
            TaskSpec task;
            task.id = std::string(fields[1]);
            task.period = parse_int_token(fields[2], line_no, "task period");
            task.proc = parse_int_token(fields[3], line_no, "task proc");
            if (task.period < 1) throw ParseError("BAD_VALUE", line_no, "task period must be >= 1");
            if (task.proc < 1) throw ParseError("BAD_VALUE", line_no, "task proc must be >= 1");
            instance.tasks.push_back(std::move(task));
        } else {
            throw ParseError("UNKNOWN_KEYWORD", line_no, "unknown keyword '" + std::string(keyword) + "'");
        }
    }

    if (!have_hs) throw ParseError("MISSING_FIELD", 0, "missing 'hs' line");
    if (!have_smax) throw ParseError("MISSING_FIELD", 0, "missing 'smax' line");
    if (!have_periods) throw ParseError("MISSING_FIELD", 0, "missing 'periods' line");

    std::stable_sort(instance.periods.begin(), instance.periods.end());
    return instance;
}

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

Instance parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("SYNTAX", 0, "cannot open instance file '" + path + "'");
    return parse_instance(in);
}

std::string serialize_instance(const Instance& instance) {
    std::string out;
    out += "hs " + std::to_string(instance.header_size) + "\n";
    out += "smax " + std::to_string(instance.max_group_size) + "\n";
    out += "periods";
    for (i64 p : instance.periods) out += " " + std::to_string(p);
    out += "\n";
    for (const TaskSpec& task : instance.tasks) {
        out += "task " + task.id + " " + std::to_string(task.period) + " " + std::to_string(task.proc) + "\n";
    }
    return out;
}

Instance generate_instance(const GeneratorParams& params, std::uint64_t seed) {
    if (params.task_count < 1 || params.task_count > 10000) {
        throw std::invalid_argument("task_count must be in [1, 10000]");
    }
    if (params.period_count < 1 || params.period_count > 6) {
        throw std::invalid_argument("period_count must be in [1, 6]");
    }
    if (params.base_period < 1) throw std::invalid_argument("base_period must be >= 1");
    if (params.proc_min < 1 || params.proc_min > params.proc_max) {
        throw std::invalid_argument("need 1 <= proc_min <= proc_max");
    }
    if (params.header_size < 0) throw std::invalid_argument("header_size must be >= 0");
    if (params.header_size + params.proc_min > params.max_group_size) {
        throw std::invalid_argument("unsatisfiable: header_size + proc_min > max_group_size");
    }
    if (params.period_count > 1) {
        if (params.multiplier_choices.empty()) {
            throw std::invalid_argument("multiplier_choices must not be empty");
        }
        for (i64 m : params.multiplier_choices) {
            if (m < 2 || m > 4) throw std::invalid_argument("multiplier_choices must be within {2,3,4}");
        }
    }
    if (!params.period_weights.empty()) {
        if (static_cast<int>(params.period_weights.size()) != params.period_count) {
            throw std::invalid_argument("period_weights size must equal period_count");
        }
        double sum = 0;
        for (double w : params.period_weights) {
            if (w < 0) throw std::invalid_argument("period_weights must be nonnegative");
            sum += w;
        }
        if (sum <= 0) throw std::invalid_argument("period_weights must not sum to zero");
    }

    Rng rng(seed);
    Instance instance;
    instance.header_size = params.header_size;
    instance.max_group_size = params.max_group_size;

    instance.periods.push_back(params.base_period);
    for (int u = 1; u < params.period_count; u++) {
        i64 mult = params.multiplier_choices[rng.below(params.multiplier_choices.size())];
        instance.periods.push_back(instance.periods.back() * mult);
    }

    // Any proc above this would trip TASK_TOO_LARGE, so draw directly from
    // the admissible range.
    const i64 proc_cap = std::min(params.proc_max, params.max_group_size - params.header_size);

    instance.tasks.reserve(params.task_count);
    for (int i = 0; i < params.task_count; i++) {
        int u;
        if (params.period_weights.empty()) {
            u = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.period_count)));
        } else {
            double total = 0;
            for (double w : params.period_weights) total += w;
            double x = rng.unit() * total;
            u = params.period_count - 1;
            double acc = 0;
            for (int v = 0; v < params.period_count; v++) {
                acc += params.period_weights[v];
                if (x < acc) {
                    u = v;
                    break;
                }
            }
        }
        TaskSpec task;
        task.id = "t" + std::to_string(i + 1);
        task.period = instance.periods[u];
        task.proc = rng.range(params.proc_min, proc_cap);
        instance.tasks.push_back(std::move(task));
    }
    return instance;
}

}  // namespace ttg
