#include "ttg/render.hpp"

#include <algorithm>
#include <cstdio>

namespace ttg {

namespace {

constexpr const char* kPalette[] = {
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
    "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
constexpr const char* kHeaderFill = "#808080";

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

std::string render_svg(const ScheduleTimeline& timeline, const Instance& instance,
                       const RenderSpec& spec) {
    const i64 base = instance.periods.empty() ? 0 : instance.periods.front();
    const i64 rows = timeline.row_count;

    i64 max_extent = base;
    for (const Occurrence& occ : timeline.occurrences) {
        max_extent = std::max(max_extent, occ.end - occ.row * base);
    }
    const double width = std::max(1.0, static_cast<double>(max_extent) * spec.px_per_unit);
    const double height = std::max(1.0, static_cast<double>(rows) * spec.row_height);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";

    for (i64 row = 0; row < rows; row++) {
        out += "<rect x=\"0\" y=\"" + fmt(static_cast<double>(row) * spec.row_height) + "\" width=\"" +
               fmt(width) + "\" height=\"" + fmt(spec.row_height) + "\" fill=\"" +
               (row % 2 == 0 ? "#f7f7f7" : "#efefef") + "\"/>\n";
    }

    const double inset = std::min(2.0, spec.row_height / 8.0);
    for (const Occurrence& occ : timeline.occurrences) {
        const double x = static_cast<double>(occ.start - occ.row * base) * spec.px_per_unit;
        const double y = static_cast<double>(occ.row) * spec.row_height + inset;
        const double w = static_cast<double>(occ.end - occ.start) * spec.px_per_unit;
        const double h = spec.row_height - 2 * inset;
        const std::size_t color_key =
            spec.color_by == RenderSpec::ColorBy::Period
                ? static_cast<std::size_t>(occ.period_index)
                : static_cast<std::size_t>(occ.period_index * 31 + occ.group_id);
        out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
               fmt(h) + "\" fill=\"" + kPalette[color_key % kPaletteSize] +
               "\" stroke=\"#333333\" stroke-width=\"0.5\"><title>g(" +
               std::to_string(occ.period_index) + "," + std::to_string(occ.group_id) + ") m=" +
               std::to_string(occ.occurrence) + "</title></rect>\n";
        if (spec.show_headers && instance.header_size > 0) {
            const double hw = static_cast<double>(instance.header_size) * spec.px_per_unit;
            out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(hw) +
                   "\" height=\"" + fmt(h) + "\" fill=\"" + kHeaderFill + "\"/>\n";
        }
    }

    // Capacity boundary at T_0.
    if (base > 0) {
        const double x = static_cast<double>(base) * spec.px_per_unit;
        out += "<line x1=\"" + fmt(x) + "\" y1=\"0\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(height) +
               "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 2\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string render_text(const ScheduleTimeline& timeline, const Instance& instance,
                        const RenderSpec& spec) {
    const i64 base = instance.periods.empty() ? 0 : instance.periods.front();
    const i64 rows = timeline.row_count;
    const i64 quantum = spec.text_quantum > 0 ? spec.text_quantum : std::max<i64>(1, base / 64);

    std::vector<i64> extent(static_cast<std::size_t>(rows), base);
    for (const Occurrence& occ : timeline.occurrences) {
        auto& e = extent[static_cast<std::size_t>(occ.row)];
        e = std::max(e, occ.end - occ.row * base);
    }

    std::vector<std::string> lines;
    for (i64 row = 0; row < rows; row++) {
        lines.emplace_back(static_cast<std::size_t>(ceil_div(extent[static_cast<std::size_t>(row)], quantum)),
                           '.');
    }
    for (const Occurrence& occ : timeline.occurrences) {
        std::string& line = lines[static_cast<std::size_t>(occ.row)];
        const i64 local_start = occ.start - occ.row * base;
        const i64 local_end = occ.end - occ.row * base;
        const i64 header_end =
            spec.show_headers ? std::min(local_start + instance.header_size, local_end) : local_start;
        const char glyph = static_cast<char>(
            'a' + (spec.color_by == RenderSpec::ColorBy::Period ? occ.period_index : occ.group_id) % 26);
        for (i64 cell = local_start / quantum; cell < ceil_div(local_end, quantum); cell++) {
            const i64 cell_start = cell * quantum;
            line[static_cast<std::size_t>(cell)] = cell_start < header_end ? '#' : glyph;
        }
    }

    std::string out;
    for (i64 row = 0; row < rows; row++) {
        out += "row " + std::to_string(row) + " |" + lines[static_cast<std::size_t>(row)] + "|\n";
    }
    return out;
}

}  // namespace

std::string render_gantt(const ScheduleTimeline& timeline, const Instance& instance,
                         const RenderSpec& spec) {
    if (spec.px_per_unit <= 0 || spec.row_height <= 0) {
        throw std::invalid_argument("render_gantt: dimensions must be positive");
    }
    if (spec.kind == RenderSpec::Kind::Text) return render_text(timeline, instance, spec);
    return render_svg(timeline, instance, spec);
}

}  // namespace ttg
