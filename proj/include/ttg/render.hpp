#pragma once

#include "ttg/schedule.hpp"

namespace ttg {

struct RenderSpec {
    enum class Kind { Svg, Text };
    enum class ColorBy { Period, Group };

    Kind kind = Kind::Svg;
    double px_per_unit = 1.0;
    double row_height = 24.0;
    ColorBy color_by = ColorBy::Period;
    bool show_headers = true;
    i64 text_quantum = 0;  // time units per character; 0 picks ~64 cells per row
};

// Stacked-interval chart: one row of visual length T_0 per observation
// interval, group occurrences drawn at row-local offsets, gray header
// prefix when show_headers. Deterministic byte output for fixed inputs.
std::string render_gantt(const ScheduleTimeline& timeline, const Instance& instance,
                         const RenderSpec& spec = {});

}  // namespace ttg
