#include <doctest.h>

#include "test_util.hpp"
#include "ttg/render.hpp"

using namespace ttg;

TEST_CASE("svg places blocks at row-local offsets") {
    Instance instance = testutil::instance_a();
    ScheduleTimeline timeline = expand_start_times(instance, testutil::solution_a_star());
    RenderSpec spec;
    spec.px_per_unit = 10.0;
    const std::string svg = render_gantt(timeline, instance, spec);
    // row 0 blocks at 0 and 3; row 1 blocks at row-local 0 and 3.
    CHECK(svg.find("<rect x=\"0.00\" y=\"2.00\"") != std::string::npos);
    CHECK(svg.find("<rect x=\"30.00\" y=\"2.00\"") != std::string::npos);
    CHECK(svg.find("<rect x=\"0.00\" y=\"26.00\"") != std::string::npos);
    CHECK(svg.find("<rect x=\"30.00\" y=\"26.00\"") != std::string::npos);
    // gray header prefixes on
    CHECK(svg.find("#808080") != std::string::npos);
}

TEST_CASE("header prefixes can be hidden") {
    Instance instance = testutil::instance_a();
    ScheduleTimeline timeline = expand_start_times(instance, testutil::solution_a_star());
    RenderSpec spec;
    spec.show_headers = false;
    CHECK(render_gantt(timeline, instance, spec).find("#808080") == std::string::npos);
}

TEST_CASE("an instance with no tasks renders the row grid only") {
    Instance instance;
    instance.periods = {4, 8};
    instance.header_size = 1;
    instance.max_group_size = 4;
    ScheduleTimeline timeline = expand_start_times(instance, Solution{});
    const std::string svg = render_gantt(timeline, instance, RenderSpec{});
    CHECK(svg.find("<title>") == std::string::npos);
    CHECK(svg.find("#f7f7f7") != std::string::npos);

    RenderSpec text;
    text.kind = RenderSpec::Kind::Text;
    text.text_quantum = 1;
    CHECK(render_gantt(timeline, instance, text) ==
          "row 0 |....|\n"
          "row 1 |....|\n");
}

TEST_CASE("the demo header width prefixes every nonempty group") {
    Instance instance;
    instance.periods = {4000};
    instance.header_size = 90;
    instance.max_group_size = 600;
    instance.tasks = {{"s1", 4000, 60}, {"s2", 4000, 100}};
    Solution solution;
    solution.add_group(0, 0, {0, 1}, 0);
    ScheduleTimeline timeline = expand_start_times(instance, solution);
    RenderSpec spec;
    spec.px_per_unit = 1.0;
    const std::string svg = render_gantt(timeline, instance, spec);
    CHECK(svg.find("width=\"90.00\"") != std::string::npos);
}

TEST_CASE("text rendering marks headers and period glyphs") {
    Instance instance = testutil::instance_a();
    ScheduleTimeline timeline = expand_start_times(instance, testutil::solution_a_star());
    RenderSpec spec;
    spec.kind = RenderSpec::Kind::Text;
    spec.text_quantum = 1;
    CHECK(render_gantt(timeline, instance, spec) ==
          "row 0 |#aa#b|\n"
          "row 1 |#aa#b|\n");
}

TEST_CASE("rendering is deterministic") {
    Instance instance = testutil::instance_a();
    ScheduleTimeline timeline = expand_start_times(instance, testutil::solution_a_star());
    CHECK(render_gantt(timeline, instance, RenderSpec{}) ==
          render_gantt(timeline, instance, RenderSpec{}));
}

TEST_CASE("nonpositive dimensions are rejected") {
    Instance instance = testutil::instance_a();
    ScheduleTimeline timeline = expand_start_times(instance, testutil::solution_a_star());
    RenderSpec spec;
    spec.px_per_unit = 0;
    CHECK_THROWS_AS(render_gantt(timeline, instance, spec), std::invalid_argument);
}
