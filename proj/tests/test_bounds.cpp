#include <doctest.h>

#include "test_util.hpp"
#include "ttg/bounds.hpp"
#include "ttg/exact.hpp"

using namespace ttg;

TEST_CASE("upper_bound_problem builds one item per task") {
    ReducedProblem problem = upper_bound_problem(testutil::instance_a());
    CHECK(problem.kind == ReducedKind::UpperSingleton);
    REQUIRE(problem.items_by_period.size() == 2);
    REQUIRE(problem.items_by_period[0].size() == 1);
    CHECK(problem.items_by_period[0][0].size == 3);
    REQUIRE(problem.items_by_period[1].size() == 2);
    CHECK(problem.items_by_period[1][0].size == 2);
    CHECK(problem.items_by_period[1][1].size == 2);
}

TEST_CASE("upper_bound_problem with zero header keeps raw procs") {
    Instance instance = testutil::instance_a();
    instance.header_size = 0;
    ReducedProblem problem = upper_bound_problem(instance);
    CHECK(problem.items_by_period[0][0].size == 2);
    CHECK(problem.items_by_period[1][0].size == 1);
}

TEST_CASE("reduced problems of an instance with no tasks are empty") {
    Instance instance;
    instance.periods = {4};
    instance.header_size = 0;
    instance.max_group_size = 1;
    CHECK(upper_bound_problem(instance).items_by_period[0].empty());
    CHECK(lower_bound_problem(instance).items_by_period[0].empty());
}

TEST_CASE("reference instance bounds are both 5") {
    Instance instance = testutil::instance_a();
    ReducedResult upper = solve_reduced(upper_bound_problem(instance));
    CHECK(upper.value == 5);
    CHECK(upper.optimal);
    CHECK(check_solution(instance, upper.solution).ok);
    CHECK(evaluate(instance, upper.solution).cmax == 5);

    ReducedResult lower = solve_reduced(lower_bound_problem(instance));
    CHECK(lower.value == 5);
    CHECK(lower.optimal);
}

TEST_CASE("single item single interval") {
    Instance instance;
    instance.periods = {4};
    instance.header_size = 1;
    instance.max_group_size = 4;
    instance.tasks = {{"t", 4, 2}};
    ReducedResult result = solve_reduced(upper_bound_problem(instance));
    CHECK(result.value == 3);
}

TEST_CASE("lower bound with a single period merges everything") {
    Instance instance;
    instance.periods = {10};
    instance.header_size = 2;
    instance.max_group_size = 100;
    instance.tasks = {{"a", 10, 3}, {"b", 10, 4}, {"c", 10, 5}};
    ReducedResult result = solve_reduced(lower_bound_problem(instance));
    CHECK(result.value == 2 + 3 + 4 + 5);
}

TEST_CASE("analytic_lower_bound") {
    CHECK(analytic_lower_bound(testutil::instance_a()) == 3);

    Instance empty;
    empty.periods = {4};
    empty.header_size = 1;
    empty.max_group_size = 4;
    CHECK(analytic_lower_bound(empty) == 0);

    Instance single;
    single.periods = {8};
    single.header_size = 3;
    single.max_group_size = 10;
    single.tasks = {{"t", 8, 4}};
    CHECK(analytic_lower_bound(single) == 7);
}

TEST_CASE("bound sandwich on the micro suite") {
    for (int seed = 1; seed <= 25; seed++) {
        Instance instance = testutil::micro_instance(seed);
        BoundsReport bounds = compute_bounds(instance);
        REQUIRE(bounds.lower_optimal);
        REQUIRE(bounds.upper_optimal);
        SolveResult exact = brute_force_oracle(instance);
        CHECK(bounds.analytic_lower <= bounds.lower);
        CHECK(bounds.lower <= exact.cmax);
        CHECK(exact.cmax <= bounds.upper);
    }
}

TEST_CASE("bounds collapse when headers are free and capacity is loose") {
    for (int seed = 1; seed <= 15; seed++) {
        Instance instance = testutil::micro_instance(seed);
        instance.header_size = 0;
        i64 largest_class = 1;
        auto by_period = instance.tasks_by_period();
        for (const auto& tasks : by_period) {
            i64 total = 0;
            for (int t : tasks) total += instance.tasks[t].proc;
            largest_class = std::max(largest_class, total);
        }
        instance.max_group_size = largest_class;

        BoundsReport bounds = compute_bounds(instance);
        REQUIRE(bounds.lower_optimal);
        REQUIRE(bounds.upper_optimal);
        SolveResult exact = brute_force_oracle(instance);
        CHECK(bounds.lower == exact.cmax);
        CHECK(bounds.upper == exact.cmax);
    }
}
