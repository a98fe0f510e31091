#include <doctest.h>

#include "test_util.hpp"
#include "ttg/exact.hpp"
#include "ttg/heuristic.hpp"

using namespace ttg;

TEST_CASE("greedy yields a valid solution within the hand-enumerated range") {
    Instance instance = testutil::instance_a();
    Solution solution = construct_greedy(instance);
    CHECK(check_solution(instance, solution).ok);
    CHECK(evaluate(instance, solution).cmax <= 6);
}

TEST_CASE("greedy groups three unit tasks into one message") {
    Instance instance;
    instance.periods = {4};
    instance.header_size = 1;
    instance.max_group_size = 5;
    instance.tasks = {{"a", 4, 1}, {"b", 4, 1}, {"c", 4, 1}};
    Solution solution = construct_greedy(instance);
    REQUIRE(solution.groups.size() == 1);
    CHECK(evaluate(instance, solution).cmax == 4);
}

TEST_CASE("greedy on an instance with no tasks") {
    Instance instance;
    instance.periods = {4};
    instance.header_size = 1;
    instance.max_group_size = 4;
    Solution solution = construct_greedy(instance);
    CHECK(solution.groups.empty());
    CHECK(evaluate(instance, solution).cmax == 0);
}

TEST_CASE("local search escapes the grouped local optimum of the reference instance") {
    Instance instance = testutil::instance_a();
    Solution start;
    start.add_group(0, 0, {0}, 0);
    start.add_group(1, 0, {1, 2}, 0);  // cmax 6
    REQUIRE(evaluate(instance, start).cmax == 6);
    Solution improved = local_search(instance, start);
    CHECK(check_solution(instance, improved).ok);
    CHECK(evaluate(instance, improved).cmax == 5);
}

TEST_CASE("local search never worsens an optimal start") {
    Instance instance = testutil::instance_a();
    SolveResult oracle = brute_force_oracle(instance);
    Solution result = local_search(instance, oracle.solution);
    CHECK(evaluate(instance, result).cmax == oracle.cmax);
}

TEST_CASE("zero budget returns the start unchanged") {
    Instance instance = testutil::instance_a();
    Solution start = testutil::solution_a_star();
    LocalSearchConfig config;
    config.max_iterations = 0;
    CHECK(local_search(instance, start, config) == start);
}

TEST_CASE("local search preserves validity and never worsens across seeds") {
    for (int seed = 1; seed <= 30; seed++) {
        Instance instance = testutil::micro_instance(seed);
        Solution start = construct_greedy(instance);
        const i64 start_cmax = evaluate(instance, start).cmax;
        Solution result = local_search(instance, start);
        CHECK(check_solution(instance, result).ok);
        CHECK(evaluate(instance, result).cmax <= start_cmax);
    }
}

TEST_CASE("individual neighborhoods keep solutions valid") {
    for (int seed : {2, 5, 9}) {
        Instance instance = testutil::micro_instance(seed);
        Solution start = construct_greedy(instance);
        for (int neighborhood = 0; neighborhood < 5; neighborhood++) {
            LocalSearchConfig config;
            config.task_move = neighborhood == 0;
            config.task_swap = neighborhood == 1;
            config.group_move = neighborhood == 2;
            config.group_merge = neighborhood == 3;
            config.group_split = neighborhood == 4;
            Solution result = local_search(instance, start, config);
            CHECK(check_solution(instance, result).ok);
        }
    }
}

TEST_CASE("greedy scales to the large suite") {
    Instance instance = generate_instance(testutil::large_params(4), 4);
    Solution solution = construct_greedy(instance);
    CHECK(check_solution(instance, solution).ok);
}
