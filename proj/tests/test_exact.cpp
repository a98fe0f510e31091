#include <doctest.h>

#include "test_util.hpp"
#include "ttg/bounds.hpp"
#include "ttg/exact.hpp"

using namespace ttg;

namespace {

Instance uniform_tasks(int count, i64 proc, i64 hs, i64 smax) {
    Instance instance;
    instance.periods = {4};
    instance.header_size = hs;
    instance.max_group_size = smax;
    for (int i = 0; i < count; i++) {
        instance.tasks.push_back({"t" + std::to_string(i + 1), 4, proc});
    }
    return instance;
}

}  // namespace

TEST_CASE("oracle solves the reference instance") {
    SolveResult result = brute_force_oracle(testutil::instance_a());
    CHECK(result.cmax == 5);
    CHECK(result.optimal);
    CHECK(check_solution(testutil::instance_a(), result.solution).ok);
    CHECK(evaluate(testutil::instance_a(), result.solution).cmax == 5);
}

TEST_CASE("oracle on a single task") {
    Instance instance = uniform_tasks(1, 2, 1, 4);
    SolveResult result = brute_force_oracle(instance);
    CHECK(result.cmax == 3);
}

TEST_CASE("group capacity drives the optimum for identical tasks") {
    // Three unit tasks, hs 1: one group of size 4 when smax allows it,
    // three singleton groups of size 2 otherwise.
    CHECK(brute_force_oracle(uniform_tasks(3, 1, 1, 5)).cmax == 4);
    CHECK(brute_force_oracle(uniform_tasks(3, 1, 1, 2)).cmax == 6);
}

TEST_CASE("oracle rejects oversized enumeration spaces") {
    Instance instance = uniform_tasks(30, 1, 1, 100);
    CHECK_THROWS_AS(brute_force_oracle(instance), SpaceTooLargeError);
}

TEST_CASE("oracle on an instance with no tasks") {
    Instance instance;
    instance.periods = {4, 8};
    instance.header_size = 1;
    instance.max_group_size = 4;
    SolveResult result = brute_force_oracle(instance);
    CHECK(result.cmax == 0);
    CHECK(result.optimal);
}

TEST_CASE("solve_exact matches the oracle on the reference instance") {
    SolveResult result = solve_exact(testutil::instance_a());
    CHECK(result.cmax == 5);
    CHECK(result.optimal);
    CHECK(check_solution(testutil::instance_a(), result.solution).ok);
}

TEST_CASE("solve_exact equals the oracle across the micro suite") {
    for (int seed = 1; seed <= 40; seed++) {
        Instance instance = testutil::micro_instance(seed);
        SolveResult oracle = brute_force_oracle(instance);
        SolveResult exact = solve_exact(instance);
        REQUIRE(exact.optimal);
        CHECK(exact.cmax == oracle.cmax);
        CHECK(check_solution(instance, exact.solution).ok);
        CHECK(evaluate(instance, exact.solution).cmax == exact.cmax);
    }
}

TEST_CASE("free headers collapse the exact value onto the lower bound") {
    for (int seed = 1; seed <= 10; seed++) {
        Instance instance = testutil::micro_instance(seed);
        instance.header_size = 0;
        instance.max_group_size = 1000;
        SolveResult exact = solve_exact(instance);
        REQUIRE(exact.optimal);
        ReducedResult lower = solve_reduced(lower_bound_problem(instance));
        REQUIRE(lower.optimal);
        CHECK(exact.cmax == lower.value);
    }
}

TEST_CASE("optimal cmax is monotone in smax and header size") {
    Instance instance = testutil::micro_instance(3);
    SUBCASE("nonincreasing in smax") {
        i64 previous = -1;
        for (i64 smax : {13, 15, 18, 1000}) {
            Instance variant = instance;
            variant.header_size = 3;
            variant.max_group_size = smax;
            SolveResult result = solve_exact(variant);
            REQUIRE(result.optimal);
            if (previous >= 0) CHECK(result.cmax <= previous);
            previous = result.cmax;
        }
    }
    SUBCASE("nondecreasing in header size") {
        i64 previous = -1;
        for (i64 hs : {0, 1, 2, 3}) {
            Instance variant = instance;
            variant.header_size = hs;
            variant.max_group_size = 1000;
            SolveResult result = solve_exact(variant);
            REQUIRE(result.optimal);
            if (previous >= 0) CHECK(result.cmax >= previous);
            previous = result.cmax;
        }
    }
}

TEST_CASE("node budgets degrade the optimal flag, never the solution validity") {
    Instance instance = testutil::micro_instance(8);
    SolveLimits limits;
    limits.node_limit = 1;
    SolveResult result = solve_exact(instance, limits);
    CHECK(check_solution(instance, result.solution).ok);
    CHECK(evaluate(instance, result.solution).cmax == result.cmax);
}

TEST_CASE("target cmax stops the search without claiming optimality") {
    Instance instance = testutil::instance_a();
    SolveLimits limits;
    limits.target_cmax = 100;  // met by any incumbent
    SolveResult result = solve_exact(instance, limits);
    CHECK_FALSE(result.optimal);
    CHECK(result.cmax <= 100);
}

TEST_CASE("solve_exact is deterministic for fixed limits") {
    Instance instance = testutil::micro_instance(11);
    SolveResult a = solve_exact(instance);
    SolveResult b = solve_exact(instance);
    CHECK(a.cmax == b.cmax);
    CHECK(a.nodes == b.nodes);
    CHECK(a.solution == b.solution);
}
