#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "ttg/bench.hpp"

using namespace ttg;

namespace {

RunRecord rec(const std::string& method, std::optional<i64> cmax) {
    RunRecord record;
    record.instance_id = "i";
    record.method = method;
    record.cmax = cmax;
    return record;
}

}  // namespace

TEST_CASE("best_gap definition") {
    auto gaps = best_gap({rec("A", 100), rec("B", 110)});
    CHECK(gaps.at("A") == doctest::Approx(0.0));
    CHECK(gaps.at("B") == doctest::Approx(10.0));
}

TEST_CASE("best_gap with a single method") {
    auto gaps = best_gap({rec("m", 7)});
    CHECK(gaps.at("m") == doctest::Approx(0.0));
}

TEST_CASE("best_gap around the reference optimum") {
    auto gaps = best_gap({rec("A", 5), rec("B", 5), rec("C", 6)});
    CHECK(gaps.at("A") == doctest::Approx(0.0));
    CHECK(gaps.at("B") == doctest::Approx(0.0));
    CHECK(gaps.at("C") == doctest::Approx(20.0));
}

TEST_CASE("best_gap excludes failures and rejects all-failed input") {
    auto gaps = best_gap({rec("A", 10), rec("B", std::nullopt)});
    CHECK(gaps.count("B") == 0);
    CHECK_THROWS_AS(best_gap({rec("A", std::nullopt)}), std::invalid_argument);
}

TEST_CASE("rank places failures last") {
    auto ranks = rank_methods({rec("A", 100), rec("B", 110), rec("C", std::nullopt)});
    CHECK(ranks.at("A") == doctest::Approx(1.0));
    CHECK(ranks.at("B") == doctest::Approx(2.0));
    CHECK(ranks.at("C") == doctest::Approx(3.0));
}

TEST_CASE("tied ranks are averaged") {
    auto ranks = rank_methods({rec("A", 5), rec("B", 5)});
    CHECK(ranks.at("A") == doctest::Approx(1.5));
    CHECK(ranks.at("B") == doctest::Approx(1.5));
}

TEST_CASE("rank mass is conserved") {
    for (int scenario = 0; scenario < 16; scenario++) {
        std::vector<RunRecord> records;
        const int k = 4;
        for (int m = 0; m < k; m++) {
            const bool fail = (scenario >> m) & 1;
            records.push_back(rec("m" + std::to_string(m),
                                  fail ? std::nullopt : std::optional<i64>(10 + (m * 7) % 3)));
        }
        auto ranks = rank_methods(records);
        double total = 0;
        for (const auto& [method, rank] : ranks) total += rank;
        CHECK(total == doctest::Approx(k * (k + 1) / 2.0));
    }
}

TEST_CASE("mean rank of three methods stays within [1,3] across instances") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 47; i++) {
        for (const char* method : {"A", "B", "C"}) {
            RunRecord record;
            record.instance_id = "inst" + std::to_string(i);
            record.method = method;
            if (method == "C" && i % 9 == 0) {
                record.cmax = std::nullopt;  // sporadic failures
            } else {
                record.cmax = 100 + (i * 13 + method[0]) % 7;
            }
            records.push_back(record);
        }
    }
    ComparisonTable table = summarize(records);
    REQUIRE(table.rows.size() == 3);
    for (const MethodSummary& row : table.rows) {
        CHECK(row.mean_rank >= 1.0);
        CHECK(row.mean_rank <= 3.0);
        CHECK(row.mean_bg >= 0.0);
    }
}

TEST_CASE("summarize skips all-failed instances with a note") {
    std::vector<RunRecord> records;
    RunRecord bad = rec("A", std::nullopt);
    bad.instance_id = "broken";
    records.push_back(bad);
    records.push_back(rec("A", 4));
    ComparisonTable table = summarize(records);
    REQUIRE(table.notes.size() == 1);
    CHECK(table.rows.at(0).successes == 1);
}

TEST_CASE("sweep grid is monotone for the exact method") {
    Instance instance = testutil::micro_instance(5);
    const std::vector<i64> hs_values = {0, 1, 2, 3};
    const std::vector<i64> smax_values = {13, 15, 18, 1000};
    auto cells = sweep(instance, hs_values, smax_values, "exact", SolveLimits{});
    REQUIRE(cells.size() == 16);
    for (std::size_t h = 0; h < hs_values.size(); h++) {
        for (std::size_t s = 0; s < smax_values.size(); s++) {
            const SweepCell& cell = cells[h * smax_values.size() + s];
            REQUIRE(cell.status == "ok");
            REQUIRE(cell.cmax.has_value());
            REQUIRE(cell.lower.has_value());
            REQUIRE(cell.upper.has_value());
            CHECK(*cell.lower <= *cell.cmax);
            CHECK(*cell.cmax <= *cell.upper);
            if (s > 0) CHECK(*cell.cmax <= *cells[h * smax_values.size() + s - 1].cmax);
            if (h > 0) CHECK(*cell.cmax >= *cells[(h - 1) * smax_values.size() + s].cmax);
            if (hs_values[h] == 0) {
                // Free headers make grouping cost-free: both bound models
                // coincide with the exact value.
                CHECK(*cell.upper == *cell.cmax);
                CHECK(*cell.lower == *cell.cmax);
            }
        }
    }
}

TEST_CASE("sweep marks invalid parameter combinations") {
    Instance instance = testutil::micro_instance(5);
    auto cells = sweep(instance, {5}, {5}, "greedy", SolveLimits{});
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].status == "invalid");
}

TEST_CASE("records CSV round trip") {
    std::vector<RunRecord> records = {rec("greedy", 12), rec("lb", std::nullopt)};
    records[0].optimal = true;
    records[0].seed = 3;
    const std::string csv = records_to_csv(records);
    CHECK(csv ==
          "instance,method,cmax,optimal,wall_time,seed\n"
          "i,greedy,12,1,0.000000,3\n"
          "i,lb,,0,0.000000,0\n");
    std::istringstream in(csv);
    auto parsed = records_from_csv(in);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].cmax == 12);
    CHECK(parsed[0].optimal);
    CHECK_FALSE(parsed[1].cmax.has_value());
}

TEST_CASE("table CSV uses two decimals and stable columns") {
    ComparisonTable table;
    table.rows.push_back({"exact", 5, 0.0, 0.0, 1.0});
    table.rows.push_back({"greedy", 5, 12.3456, 10.0, 2.0});
    CHECK(table_to_csv(table) ==
          "method,successes,mean_bg,median_bg,mean_rank\n"
          "exact,5,0.00,0.00,1.00\n"
          "greedy,5,12.35,10.00,2.00\n");
}

TEST_CASE("imported external records merge into the comparison") {
    // Local runs plus a record set produced elsewhere (the export-lp route).
    std::vector<RunRecord> records;
    for (int i = 1; i <= 2; i++) {
        Instance instance = testutil::micro_instance(i);
        const std::string id = "inst" + std::to_string(i);
        records.push_back(run_method(instance, id, "greedy", SolveLimits{}, 0));
        records.push_back(run_method(instance, id, "oracle", SolveLimits{}, 0));
    }
    std::istringstream imported(
        "instance,method,cmax,optimal,wall_time,seed\n"
        "inst1,external,1000000,1,42.5,0\n"
        "inst2,external,1000000,1,42.5,0\n");
    auto extra = records_from_csv(imported);
    records.insert(records.end(), extra.begin(), extra.end());

    ComparisonTable table = summarize(records);
    REQUIRE(table.rows.size() == 3);
    const MethodSummary& external = table.rows.back();
    CHECK(external.method == "external");
    CHECK(external.successes == 2);
    CHECK(external.mean_rank == doctest::Approx(3.0));  // worst on both instances
    CHECK(external.mean_bg > 0.0);
}

TEST_CASE("manifest parsing resolves paths and seeds") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ttg_manifest_test";
    fs::create_directories(dir);
    std::ofstream(dir / "suite.txt") << "# suite\n"
                                     << "one.txt 7\n"
                                     << "sub/two.txt\n"
                                     << "\n"
                                     << (dir / "abs.txt").string() << " 9\n";
    auto jobs = parse_manifest_file((dir / "suite.txt").string());
    REQUIRE(jobs.size() == 3);
    CHECK(jobs[0].path == (dir / "one.txt").string());
    CHECK(jobs[0].seed == 7);
    CHECK(jobs[1].path == (dir / "sub/two.txt").string());
    CHECK(jobs[1].seed == 0);
    CHECK(jobs[2].path == (dir / "abs.txt").string());
    CHECK(jobs[2].seed == 9);
    std::ofstream(dir / "bad.txt") << "one.txt seven\n";
    CHECK_THROWS_AS(parse_manifest_file((dir / "bad.txt").string()), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("run_method verifies solutions and records bound values") {
    Instance instance = testutil::instance_a();
    RunRecord oracle = run_method(instance, "a", "oracle", SolveLimits{}, 0);
    CHECK(oracle.cmax == 5);
    CHECK(oracle.optimal);
    RunRecord lb = run_method(instance, "a", "lb", SolveLimits{}, 0);
    CHECK(lb.cmax == 5);
    RunRecord unknown_ok = run_method(instance, "a", "greedy", SolveLimits{}, 0);
    CHECK(unknown_ok.cmax.has_value());
    CHECK_THROWS_AS(run_method(instance, "a", "nope", SolveLimits{}, 0), std::invalid_argument);
}

TEST_CASE("run_suite runs the full matrix in order, regardless of workers") {
    // In-memory manifest is not available; write temp files.
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ttg_bench_test";
    fs::create_directories(dir);
    for (int i = 0; i < 3; i++) {
        std::ofstream out(dir / ("m" + std::to_string(i) + ".txt"));
        out << serialize_instance(testutil::micro_instance(i + 1));
    }
    std::vector<SuiteJob> jobs = {{(dir / "m0.txt").string(), 1},
                                  {(dir / "m1.txt").string(), 2},
                                  {(dir / "m2.txt").string(), 3}};
    const std::vector<std::string> methods = {"greedy", "ub"};
    auto sequential = run_suite(jobs, methods, SolveLimits{}, 1);
    auto parallel = run_suite(jobs, methods, SolveLimits{}, 4);
    REQUIRE(sequential.size() == 6);
    REQUIRE(parallel.size() == 6);
    for (std::size_t i = 0; i < sequential.size(); i++) {
        CHECK(sequential[i].instance_id == parallel[i].instance_id);
        CHECK(sequential[i].method == parallel[i].method);
        CHECK(sequential[i].cmax == parallel[i].cmax);
    }
    fs::remove_all(dir);
}
