#include <sstream>

#include "doctest.h"
#include "permbound/bench.hpp"

using namespace permbound;

TEST_CASE("ranges and method names") {
    CHECK(parse_range("8..10").lo == 8);
    CHECK(parse_range("8..10").hi == 10);
    CHECK(parse_range("5").lo == 5);
    CHECK(parse_range("5").hi == 5);
    CHECK_THROWS((void)parse_range("10..8"));
    CHECK_THROWS((void)parse_range("a..b"));
    CHECK_THROWS((void)parse_range("3x"));
    for (auto m : {BenchMethod::ryser, BenchMethod::bruteforce, BenchMethod::roos1, BenchMethod::roos2})
        CHECK(parse_bench_method(to_string(m)) == m);
    CHECK_THROWS((void)parse_bench_method("gauss"));
}

TEST_CASE("matrix seeds differ by position") {
    CHECK(bench_matrix_seed(1, 5, 8, 0) == bench_matrix_seed(1, 5, 8, 0));
    CHECK(bench_matrix_seed(1, 5, 8, 0) != bench_matrix_seed(1, 5, 8, 1));
    CHECK(bench_matrix_seed(1, 5, 8, 0) != bench_matrix_seed(1, 5, 9, 0));
    CHECK(bench_matrix_seed(1, 5, 8, 0) != bench_matrix_seed(2, 5, 8, 0));
}

TEST_CASE("record count and schema") {
    BenchConfig cfg;
    cfg.targets = {5, 5};
    cfg.measurements = {8, 10};
    cfg.trials = 3;
    cfg.seed = 1;
    const auto res = run_bench(cfg);
    CHECK(res.records.size() == 3 * 3 * 3);
    CHECK(res.violations.empty());
    CHECK(res.skipped.empty());
    for (const auto& r : res.records) {
        CHECK(r.rows == 5);
        CHECK(r.cols >= 18);
        CHECK(r.wall_time >= 0.0);
        if (r.method != BenchMethod::ryser) CHECK(r.lower.has_value());
    }

    const std::string csv = bench_csv(res.records);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,rows,cols,trial,wall_time_s,value");
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == res.records.size());
}

TEST_CASE("values are reproducible") {
    BenchConfig cfg;
    cfg.targets = {5, 6};
    cfg.measurements = {8, 8};
    cfg.trials = 2;
    const auto a = bench_csv(run_bench(cfg).records, false);
    cfg.threads = 3;
    const auto b = bench_csv(run_bench(cfg).records, false);
    CHECK(a == b);
}

TEST_CASE("exact method past its cap is skipped") {
    BenchConfig cfg;
    cfg.targets = {8, 8};
    cfg.measurements = {16, 16};
    cfg.trials = 1;
    cfg.methods = {BenchMethod::bruteforce, BenchMethod::roos1};
    const auto res = run_bench(cfg);
    CHECK(res.skipped.size() == 1);
    CHECK(res.records.size() == 1);
}
