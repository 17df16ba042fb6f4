#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "permbound/matrix_io.hpp"

using namespace permbound;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("permbound_io_" + name);
}

}  // namespace

TEST_CASE("parse plain JSON matrix") {
    const auto m = parse_json_matrix(R"({"rows":2,"cols":2,"data":[[1,2],[3,4]]})");
    REQUIRE(std::holds_alternative<Matrix>(m));
    const ThinMatrix t = as_thin(m);
    CHECK(t.matrix() == Matrix::from_rows({{1, 2}, {3, 4}}));
}

TEST_CASE("parse CSV matrix") {
    CHECK(parse_csv_matrix("1,2\n3,4\n") == Matrix::from_rows({{1, 2}, {3, 4}}));
    CHECK(parse_csv_matrix("1, 2\r\n3 ,4") == Matrix::from_rows({{1, 2}, {3, 4}}));
}

TEST_CASE("malformed inputs report position") {
    SUBCASE("ragged CSV") {
        try {
            (void)parse_csv_matrix("1,2\n3,4,5\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("non-number in CSV") {
        CHECK_THROWS_AS((void)parse_csv_matrix("1,x\n"), ParseError);
    }
    SUBCASE("negative entry") {
        try {
            (void)parse_json_matrix(R"({"rows":1,"cols":2,"data":[[1,-2]]})");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
        }
    }
    SUBCASE("row length mismatch") {
        CHECK_THROWS_AS((void)parse_json_matrix(R"({"rows":2,"cols":2,"data":[[1,2],[3]]})"),
                        ParseError);
    }
    SUBCASE("syntax") {
        CHECK_THROWS_AS((void)parse_json_matrix("{\"rows\":"), ParseError);
    }
    SUBCASE("likelihood block violation") {
        CHECK_THROWS_AS(
            (void)parse_json_matrix(
                R"({"targets":2,"measurements":0,"rows":2,"cols":4,"data":[[1,1,1,0],[0,1,0,1]]})"),
            ParseError);
    }
}

TEST_CASE("likelihood JSON round trip is exact") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LikelihoodMatrix l = gen_random(3, 4, seed, parse_distribution("exponential:0.7"));
        const auto path = temp_file("l.json");
        save_matrix(l, path, FileFormat::automatic, {{"seed", seed}});
        const LoadedMatrix back = load_matrix(path);
        REQUIRE(std::holds_alternative<LikelihoodMatrix>(back));
        const auto& lb = std::get<LikelihoodMatrix>(back);
        CHECK(lb.num_targets() == 3);
        CHECK(lb.num_measurements() == 4);
        CHECK(lb.matrix() == l.matrix());
    }
}

TEST_CASE("CSV round trip is exact") {
    Sampler s(3);
    const Matrix m = random_matrix(5, 3, s);
    const auto path = temp_file("m.csv");
    save_matrix(m, path);
    CHECK(std::get<Matrix>(load_matrix(path)) == m);
}

TEST_CASE("as_wide and as_thin orient plain grids") {
    const LoadedMatrix tall = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    CHECK(as_thin(tall).num_rows() == 3);
    CHECK(as_wide(tall).num_rows() == 2);
    const LoadedMatrix wide = Matrix::from_rows({{1, 2, 3}});
    CHECK(as_thin(wide).num_rows() == 3);
    CHECK(as_wide(wide).num_rows() == 1);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
