#include "catch_amalgamated.hpp"

#include "ggmdir/errors.hpp"
#include "ggmdir/io.hpp"
#include "support.hpp"

#include <filesystem>
#include <limits>
#include <sstream>

using namespace ggmdir;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ggmdir_io_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Matrix parse(const std::string& text) {
    std::istringstream in(text);
    return parse_data_csv(in);
}

}  // namespace

TEST_CASE("shortest round-trip formatting", "[io]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, i % 20 - 10);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("data CSV parsing", "[io]") {
    const Matrix a = parse("x1,x2\n1,2\n3,4.5\n");
    REQUIRE(a.rows() == 2);
    REQUIRE(a.cols() == 2);
    CHECK(a(1, 1) == 4.5);

    const Matrix b = parse("1,2\n\n3,4\r\n");
    CHECK(b.rows() == 2);
    CHECK(b(1, 0) == 3.0);

    CHECK(parse("\"a\",\"b\"\n-1e-3,+2\n")(0, 1) == 2.0);
    CHECK_THROWS_AS(parse("1,2\n3\n"), ShapeError);
    CHECK_THROWS_AS(parse("1,2\n3,x\n"), ValidationError);
    CHECK_THROWS_AS(parse("a,b\nc,d\n"), ValidationError);
    CHECK_THROWS_AS(parse("1,inf\n"), ValidationError);
    CHECK_THROWS_AS(parse(""), ShapeError);
    CHECK_THROWS_AS(read_data_csv("/nonexistent/file.csv"), ValidationError);
}

TEST_CASE("graph JSON round trip", "[io]") {
    const auto g = markov_graph(6, 2);
    const auto text = graph_to_json(g);
    CHECK(parse_graph_json(text) == g);
    CHECK(text.find("[2,1]") != std::string::npos);

    const auto h = parse_graph_json(R"({"q": 4, "edges": [[2, 1], [4, 3]]})");
    CHECK(h.adjacent(1, 0));
    CHECK(h.adjacent(3, 2));
    CHECK_FALSE(h.adjacent(2, 1));
    CHECK_THROWS_AS(parse_graph_json(R"({"q": 4, "edges": [[5, 1]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph_json(R"({"q": 4, "edges": [[0, 1]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph_json(R"({"q": 4, "edges": [[1, 2, 3]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph_json(R"({"edges": []})"), ValidationError);
    CHECK_THROWS_AS(parse_graph_json("not json"), ValidationError);
}

TEST_CASE("graph shorthand", "[io]") {
    CHECK(parse_graph_spec("md:11:3") == markov_graph(11, 3));
    CHECK(parse_graph_spec("saturated:5") == saturated_graph(5));
    CHECK(parse_graph_spec("block:25,25") == block_graph({25, 25}));
    CHECK_THROWS_AS(parse_graph_spec("md:11"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("md:11:x"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("md:0:0"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("md:5:5"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("block:3,-1"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("saturated:"), ValidationError);
    CHECK_THROWS_AS(parse_graph_spec("cycle:4"), ValidationError);

    TempDir tmp;
    write_text_file(tmp.path / "g.json", R"({"q": 3, "edges": [[2, 1]]})");
    CHECK(parse_graph_spec("g.json", tmp.path) == build_graph(3, {{1, 0}}));
    CHECK(parse_graph_spec((tmp.path / "g.json").string()) == build_graph(3, {{1, 0}}));
}

TEST_CASE("matrix CSV", "[io]") {
    TempDir tmp;
    write_text_file(tmp.path / "s.csv", "2,0.5\n0.5,1\n");
    const auto s = read_matrix_csv(tmp.path / "s.csv");
    CHECK(s(1, 0) == 0.5);
    write_text_file(tmp.path / "bad.csv", "2,0.5\n0.4,1\n");
    CHECK_THROWS_AS(read_matrix_csv(tmp.path / "bad.csv"), ValidationError);
    write_text_file(tmp.path / "rect.csv", "2,0.5,1\n0.5,1,1\n");
    CHECK_THROWS_AS(read_matrix_csv(tmp.path / "rect.csv"), ValidationError);
}

TEST_CASE("test report JSON round trip", "[io]") {
    std::mt19937_64 rng(2);
    const auto stats = testsupport::stats_from(rng, testsupport::random_markov_sigma(rng, markov_graph(6, 1)), 20);
    const auto r = test_nested(stats, nest(markov_graph(6, 1), markov_graph(6, 2)));
    CHECK(report_from_json(report_to_json(r)) == r);

    TestReport odd;
    odd.w = 1.0 / 3.0;
    odd.p_dir = std::numeric_limits<double>::denorm_min();
    odd.degenerate = true;
    CHECK(report_from_json(report_to_json(odd)) == odd);
    CHECK_THROWS_AS(report_from_json("{}"), ValidationError);
}

TEST_CASE("scenario parsing", "[io]") {
    const auto s = parse_scenario(
        R"({"q": 11, "n": 60, "null": "md:11:1", "alt": "md:11:2", "reps": 100, "seed": 42,
            "levels": [1, 5, 10]})");
    CHECK(s.q == 11);
    CHECK(s.n == 60);
    CHECK(s.replications == 100);
    CHECK(s.base_seed == 42);
    CHECK(s.nominal_levels == std::vector<double>{0.01, 0.05, 0.10});
    CHECK(s.sigma0 == default_null_sigma(markov_graph(11, 1), "md"));

    const auto block = parse_scenario(
        R"({"q": 6, "n": 20, "null": "block:3,3", "alt": "saturated:6", "reps": 1, "sigma0": "block"})");
    CHECK(block.sigma0(0, 1) == 0.5);
    CHECK(block.nominal_levels.size() == 11);

    TempDir tmp;
    write_text_file(tmp.path / "sigma.csv", "1,0,0\n0,1,0\n0,0,1\n");
    const auto file = parse_scenario(
        R"({"q": 3, "n": 10, "null": "md:3:1", "alt": "saturated:3", "reps": 1, "sigma0": "sigma.csv"})", tmp.path);
    CHECK(file.sigma0 == SymMatrix(Matrix::Identity(3, 3)));

    CHECK_THROWS_AS(parse_scenario(R"({"q": 11, "n": 60, "null": "md:11:1", "alt": "md:11:2"})"), ValidationError);
    CHECK_THROWS_AS(parse_scenario(R"({"q": 11, "n": 60, "null": "md:11:1", "alt": "mx:11:2", "reps": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_scenario(R"({"q": 10, "n": 60, "null": "md:11:1", "alt": "md:11:2", "reps": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_scenario(R"({"q": 11, "n": 60, "null": "md:11:1", "alt": "md:11:2", "reps": 1, "levels": [5, 1]})"),
        ValidationError);
    CHECK_THROWS_AS(parse_scenario(R"({"q": 11, "n": 60, "null": "md:11:1", "alt": "md:11:2", "reps": "ten"})"),
                    ValidationError);
}

TEST_CASE("simulation report formats", "[io]") {
    SimReport r;
    r.levels = {0.01, 0.05};
    r.replications = 10;
    r.rows = {{"w", {10, 20}, {3.1, 6.9}}, {"directional", {0, 10}, {3.1, 6.9}}};
    CHECK(sim_report_csv(r) == "method,1,5\nw,10,20\ndirectional,0,10\n");
    const auto j = sim_report_json(r);
    CHECK(j.find("\"replications\": 10") != std::string::npos);
    CHECK(j.find("\"failures\": 0") != std::string::npos);
    CHECK(relative_error_csv({{"w", 0.5, 0.25, -0.5}}) == "method,nominal,empirical,relative_error\nw,0.5,0.25,-0.5\n");
}
