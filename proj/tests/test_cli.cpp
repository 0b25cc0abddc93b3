#include "hqw/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

using namespace hqw;
using namespace hqw::cli;
using nlohmann::json;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "hqw");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json invoke_json(std::vector<std::string> args) {
    args.insert(args.end(), {"--out", "-", "--format", "json"});
    const Invocation r = invoke(args);
    REQUIRE(r.code == kOk);
    return json::parse(r.out);
}

/// Column index by name in a {"columns", "rows"} table.
std::size_t column(const json& table, const std::string& name) {
    const auto& cols = table["columns"];
    for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k] == name) return k;
    FAIL("missing column " << name);
    return 0;
}

double row_probability_sum(const json& table, const json& row) {
    double s = 0.0;
    for (std::size_t k = 0; k < table["columns"].size(); ++k) {
        const std::string name = table["columns"][k];
        if (name.rfind("p_", 0) == 0) s += row[k].get<double>();
    }
    return s;
}

}  // namespace

TEST_CASE("parse_linear_param") {
    const LinearParam c = parse_linear_param("3.5");
    CHECK(c.at(10.0) == 3.5);
    CHECK_FALSE(c.depends_on_omega());
    CHECK(parse_linear_param("2w").at(1.5) == 3.0);
    CHECK(parse_linear_param("2w+1").at(1.5) == 4.0);
    CHECK(parse_linear_param("w").at(-2.0) == -2.0);
    CHECK(parse_linear_param("-w").at(2.0) == -2.0);
    CHECK(parse_linear_param("2*w").at(2.0) == 4.0);
    CHECK_THROWS_AS(parse_linear_param("abc"), ValidationError);
    CHECK_THROWS_AS(parse_linear_param(""), ValidationError);
}

TEST_CASE("parse_graph_source") {
    const GraphSource circle = parse_graph_source("circle2:2w,2w+1");
    CHECK(circle.depends_on_omega());
    CHECK(circle.build(1.0) == build::circle2(2.0, 3.0));
    CHECK(parse_graph_source("star:10").build() == build::star(10));
    CHECK(parse_graph_source("line3:4").build() == build::line3(4));
    CHECK(parse_graph_source("cycle:5").build() == build::cycle(5));
    CHECK(parse_graph_source("benchmark8").build() == build::benchmark8());
    CHECK_THROWS_AS(parse_graph_source("nosuch:3").build(), ValidationError);
    CHECK_THROWS_AS(parse_graph_source("star:2.5").build(), ValidationError);
    CHECK_THROWS_AS(parse_graph_source("missing.json").build(), std::invalid_argument);
}

TEST_CASE("coin and state mini-languages") {
    CHECK(parse_coin("hadamard", 2).is_unitary(1e-14));
    CHECK(parse_coin("grover", 3).is_unitary(1e-14));
    CHECK(parse_coin("identity", 4) == ComplexMatrix::identity(4));
    CHECK_THROWS_AS(parse_coin("hadamard", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_coin("bogus", 2), ValidationError);

    const auto u = parse_coin_amplitudes("coin:uniform", 4);
    for (const auto& a : u) CHECK(std::abs(a - cplx{0.5}) < 1e-15);
    const auto b = parse_coin_amplitudes("basis:1", 3);
    CHECK(b == std::vector<cplx>{0.0, 1.0, 0.0});
    const auto amp = parse_coin_amplitudes("amp:[3,0;0,4]", 2);
    CHECK(std::abs(amp[0] - cplx{0.6}) < 1e-15);
    CHECK(std::abs(amp[1] - cplx{0.0, 0.8}) < 1e-15);
    CHECK_THROWS_AS(parse_coin_amplitudes("basis:3", 3), ValidationError);
    CHECK_THROWS_AS(parse_coin_amplitudes("amp:[0,0;0,0]", 2), ValidationError);
    CHECK_THROWS_AS(parse_coin_amplitudes("amp:[1,0]", 2), ValidationError);

    const LabeledGraph line = build::line2(5);
    const InitialState s = parse_initial_state("coin:uniform/pos:center", line, 2);
    CHECK(s.vertex == 5);
    CHECK(parse_initial_state("basis:0/pos:3", line, 2).vertex == 3);
    CHECK_THROWS_AS(parse_initial_state("basis:0/pos:11", line, 2), ValidationError);
    CHECK(parse_initial_state("basis:0", line, 2).vertex == 5);
    CHECK(parse_initial_state("", line, 2).coin.size() == 2);
    CHECK_THROWS_AS(parse_initial_state("basis:0/pos:x", line, 2), ValidationError);
}

TEST_CASE("grids, entries and index lists") {
    const Grid g = parse_grid("t:0:1:5");
    CHECK(g.name == "t");
    CHECK(g.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(parse_grid("t:0:1:1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("t:0:1"), ValidationError);
    CHECK(parse_entry("3,4") == std::pair<std::size_t, std::size_t>{3, 4});
    CHECK_THROWS_AS(parse_entry("3"), ValidationError);
    CHECK_THROWS_AS(parse_entry("-1,2"), ValidationError);
    CHECK(parse_index_list("0,2,6,14") == std::vector<std::size_t>{0, 2, 6, 14});
}

TEST_CASE("sweep initial coins are normalized") {
    for (const char* p : {"q_time", "q_mix2", "q_mix3", "q_phase2", "q_phase3"}) {
        CHECK(is_sweep_parameter(p));
        for (double q : {0.0, 0.2, 0.5, 0.57}) {
            double s = 0.0;
            for (const auto& a : sweep_coin(p, q)) s += std::norm(a);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    CHECK_FALSE(is_sweep_parameter("q"));
    CHECK(sweep_time("q_time", 0.5) == doctest::Approx(std::numbers::pi / 2));
    CHECK(sweep_time("q_mix2", 0.5) == doctest::Approx(1.5 * std::numbers::pi));
    CHECK_THROWS_AS(sweep_coin("q_mix2", 1.5), ValidationError);
}

TEST_CASE("naming helpers") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0 / 27.0) == "0.0740740740741");

    RunConfig c;
    c.subcommand = "dynamics";
    c.graphs = {"star:10"};
    const std::string path = output_path(c, "csv");
    CHECK(path.rfind("out/dynamics-", 0) == 0);
    CHECK(path.size() == std::string("out/dynamics-").size() + 16 + 4);
    RunConfig d = c;
    d.graphs = {"star:11"};
    CHECK(output_path(d, "csv") != path);
    c.out = "-";
    CHECK(output_path(c, "csv") == "-");

    ::setenv("HQW_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::unsetenv("HQW_THREADS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("dynamics: star example, row sums and determinism") {
    const json t = invoke_json({"dynamics", "--graph", "star:10", "--coin", "fourier", "--init", "basis:0/pos:0",
                                "--t", "1.5707963267948966"});
    REQUIRE(t["rows"].size() == 1);
    const auto& row = t["rows"][0];
    CHECK(row[column(t, "p_0")].get<double>() == doctest::Approx(0.1));
    CHECK(row[column(t, "entropy")].get<double>() == doctest::Approx(std::log2(10.0)));

    const std::vector<std::string> args{"dynamics", "--graph", "circle2:2w,2w+1", "--coin", "hadamard",
                                        "--sweep", "omega:0:3:4", "--sweep", "t:0:3:7", "--every-step", "--steps", "3",
                                        "--out", "-", "--format", "json"};
    const Invocation a = invoke(args);
    ::setenv("HQW_THREADS", "1", 1);
    const Invocation b = invoke(args);
    ::setenv("HQW_THREADS", "4", 1);
    const Invocation c = invoke(args);
    ::unsetenv("HQW_THREADS");
    REQUIRE(a.code == kOk);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const json table = json::parse(a.out);
    CHECK(table["rows"].size() == 4 * 7 * 4);
    for (const auto& r : table["rows"]) CHECK(row_probability_sum(table, r) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sweep: q_time keeps integer q at the origin and spreads at q = 1/2") {
    const json t = invoke_json({"sweep", "--sweep", "q_time:0:2:5"});
    const std::size_t q = column(t, "q"), sigma = column(t, "sigma");
    for (const auto& row : t["rows"]) {
        const double qv = row[q].get<double>();
        const double s = row[sigma].get<double>();
        if (qv == std::round(qv)) CHECK(s < 1e-9);
        if (qv == 0.5 || qv == 1.5) CHECK(s > 10.0);
        CHECK(row_probability_sum(t, row) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sweep: q_phase3 even q spreads further than odd q") {
    const json t = invoke_json({"sweep", "--sweep", "q_phase3:0:3:4"});
    const std::size_t sigma = column(t, "sigma");
    const auto& rows = t["rows"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][sigma].get<double>() == doctest::Approx(rows[2][sigma].get<double>()));
    CHECK(rows[1][sigma].get<double>() == doctest::Approx(rows[3][sigma].get<double>()));
    CHECK(rows[0][sigma].get<double>() > rows[1][sigma].get<double>() + 1.0);
}

TEST_CASE("pst subcommand") {
    const Invocation ok = invoke({"pst", "--graph", "tree:16", "--source", "0", "--target", "14", "--out", "-"});
    REQUIRE(ok.code == kOk);
    const json doc = json::parse(ok.out);
    CHECK(doc["fidelity"].get<double>() > 1.0 - 1e-10);
    CHECK(doc["path"] == json::array({0, 2, 6, 14}));

    CHECK(invoke({"pst", "--graph", "cycle:3", "--source", "0", "--target", "1", "--out", "-"}).code == kValidation);
    CHECK(invoke({"pst", "--graph", "tree:16", "--source", "0", "--out", "-"}).code == kValidation);
    CHECK(invoke({"pst", "--graph", "segment:4", "--source", "0", "--target", "3", "--path", "0,2,3", "--out", "-"})
              .code == kValidation);
}

TEST_CASE("matmul subcommand") {
    const json e = invoke_json({"matmul", "--graph", "benchmark8", "--power", "3", "--entry", "0,0"});
    CHECK(e["i"] == 0);
    CHECK(e["mode"] == "exact");
    CHECK(std::abs(e["probability"].get<double>() - 2.0 / 27.0) < 1e-12);
    CHECK(e["rounded"] == 2);

    const json s = invoke_json({"matmul", "--graph", "benchmark8", "--power", "3", "--entry", "0,0", "--mode", "shots",
                                "--shots", "20000", "--seed", "11"});
    CHECK(s["mode"] == "shots");
    CHECK(s["shots"] == 20000);
    CHECK(s["seed"] == 11);
    CHECK(s.contains("estimate"));
    CHECK(s.contains("precision_met"));

    const json tr = invoke_json({"matmul", "--graph", "complete:3", "--power", "3", "--trace"});
    CHECK(tr["trace"].get<double>() == doctest::Approx(6.0));

    const Invocation csv = invoke({"matmul", "--graph", "cycle:4", "--graph", "cycle:4", "--out", "-", "--format", "csv"});
    REQUIRE(csv.code == kOk);
    CHECK(csv.out.rfind("i,j,value\n0,0,2\n0,1,0\n", 0) == 0);

    const Invocation star = invoke({"matmul", "--graph", "star:5", "--entry", "0,0", "--out", "-"});
    CHECK(star.code == kValidation);
    CHECK(star.err.find("0:4") != std::string::npos);
    CHECK(invoke({"matmul", "--graph", "cycle:4", "--graph", "cycle:5", "--out", "-"}).code == kValidation);
    CHECK(invoke({"matmul", "--graph", "cycle:4", "--mode", "shots", "--shots", "10", "--out", "-"}).code ==
          kValidation);
    CHECK(invoke({"matmul", "--graph", "cycle:4", "--entry", "9,0", "--out", "-"}).code == kValidation);
}

TEST_CASE("triangles subcommand") {
    const json k4 = invoke_json({"triangles", "--graph", "complete:4"});
    CHECK(k4["triangles"] == 4);
    CHECK(k4["per_vertex"].size() == 4);
    const json b8 = invoke_json({"triangles", "--graph", "benchmark8", "--vertex", "0"});
    CHECK(b8["triangles"] == 1);
    CHECK(invoke({"triangles", "--graph", "star:6", "--out", "-"}).code == kValidation);
}

TEST_CASE("argument errors exit with the validation code") {
    CHECK(invoke({}).code == kValidation);
    CHECK(invoke({"nosuch"}).code == kValidation);
    CHECK(invoke({"dynamics", "--graph", "star:10", "--format", "xml"}).code == kValidation);
    CHECK(invoke({"dynamics", "--graph", "star:10", "--sweep", "t:0:1:1", "--out", "-"}).code == kValidation);
    CHECK(invoke({"dynamics", "--out", "-"}).code == kValidation);
    CHECK(invoke({"sweep", "--sweep", "q_bogus:0:1:3", "--out", "-"}).code == kValidation);
}
