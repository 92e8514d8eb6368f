#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "rgraph/cli.hpp"
#include "rgraph/graph_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixtures = RGRAPH_FIXTURES;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result rg(std::vector<std::string> args) {
    args.insert(args.begin(), "rg");
    std::ostringstream out, err;
    const int code = rgraph::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "rgraph_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("implies exit codes") {
    CHECK(rg({"implies", kFixtures + "/chain5.txt", "1 _||_ 4 | 3"}).code == 0);
    const auto no = rg({"implies", kFixtures + "/chain5.txt", "1 _||_ 4"});
    CHECK(no.code == 1);
    CHECK(no.out == "false\n");
    CHECK(rg({"implies", kFixtures + "/chain5.txt", "1 _||_ 4 | 3", "--method", "paths"}).code == 0);
    const auto j = rg({"--json", "implies", kFixtures + "/chain5.txt", "1,2 _||_ 4,5 | 3"});
    CHECK(j.code == 0);
    CHECK(nlohmann::json::parse(j.out)["implied"] == true);
    CHECK(rg({"implies", kFixtures + "/chain5.txt", "1 _||_ 9"}).code == 3);
}

TEST_CASE("usage errors") {
    CHECK(rg({}).code == 2);
    CHECK(rg({"frobnicate"}).code == 2);
    CHECK(rg({"implies", kFixtures + "/chain5.txt"}).code == 2);
    CHECK(rg({"validate", kFixtures + "/chain5.txt", "--bogus"}).code == 2);
    CHECK(rg({"implies", kFixtures + "/chain5.txt", "1 _||_ 4", "--method", "magic"}).code == 2);
    CHECK(rg({"--help"}).code == 0);
}

TEST_CASE("validate") {
    const auto ok = rg({"validate", kFixtures + "/mannheim.txt"});
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid: 8 nodes, 3 blocks, 15 edges\n");
    const auto bad = scratch() / "bad.txt";
    rgraph::write_text_file(bad.string(), "blocks: a || b c\nb ~~ c\n");
    const auto r = rg({"--json", "validate", bad.string()});
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.out)["valid"] == false);
    CHECK(rg({"validate", (scratch() / "missing.txt").string()}).code == 3);
}

TEST_CASE("equiv") {
    CHECK(rg({"equiv", kFixtures + "/mannheim.txt", kFixtures + "/mannheim.txt"}).code == 0);
    CHECK(rg({"equiv", kFixtures + "/chain5.txt", kFixtures + "/mannheim.txt"}).code == 3);
    const auto a = scratch() / "collider.txt";
    const auto b = scratch() / "chain3.txt";
    rgraph::write_text_file(a.string(), "blocks: o || i k\ni -> o\nk -> o\n");
    rgraph::write_text_file(b.string(), "blocks: i | o || k\no -> i\nk -> o\n");
    CHECK(rg({"equiv", a.string(), b.string()}).code == 1);
}

TEST_CASE("marginalize writes the expected graph") {
    const auto out = scratch() / "marginal.txt";
    const auto r = rg({"marginalize", kFixtures + "/mannheim.txt", "--over", "X8,X4", "-o", out.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(rgraph::read_text_file(out.string()) == rgraph::read_text_file(kFixtures + "/mannheim_without_x.txt"));
    const auto y = rg({"marginalize", kFixtures + "/mannheim.txt", "--over", "Y8,Y4"});
    CHECK(y.out == rgraph::read_text_file(kFixtures + "/mannheim_without_y.txt"));
    const auto dot = rg({"marginalize", kFixtures + "/mannheim.txt", "--over", "Y8", "--dot"});
    CHECK(dot.out.rfind("digraph", 0) == 0);
    const auto j = rg({"--json", "marginalize", kFixtures + "/mannheim.txt", "--over", "Y8"});
    CHECK(nlohmann::json::parse(j.out)["is_regression_graph"] == true);
    CHECK(rg({"marginalize", kFixtures + "/mannheim.txt", "--over", "Y8", "--condition", "X8"}).code == 3);
}

TEST_CASE("structure and report") {
    const auto s = rg({"structure", kFixtures + "/chain5.txt"});
    CHECK(s.code == 0);
    CHECK(s.out.find("1 _||_ 4 | 3\n") != std::string::npos);
    CHECK(rg({"structure", kFixtures + "/mannheim.txt", "--max-nodes", "4"}).code == 3);
    const auto rep = rg({"report", kFixtures + "/chain5.txt"});
    CHECK(rep.out.find("factorization: f_{1|2,3,4,5} f_{2|3,4,5} f_{3|4,5} f_{4|5} f_{5}") != std::string::npos);
    const auto text = rg({"report", kFixtures + "/mannheim.txt", "--format", "text"});
    CHECK(text.out == rgraph::emit_graph_text(rgraph::read_graph_file(kFixtures + "/mannheim.txt")));
    const auto json = rg({"report", kFixtures + "/mannheim.txt", "--format", "json"});
    CHECK(rgraph::graph_from_json(nlohmann::json::parse(json.out)) == rgraph::read_graph_file(kFixtures + "/mannheim.txt"));
}

TEST_CASE("expand") {
    const auto r = rg({"expand", kFixtures + "/mannheim.txt", "--edge", "Y8,X8"});
    CHECK(r.code == 0);
    const auto g = rgraph::parse_graph_text(r.out);
    CHECK(g.size() == 9);
    const auto full = rg({"expand", kFixtures + "/mannheim.txt", "--edge", "E,Xr"});
    CHECK(full.code == 0);
    CHECK(full.err.find("leaves the regression-graph class") != std::string::npos);
    CHECK(rg({"expand", kFixtures + "/mannheim.txt", "--edge", "Y4,Y8"}).code == 3);
    CHECK(rg({"expand", kFixtures + "/mannheim.txt", "--edge", "Y4"}).code == 2);
}

TEST_CASE("oracle") {
    const auto r = rg({"oracle", kFixtures + "/chain5.txt", "--seeds", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    const auto j = rg({"--json", "--seed", "4", "oracle", kFixtures + "/chain5.txt"});
    CHECK(nlohmann::json::parse(j.out)["passed"] == true);
}

TEST_CASE("simulate and fit") {
    const auto data = scratch() / "sim.csv";
    const auto report = scratch() / "report";
    CHECK(rg({"--seed", "7", "simulate", "--n", "347", "-o", data.string()}).code == 0);
    const auto again = rg({"--seed", "7", "simulate", "--n", "347"});
    CHECK(again.out == rgraph::read_text_file(data.string()));
    const auto f = rg({"fit", data.string(), "--config", kFixtures + "/mannheim.toml", "-o", report.string()});
    CHECK(f.code == 0);
    CHECK(f.out.find("Y8: Y4+X4^2+E+H") != std::string::npos);
    for (const char* name : {"tables.md", "report.json", "graph.txt", "graph.dot"}) CHECK(fs::exists(report / name));
    const auto j = nlohmann::json::parse(rgraph::read_text_file((report / "report.json").string()));
    CHECK(j["tables"].size() == 6);
    CHECK(rgraph::parse_graph_text(rgraph::read_text_file((report / "graph.txt").string())).size() == 8);

    const auto holes = scratch() / "holes.csv";
    rgraph::write_text_file(holes.string(), "Y8,X8\n1,\n");
    const auto bad = rg({"fit", holes.string(), "--config", kFixtures + "/mannheim.toml"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("MissingValues") != std::string::npos);
}
