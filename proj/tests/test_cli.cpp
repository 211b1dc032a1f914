#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "qsp/cli.hpp"

using namespace qsp;

namespace {

SatakeDiagram parse(const std::string& text) { return diagram_from_json(OrderedJson::parse(text)); }

std::vector<OrderedJson> json_lines(const std::string& text) {
    std::vector<OrderedJson> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(OrderedJson::parse(line));
    return out;
}

RunConfig verify_config(const std::string& suite) {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.suite = suite;
    return cfg;
}

std::string fixture(const std::string& name) { return default_catalog_dir() + "/" + name + ".json"; }

}  // namespace

TEST_CASE("catalog fixtures load with validated structure") {
    std::vector<CatalogEntry> cat = load_catalog("");
    REQUIRE(cat.size() == 7);
    std::vector<std::string> names;
    for (const auto& e : cat) names.push_back(e.name);
    CHECK(names == std::vector<std::string>{"a3_black_middle", "diag_a1a1", "qs_a2", "qs_a3", "split_a1",
                                            "split_a2", "split_b2"});

    const SatakeDiagram& qs = cat[2].diagram;
    CHECK(qs.black.empty());
    CHECK(qs.tau == std::vector<int>{1, 0});
    CHECK(qs.signs == std::vector<int>{-1, -1});

    const SatakeDiagram& aii = cat[0].diagram;
    CHECK(aii.black == std::vector<int>{1});
    CHECK(aii.tau == std::vector<int>{2, 1, 0});
    CHECK(aii.signs == std::vector<int>{-1, 0, 1});

    const SatakeDiagram& diag = cat[1].diagram;
    CHECK(diag.rs.cartan.at(0, 1) == 0);
    CHECK(diag.tau == std::vector<int>{1, 0});

    const SatakeDiagram& b2 = cat[6].diagram;
    CHECK(b2.rs.positive.size() == 4);
    CHECK(b2.tau == std::vector<int>{0, 1});
}

TEST_CASE("diagram parsing rejects malformed input") {
    CHECK_THROWS_AS(parse(R"({"type":"A2","cartan":[[2]]})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"black":[1]})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A"})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"2A"})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"Q3"})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","black":[3]})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","tau":{"1":5}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","tau":{"x":1}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","tau":{"1":2,"2":2}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A3","black":[2],"tau":{"1":3,"2":2,"3":1},"signs":{"2":-1}})"),
                    DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","signs":{"1":-1}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","signs":{"1":-2,"2":-1}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"type":"A2","signs":{"1":1,"2":1}})"), DomainError);
    CHECK_THROWS_AS(parse(R"({"cartan":[[2,-1],[-1]]})"), DomainError);
    CHECK_THROWS_AS(read_diagram_file("/nonexistent/diagram.json"), DomainError);
    CHECK_THROWS_AS(load_catalog("/nonexistent/dir"), DomainError);

    SatakeDiagram implicit = parse(R"({"type":"A2"})");
    CHECK(implicit.signs == std::vector<int>{-1, -1});
}

TEST_CASE("invariant reports are deterministic and complete") {
    RunConfig cfg;
    cfg.command = "invariants";
    cfg.diagram_path = fixture("qs_a2");
    cfg.ells = {3};
    std::ostringstream out;
    REQUIRE(run_command(cfg, out) == 0);
    std::vector<OrderedJson> lines = json_lines(out.str());
    REQUIRE(lines.size() == 1);
    const OrderedJson& rep = lines[0];
    CHECK(rep["name"] == "qs_a2");
    CHECK(rep["adapted_word"] == OrderedJson::array({1, 2, 1}));
    CHECK(rep["black_word"].empty());
    CHECK(rep["invariants"]["n0"] == 1);
    CHECK(rep["invariants"]["dim_k"] == 4);
    CHECK(rep["invariants"]["branching_exponents"] == OrderedJson::array({2, 2}));
    CHECK(rep["degrees"] == OrderedJson::parse(R"({"3":"3"})"));
    CHECK(rep["S"].size() == 4);

    RunConfig all;
    all.command = "invariants";
    std::ostringstream first, second;
    REQUIRE(run_command(all, first) == 0);
    REQUIRE(run_command(all, second) == 0);
    CHECK(first.str() == second.str());
    std::vector<OrderedJson> reports = json_lines(first.str());
    REQUIRE(reports.size() == 7);
    CHECK(reports[4]["name"] == "split_a1");
    CHECK(reports[4]["degrees"] == OrderedJson::parse(R"({"3":"1","5":"1","7":"1"})"));
    for (const auto& r : reports) CHECK(r["degrees"].size() == 3);
}

TEST_CASE("verify suites stream checks with a trailing summary") {
    std::ostringstream out;
    REQUIRE(run_command(verify_config("unity"), out) == 0);
    std::vector<OrderedJson> lines = json_lines(out.str());
    REQUIRE(lines.size() >= 2);
    const OrderedJson& summary = lines.back();
    CHECK(summary["suite"] == "unity");
    CHECK(summary["cases"] == 3);
    CHECK(summary["checks"] == 12);
    CHECK(summary["failures"] == 0);
    CHECK(summary["pass"] == true);
    for (size_t k = 0; k + 1 < lines.size(); ++k) {
        CHECK(lines[k]["suite"] == "unity");
        CHECK(lines[k].contains("case"));
        CHECK((lines[k].contains("check") || lines[k].contains("seconds")));
    }

    std::ostringstream rw;
    REQUIRE(run_command(verify_config("rewrite"), rw) == 0);
    std::map<std::string, long> rules;
    for (const auto& line : json_lines(rw.str()))
        if (line.contains("rules")) rules[line["case"]] = line["rules"].get<long>();
    CHECK(rules == std::map<std::string, long>{{"A1", 0}, {"A2", 2}, {"B2", 3}, {"A3", 7}});
}

TEST_CASE("kernel suite embeds certificates and is stable under threading") {
    RunConfig cfg = verify_config("kernel");
    cfg.diagram_path = fixture("split_a1");
    std::ostringstream serial;
    REQUIRE(run_command(cfg, serial) == 0);

    std::map<long, std::string> cardinalities;
    for (const auto& line : json_lines(serial.str()))
        if (line.contains("certificate"))
            cardinalities[line["ell"].get<long>()] = line["certificate"]["kernel_cardinality"];
    CHECK(cardinalities == std::map<long, std::string>{{3, "3"}, {5, "5"}, {7, "7"}});

    cfg.jobs = 3;
    std::ostringstream threaded;
    REQUIRE(run_command(cfg, threaded) == 0);
    CHECK(serial.str() == threaded.str());
}

TEST_CASE("word overrides reach the graded presentation") {
    RunConfig cfg = verify_config("kernel");
    cfg.diagram_path = fixture("split_a2");
    cfg.ells = {3};
    cfg.word_override = Word{1, 0, 1};
    std::ostringstream out;
    REQUIRE(run_command(cfg, out) == 0);
    CHECK(json_lines(out.str()).back()["pass"] == true);

    RunConfig bad = cfg;
    bad.word_override = Word{0, 1};
    std::ostringstream sink;
    CHECK_THROWS_AS(run_command(bad, sink), DomainError);
}

TEST_CASE("configuration errors are rejected before any case runs") {
    std::ostringstream sink;
    RunConfig cfg = verify_config("unity");
    cfg.ells = {4};
    CHECK_THROWS_AS(run_command(cfg, sink), DomainError);

    cfg = verify_config("kernel");
    cfg.ells = {2};
    CHECK_THROWS_AS(run_command(cfg, sink), DomainError);

    cfg = verify_config("braid");
    cfg.ells = {7};
    CHECK_THROWS_AS(run_command(cfg, sink), DomainError);

    cfg = verify_config("smalldim");
    cfg.diagram_path = fixture("split_a2");
    CHECK_THROWS_AS(run_command(cfg, sink), DomainError);

    CHECK_THROWS_AS(run_command(verify_config("nosuch"), sink), DomainError);

    RunConfig unknown;
    unknown.command = "report";
    CHECK_THROWS_AS(run_command(unknown, sink), DomainError);
}

TEST_CASE("runtime check failures map to exit code one") {
    RunConfig cfg = verify_config("braid");
    cfg.diagram_path = fixture("a3_black_middle");
    cfg.ells = {3};
    std::ostringstream out;
    REQUIRE(run_command(cfg, out) == 1);
    std::vector<OrderedJson> lines = json_lines(out.str());
    CHECK(lines.back()["pass"] == false);
    CHECK(lines.back()["failures"].get<long>() >= 1);
    bool saw_failed_check = false;
    for (const auto& line : lines)
        if (line.contains("check") && line["pass"] == false) saw_failed_check = true;
    CHECK(saw_failed_check);
}

TEST_CASE("binary maps parse and configuration errors to exit code two") {
    if (!std::filesystem::exists("qsp")) {
        SUCCEED("cli binary not present in this working directory");
        return;
    }
    auto code = [](const std::string& cmd) {
        int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(code("./qsp --help") == 0);
    CHECK(code("./qsp verify unity --ell 5") == 0);
    CHECK(code("./qsp verify unity --ell 4") == 2);
    CHECK(code("./qsp verify nosuch") == 2);
    CHECK(code("./qsp nosuch") == 2);
    CHECK(code("./qsp invariants --diagram /nonexistent.json") == 2);
}
