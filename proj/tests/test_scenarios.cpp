#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdfs/scenarios.hpp"

using namespace qdfs;
using nlohmann::ordered_json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qdfs-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& content,
                                           const std::string& expected_header) {
    std::stringstream ss(content);
    std::string line;
    REQUIRE(std::getline(ss, line));
    CHECK(line == expected_header);
    std::vector<std::vector<double>> rows;
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("number formatting survives a round trip") {
    for (double x : {1.0 / 3.0, 0.96856091434899727, 2.0 * M_PI, 1e-300}) {
        CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_number(1.0) == "1");
}

TEST_CASE("config merging and overrides") {
    TempDir dir;
    {
        std::ofstream f(dir.file("cfg.json"));
        f << R"({"omega1": 120.0, "kappa": 5.0, "r_points": 11})";
    }
    ScenarioConfig cfg = ScenarioConfig::defaults_for("fig2");
    cfg.merge(dir.file("cfg.json"), {"kappa=7.5", "panels=512"}, dir.file("o.csv"));
    CHECK(cfg.params.omega1 == 120.0);
    CHECK(cfg.params.kappa == 7.5);  // flag wins over file
    CHECK(cfg.r_points == 11);
    CHECK(cfg.panels == 512);
    CHECK(cfg.out == dir.file("o.csv"));

    SUBCASE("unknown keys are rejected") {
        ScenarioConfig c;
        CHECK_THROWS_AS(c.apply_override("omega3=1.0"), ConfigError);
        std::ofstream f(dir.file("bad.json"));
        f << R"({"omgea1": 120.0})";
        f.close();
        ScenarioConfig c2;
        CHECK_THROWS_AS(c2.merge(dir.file("bad.json"), {}, ""), ConfigError);
    }
    SUBCASE("malformed values are rejected") {
        ScenarioConfig c;
        CHECK_THROWS_AS(c.apply_override("omega1=fast"), ConfigError);
        CHECK_THROWS_AS(c.apply_override("omega1"), ConfigError);
        CHECK_THROWS_AS(c.apply_override("state=1,2,three"), ConfigError);
    }
    SUBCASE("state override") {
        ScenarioConfig c;
        c.apply_override("state=1,0,0,0,0,0,0,0");
        REQUIRE(c.state.has_value());
        CHECK((*c.state)[0] == Complex(1.0, 0.0));
        CHECK_THROWS_AS(c.apply_override("state=1,0,0"), ConfigError);
    }
    SUBCASE("missing config file") {
        ScenarioConfig c;
        CHECK_THROWS_AS(c.merge(dir.file("absent.json"), {}, ""), ConfigError);
    }
}

TEST_CASE("scenario defaults") {
    ScenarioConfig fig1 = ScenarioConfig::defaults_for("fig1");
    CHECK(fig1.params.gamma_a == doctest::Approx(1.0 / 500.0));
    CHECK(fig1.params.varphi_a == doctest::Approx(M_PI));
    CHECK(fig1.params.phi_a1 == doctest::Approx(M_PI));
    CHECK(fig1.params.phi_b1 == 0.0);
    ScenarioConfig fig2 = ScenarioConfig::defaults_for("fig2");
    CHECK(fig2.params.omega1 / fig2.params.omega2 == doctest::Approx(11.0));
}

TEST_CASE("decay scenario output") {
    TempDir dir;
    ScenarioConfig cfg = ScenarioConfig::defaults_for("fig1");
    cfg.t_end_periods = 2.0;
    cfg.out = dir.file("fig1.csv");

    SUBCASE("lossless run stays at unit fidelity") {
        cfg.params.gamma_a = cfg.params.gamma_b = 0.0;
        run_fig1(cfg);
        auto rows = parse_csv(slurp(cfg.out), "t_over_period,fidelity");
        REQUIRE(!rows.empty());
        CHECK(rows.front()[0] == 0.0);
        for (const auto& row : rows) CHECK(std::abs(row[1] - 1.0) < 1e-8);
        CHECK(!fs::exists(cfg.out + ".tmp"));  // atomic write leaves no temp file
    }
    SUBCASE("lossy run starts at 1 and decays") {
        run_fig1(cfg);
        auto rows = parse_csv(slurp(cfg.out), "t_over_period,fidelity");
        CHECK(rows.front()[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rows.back()[1] < 1.0);
        CHECK(rows.back()[1] > 0.99);  // two periods lose little fidelity
        const std::string content = slurp(cfg.out);
        CHECK(content.find('\r') == std::string::npos);  // LF endings
    }
}

TEST_CASE("phase sweep scenario output") {
    TempDir dir;
    ScenarioConfig cfg = ScenarioConfig::defaults_for("fig2");
    cfg.r_points = 11;
    cfg.panels = 2048;
    cfg.out = dir.file("fig2.csv");
    run_fig2(cfg);
    auto rows = parse_csv(
        slurp(cfg.out),
        "r,beta_global_raw,beta_global_wrapped,beta_sub_closed,beta_sub_quadrature");
    REQUIRE(rows.size() == 11);
    CHECK(rows.front()[3] == doctest::Approx(M_PI));
    CHECK(rows.back()[3] == doctest::Approx(0.0));
    for (const auto& row : rows) CHECK(std::abs(row[3] - row[4]) < 1e-6);
}

TEST_CASE("entangled-state table scenario") {
    TempDir dir;
    ScenarioConfig cfg = ScenarioConfig::defaults_for("table1");
    cfg.out = dir.file("t1.json");
    run_table1(cfg);
    const std::string first = slurp(cfg.out);
    auto doc = ordered_json::parse(first);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 4);
    for (const auto& item : doc) {
        CHECK(item["forward_residual"].get<double>() < 1e-9);
        CHECK(item["inverted_residual"].get<double>() < 1e-9);
    }
    CHECK(doc[3]["state"] == "psi_minus");
    CHECK(doc[3]["inverted_r"].get<double>() == doctest::Approx(1.0));

    run_table1(cfg);  // byte-stable across runs
    CHECK(slurp(cfg.out) == first);
}

TEST_CASE("inversion scenario") {
    TempDir dir;
    ScenarioConfig cfg = ScenarioConfig::defaults_for("invert");
    cfg.out = dir.file("inv.json");

    SUBCASE("missing state") { CHECK_THROWS_AS(run_invert(cfg), ConfigError); }
    SUBCASE("norm far from one") {
        cfg.apply_override("state=0.5,0,0,0,0,0,0,0");
        CHECK_THROWS_AS(run_invert(cfg), ConfigError);
    }
    SUBCASE("weighted diagonal input") {
        cfg.apply_override("state=0.8,0,0,0,0,0,0.3,0.51961524227066318");
        run_invert(cfg);
        auto doc = ordered_json::parse(slurp(cfg.out));
        CHECK(doc["r"].get<double>() == doctest::Approx(0.96));
        CHECK(doc["residual"].get<double>() < 1e-9);
        CHECK(doc["branch"] == "closed_form_diagonal");
    }
}

TEST_CASE("validation scenario passes on defaults") {
    TempDir dir;
    ScenarioConfig cfg = ScenarioConfig::defaults_for("validate");
    cfg.out = dir.file("val.json");
    run_validate(cfg);
    auto doc = ordered_json::parse(slurp(cfg.out));
    CHECK(doc["pass"].get<bool>());
    REQUIRE(doc["checks"].is_array());
    CHECK(doc["checks"].size() == 4);
    for (const auto& check : doc["checks"]) CHECK(check["pass"].get<bool>());
}
