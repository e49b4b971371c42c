// Copyright 2026 The qsfe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsfe/scenario.hpp"
#include "qsfe/selfcheck.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qsfe;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("qsfe_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, sep);) out.push_back(cell);
    return out;
}

json small_white() {
    return {{"name", "small"},
            {"dimension", 3},
            {"schmidt", {{"kind", "proportional"}}},
            {"noise", {{"kind", "white"}}},
            {"config_sets", {{0}, {0, 1, 2}}},
            {"chi_strategies", {"symmetric", "general"}},
            {"sweep", {{"parameter", "eps"}, {"to", 1.0}, {"steps", 5}}},
            {"estimators", {"theorem1", "nonadaptive", "lemma2_trivial"}}};
}

}  // namespace

TEST(Parse, ReportsLineOfSyntaxError) {
    const std::string text = "{\n  \"dimension\": 3,\n  \"noise\": {\"kind\": \"white\",}\n}\n";
    try {
        parse_scenario(text);
        FAIL() << "expected a parse error";
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Parse, ReportsMissingAndMistypedFields) {
    try {
        parse_scenario(R"({"name": "x"})");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("dimension"), std::string::npos);
    }
    try {
        parse_scenario(R"({"dimension": "seven"})");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("wrong type"), std::string::npos);
    }
    EXPECT_THROW(parse_scenario(R"({"dimension": 3, "configs": [0], "chi_strategies": ["bogus"]})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"dimension": 3, "configs": [0], "estimators": ["bogus"]})"), ScenarioError);
}

TEST(Validate, ListsEveryViolation) {
    json cfg = small_white();
    cfg["dimension"] = 3;
    cfg["config_sets"] = {{0, 5}, json::array()};
    cfg["sweep"] = {{"parameter", "eps"}, {"from", -0.5}, {"to", 1.0}, {"steps", 0}};
    try {
        scenario_from_json(cfg);
        FAIL();
    } catch (const ScenarioError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("outside [0, dimension)"), std::string::npos) << msg;
        EXPECT_NE(msg.find("nonempty"), std::string::npos) << msg;
        EXPECT_NE(msg.find("sweep.steps"), std::string::npos) << msg;
        EXPECT_NE(msg.find("[0, 1]"), std::string::npos) << msg;
    }
}

TEST(Validate, CrosstalkRange) {
    json cfg = preset_json("fig3");
    cfg["noise"]["total"] = 0.6;  // leading weight 1 - 2 * 0.6 < 0
    EXPECT_THROW(scenario_from_json(cfg), ScenarioError);
    cfg["noise"]["total"] = 0.04;
    cfg["noise"]["model"] = "raw";
    EXPECT_THROW(scenario_from_json(cfg), ScenarioError);
    cfg["noise"]["model"] = "renormalized";
    EXPECT_NO_THROW(scenario_from_json(cfg));
}

TEST(Presets, Shapes) {
    const auto f1 = preset("fig1");
    EXPECT_EQ(f1.dimension, 7);
    EXPECT_EQ(f1.config_sets.size(), 7u);
    EXPECT_EQ(f1.sweep.grid().size(), 101u);
    EXPECT_DOUBLE_EQ(f1.sweep.grid().back(), 1.0);
    const auto f2 = preset("fig2");
    EXPECT_EQ(f2.dimension, 9);
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(f2.schmidt_vector()[k], SchmidtVector::proportional(9)[k], 2e-3);
    const auto f3 = preset("fig3");
    EXPECT_EQ(f3.chi_strategies.size(), 4u);
    const auto mid = std::get<Crosstalk>(f3.noise_at(0.25));
    EXPECT_DOUBLE_EQ(mid.eps_a, 0.01);
    EXPECT_DOUBLE_EQ(mid.eps_b, 0.03);
    EXPECT_THROW(preset("fig9"), ScenarioError);
}

TEST(Run, CsvLayoutAndSandwich) {
    const auto sc = scenario_from_json(small_white());
    const auto rep = run_scenario(sc);
    const std::string csv = report_csv(sc, rep);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    const auto cols = split(header, ',');
    EXPECT_EQ(cols[0], "sweep_param");
    EXPECT_EQ(cols[1], "exact_F");
    EXPECT_EQ(cols[2], "theorem1_M0_symmetric_lower");
    EXPECT_EQ(cols[3], "theorem1_M0_symmetric_upper");
    EXPECT_NE(std::find(cols.begin(), cols.end(), "nonadaptive_M0-1-2_general_lower"), cols.end());
    EXPECT_NE(std::find(cols.begin(), cols.end(), "V2_general"), cols.end());
    EXPECT_EQ(cols.back(), "clamped");
    int rows = 0;
    for (std::string line; std::getline(in, line); ++rows) {
        const auto cells = split(line, ',');
        EXPECT_EQ(cells.size(), cols.size());
        EXPECT_EQ(cells[cells.size() - 2], "1");
    }
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(rep.violations, 0);
    // Full M for prime d is exact.
    for (const auto& r : rep.rows) {
        for (std::size_t c = 0; c < rep.columns.size(); ++c) {
            if (rep.columns[c].estimator == Estimator::theorem1 && rep.columns[c].config_set == 1) {
                EXPECT_NEAR(r.bounds[c].lower, r.exact_fidelity, 1e-9);
            }
        }
    }
}

TEST(Run, ByteIdenticalOutput) {
    json cfg = small_white();
    cfg["mode"] = {{"kind", "shots"}, {"shots", 5000}, {"seed", 17}};
    const auto sc = scenario_from_json(cfg);
    const auto a = temp_dir("a"), b = temp_dir("b");
    run_and_write(sc, a);
    run_and_write(sc, b);
    EXPECT_EQ(slurp(a / "small.csv"), slurp(b / "small.csv"));
    EXPECT_EQ(slurp(a / "small.json"), slurp(b / "small.json"));
    const json side = json::parse(slurp(a / "small.json"));
    EXPECT_EQ(side["provenance"]["seed"], 17);
    EXPECT_EQ(side["provenance"]["version"], kVersion);
    EXPECT_EQ(side["config"]["name"], "small");
    EXPECT_EQ(side["rows"].size(), 5u);
}

TEST(Run, StrictExitCode) {
    json cfg = small_white();
    cfg["strict"] = true;
    const auto strict = scenario_from_json(cfg);
    const auto res = run_and_write(strict, temp_dir("strict"));
    EXPECT_EQ(res.report.violations, 0);
    EXPECT_EQ(res.exit_code, 0);
    BoundsReport broken = res.report;
    broken.violations = 1;
    EXPECT_EQ(strict_exit_code(strict, broken), 2);
    EXPECT_EQ(strict_exit_code(scenario_from_json(small_white()), broken), 0);
    cfg["mode"] = {{"kind", "shots"}, {"shots", 100}};
    EXPECT_EQ(strict_exit_code(scenario_from_json(cfg), broken), 0);
}

TEST(Run, Fig3ColumnsAndNoViolations) {
    json cfg = preset_json("fig3");
    cfg["sweep"]["steps"] = 11;
    const auto sc = scenario_from_json(cfg);
    const auto rep = run_scenario(sc);
    EXPECT_EQ(rep.columns.size(), 4u);
    EXPECT_EQ(rep.violations, 0);
    EXPECT_EQ(rep.rows.size(), 11u);
}

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(ScenarioFiles, ShippedExamplesParse) {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(QSFE_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
        ++seen;
    }
    EXPECT_GE(seen, 1);
}

TEST(Selfcheck, PassesAndIsDeterministic) {
    const auto a = selfcheck({123, 40, {}});
    const auto b = selfcheck({123, 40, {}});
    EXPECT_TRUE(a.ok()) << a.to_string();
    EXPECT_EQ(a.to_string(), b.to_string());
    for (const auto& c : a.invariants) EXPECT_EQ(c.passed, 40) << c.name;
}

TEST(Selfcheck, CorruptVerifierIsReported) {
    SelfcheckOptions opt{5, 16, [](Verifier& v) { v.op(0, 0) += 0.5; }};
    const auto s = selfcheck(opt);
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.invariants[0].name, "stabilization");
    EXPECT_EQ(s.invariants[0].failed, 16);
    EXPECT_NE(s.to_string().find("FAIL"), std::string::npos);
}

TEST(Selfcheck, RejectsZeroTrials) { EXPECT_THROW(selfcheck({0, 0, {}}), std::invalid_argument); }
