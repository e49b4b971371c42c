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

// qsfe run --preset fig1 --out results/
// qsfe run --scenario my.json --strict
// qsfe selfcheck --seed 7 --trials 200

#include "qsfe/scenario.hpp"
#include "qsfe/selfcheck.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run(const std::string& scenario_path, const std::string& preset_name, const std::string& out, bool strict,
        std::optional<std::uint64_t> seed, std::optional<std::int64_t> shots) {
    qsfe::json cfg;
    if (!scenario_path.empty()) {
        std::ifstream in(scenario_path);
        if (!in) throw qsfe::ScenarioError("cannot open scenario file " + scenario_path);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        cfg = qsfe::parse_scenario(text).source;
    } else {
        cfg = qsfe::preset_json(preset_name);
    }
    // Command-line overrides are folded into the config so the sidecar echoes them.
    if (strict) cfg["strict"] = true;
    if (shots || seed) {
        qsfe::json mode = cfg.value("mode", qsfe::json::object());
        if (shots) {
            mode["kind"] = "shots";
            mode["shots"] = *shots;
        }
        if (seed) mode["seed"] = *seed;
        cfg["mode"] = mode;
    }
    const qsfe::Scenario sc = qsfe::scenario_from_json(cfg);
    const auto res = qsfe::run_and_write(sc, out);
    std::cout << "wrote " << res.csv_path.string() << " (" << res.report.rows.size() << " rows) and "
              << res.json_path.string() << "\n";
    if (res.report.violations > 0) {
        std::cerr << res.report.violations << " sweep point(s) violate lower <= F <= upper";
        std::cerr << (sc.shots ? " (sampled statistics; finite-shot bounds are not certified)\n" : "\n");
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive fidelity estimation for bipartite qudit Bell-type states"};
    app.set_version_flag("--version", qsfe::kVersion);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a scenario sweep and write CSV plus JSON sidecar");
    std::string scenario_path, preset_name, out = ".";
    bool strict = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    auto* scen_opt = run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
    auto* preset_opt = run_cmd->add_option("--preset", preset_name, "Built-in scenario")
                           ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    scen_opt->excludes(preset_opt);
    run_cmd->add_option("--out", out, "Output directory")->capture_default_str();
    run_cmd->add_flag("--strict", strict, "Exit nonzero if an exact-mode row breaks the sandwich");
    run_cmd->add_option("--seed", seed, "Sampling seed");
    run_cmd->add_option("--shots", shots, "Shots per measurement setting (switches to sampled statistics)")
        ->check(CLI::PositiveNumber);

    auto* self_cmd = app.add_subcommand("selfcheck", "Run the randomized invariant suite");
    std::uint64_t self_seed = 0;
    int trials = 200;
    self_cmd->add_option("--seed", self_seed, "Seed")->capture_default_str();
    self_cmd->add_option("--trials", trials, "Number of random instances")->check(CLI::PositiveNumber)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (scenario_path.empty() && preset_name.empty()) {
                std::cerr << "run: one of --scenario or --preset is required\n";
                return 1;
            }
            return run(scenario_path, preset_name, out, strict, seed, shots);
        }
        const auto summary = qsfe::selfcheck({self_seed, trials, {}});
        std::cout << summary.to_string();
        return summary.ok() ? 0 : 3;
    } catch (const qsfe::ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
