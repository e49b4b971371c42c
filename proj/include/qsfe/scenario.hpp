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

#pragma once

/// Declarative experiment scenarios: a noisy Bell-type preparation swept over
/// one noise parameter, estimated with several config sets, chi strategies
/// and estimators, and emitted as CSV plus a JSON sidecar.
///
/// Scenario file (JSON):
///
///     {
///       "name": "fig1",
///       "dimension": 7,
///       "schmidt": {"kind": "proportional"},          // | "uniform" | "explicit" + "values"
///       "adapt_schmidt": false,
///       "noise": {"kind": "white", "eps": 0.0},       // | "crosstalk": eps_a, eps_b, total, model
///       "config_sets": [[0], [0, 1]],                 // or "configs": [0, 1]
///       "chi_strategies": ["symmetric"],
///       "sweep": {"parameter": "eps", "from": 0, "to": 1, "steps": 101},
///       "mode": {"kind": "exact"},                    // | {"kind": "shots", "shots": n, "seed": s}
///       "estimators": ["theorem1", "nonadaptive"],
///       "strict": false
///     }
///
/// CSV columns, in order: sweep_param, exact_F, then <est>_M<set>_<chi>_lower and
/// _upper for every estimator / config set / chi strategy, then V_e, then per
/// chi strategy E_<chi> and V<j>_<chi> for every measured config, then
/// sandwich_ok and clamped.

#include "qsfe/estimation.hpp"
#include "qsfe/version.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>

namespace qsfe {

using json = nlohmann::json;

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Estimator { theorem1, nonadaptive, lemma2_trivial };

inline const char* to_string(Estimator e) {
    switch (e) {
        case Estimator::theorem1: return "theorem1";
        case Estimator::nonadaptive: return "nonadaptive";
        case Estimator::lemma2_trivial: return "lemma2_trivial";
    }
    return "?";
}

enum class SweepParameter { eps, eps_a, eps_b, crosstalk_ratio };

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::eps: return "eps";
        case SweepParameter::eps_a: return "eps_a";
        case SweepParameter::eps_b: return "eps_b";
        case SweepParameter::crosstalk_ratio: return "crosstalk_ratio";
    }
    return "?";
}

inline const char* to_string(CrosstalkModel m) {
    switch (m) {
        case CrosstalkModel::trace_preserving: return "trace_preserving";
        case CrosstalkModel::renormalized: return "renormalized";
        case CrosstalkModel::raw: return "raw";
    }
    return "?";
}

struct SchmidtSpec {
    enum class Kind { explicit_values, proportional, uniform } kind = Kind::proportional;
    std::vector<double> values;
};

struct NoiseSpec {
    enum class Kind { white, crosstalk } kind = Kind::white;
    double eps = 0.0;
    double eps_a = 0.0;
    double eps_b = 0.0;
    double total = 0.0;  ///< eps_a + eps_b when sweeping the crosstalk ratio
    CrosstalkModel model = CrosstalkModel::trace_preserving;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::eps;
    double from = 0.0;
    double to = 1.0;
    int steps = 101;

    /// Inclusive, uniformly spaced.
    std::vector<double> grid() const {
        std::vector<double> g(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            g[static_cast<std::size_t>(i)] = steps == 1 ? from : from + (to - from) * i / (steps - 1);
        }
        return g;
    }
};

struct Scenario {
    std::string name = "scenario";
    int dimension = 2;
    SchmidtSpec schmidt;
    bool adapt_schmidt = false;
    NoiseSpec noise;
    std::vector<std::vector<int>> config_sets;
    std::vector<ChiHint> chi_strategies{ChiHint::symmetric};
    SweepSpec sweep;
    std::optional<ShotBudget> shots;
    std::vector<Estimator> estimators{Estimator::theorem1};
    bool strict = false;
    json source;  ///< config echo

    SchmidtVector schmidt_vector() const {
        switch (schmidt.kind) {
            case SchmidtSpec::Kind::proportional: return SchmidtVector::proportional(dimension);
            case SchmidtSpec::Kind::uniform: return SchmidtVector::uniform(dimension);
            case SchmidtSpec::Kind::explicit_values: return SchmidtVector::normalized(schmidt.values);
        }
        throw std::logic_error("unknown schmidt kind");
    }

    /// Noise at one sweep point.
    NoiseParams noise_at(double x) const {
        if (noise.kind == NoiseSpec::Kind::white) return WhiteNoise{x};
        Crosstalk c{noise.eps_a, noise.eps_b, noise.model};
        switch (sweep.parameter) {
            case SweepParameter::eps_a: c.eps_a = x; break;
            case SweepParameter::eps_b: c.eps_b = x; break;
            case SweepParameter::crosstalk_ratio:
                c.eps_a = noise.total * x;
                c.eps_b = noise.total * (1.0 - x);
                break;
            case SweepParameter::eps: break;
        }
        return c;
    }

    std::vector<int> measured_configs() const {
        std::set<int> all;
        for (const auto& m : config_sets) all.insert(m.begin(), m.end());
        return {all.begin(), all.end()};
    }
};

// ---------------------------------------------------------------------------
// parsing and validation

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

template <class T>
T field(const json& obj, const std::string& path, const std::string& key, std::optional<T> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ScenarioError("missing field '" + path + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError("field '" + path + key + "' has the wrong type (" + obj.at(key).dump() + ")");
    }
}

inline std::vector<int> config_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ScenarioError("field '" + path + "' must be a list of config indices");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ScenarioError("field '" + path + "' holds a non-integer entry " + v.dump());
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace detail

/// Every invariant the scenario violates; empty when valid.
inline std::vector<std::string> validate(const Scenario& sc) {
    std::vector<std::string> errs;
    const int d = sc.dimension;
    if (d < 2) errs.push_back("dimension must be >= 2");
    if (sc.schmidt.kind == SchmidtSpec::Kind::explicit_values) {
        if (static_cast<int>(sc.schmidt.values.size()) != d) errs.push_back("schmidt.values must have 'dimension' entries");
        for (double v : sc.schmidt.values) {
            if (!(v > 0.0)) {
                errs.push_back("schmidt.values must be strictly positive");
                break;
            }
        }
    }
    if (sc.config_sets.empty()) errs.push_back("at least one config set is required");
    for (const auto& m : sc.config_sets) {
        if (m.empty()) errs.push_back("config sets must be nonempty");
        for (int j : m) {
            if (j < 0 || j >= d) errs.push_back("config index " + std::to_string(j) + " outside [0, dimension)");
        }
    }
    if (sc.chi_strategies.empty()) errs.push_back("at least one chi strategy is required");
    if (sc.estimators.empty()) errs.push_back("at least one estimator is required");
    if (sc.sweep.steps < 1) errs.push_back("sweep.steps must be >= 1");

    const bool white = sc.noise.kind == NoiseSpec::Kind::white;
    const auto p = sc.sweep.parameter;
    if (white && p != SweepParameter::eps) errs.push_back("white noise can only sweep 'eps'");
    if (!white && p == SweepParameter::eps) errs.push_back("crosstalk noise sweeps eps_a, eps_b or crosstalk_ratio");
    const double lo = std::min(sc.sweep.from, sc.sweep.to), hi = std::max(sc.sweep.from, sc.sweep.to);
    if (white) {
        if (lo < 0.0 || hi > 1.0) errs.push_back("sweep range for eps must lie in [0, 1]");
    } else if (d >= 2) {
        const double factor = sc.noise.model == CrosstalkModel::trace_preserving ? 2.0 : 2.0 * d;
        if (sc.noise.model == CrosstalkModel::raw) errs.push_back("crosstalk model 'raw' is not a state and cannot be simulated");
        auto check = [&](double ea, double eb) {
            if (ea < 0.0 || eb < 0.0 || factor * (ea + eb) > 1.0) {
                errs.push_back("crosstalk weights out of range at eps_a=" + std::to_string(ea) + ", eps_b=" + std::to_string(eb));
                return false;
            }
            return true;
        };
        switch (p) {
            case SweepParameter::eps_a: check(lo, sc.noise.eps_b) && check(hi, sc.noise.eps_b); break;
            case SweepParameter::eps_b: check(sc.noise.eps_a, lo) && check(sc.noise.eps_a, hi); break;
            case SweepParameter::crosstalk_ratio:
                if (lo < 0.0 || hi > 1.0) errs.push_back("crosstalk_ratio must lie in [0, 1]");
                check(sc.noise.total, 0.0);
                break;
            case SweepParameter::eps: break;
        }
    }
    if (sc.shots && sc.shots->shots < 1) errs.push_back("mode.shots must be >= 1");
    return errs;
}

inline Scenario scenario_from_json(const json& root) {
    using detail::field;
    if (!root.is_object()) throw ScenarioError("scenario must be a JSON object");
    Scenario sc;
    sc.source = root;
    sc.name = field<std::string>(root, "", "name", std::string("scenario"));
    sc.dimension = field<int>(root, "", "dimension");

    if (root.contains("schmidt")) {
        const json& s = root.at("schmidt");
        const auto kind = field<std::string>(s, "schmidt.", "kind");
        if (kind == "proportional") {
            sc.schmidt.kind = SchmidtSpec::Kind::proportional;
        } else if (kind == "uniform") {
            sc.schmidt.kind = SchmidtSpec::Kind::uniform;
        } else if (kind == "explicit") {
            sc.schmidt.kind = SchmidtSpec::Kind::explicit_values;
            sc.schmidt.values = field<std::vector<double>>(s, "schmidt.", "values");
        } else {
            throw ScenarioError("field 'schmidt.kind' must be proportional, uniform or explicit (got '" + kind + "')");
        }
    }
    sc.adapt_schmidt = field<bool>(root, "", "adapt_schmidt", false);

    const json& n = root.contains("noise") ? root.at("noise") : json::object({{"kind", "white"}});
    const auto noise_kind = field<std::string>(n, "noise.", "kind");
    if (noise_kind == "white") {
        sc.noise.kind = NoiseSpec::Kind::white;
        sc.noise.eps = field<double>(n, "noise.", "eps", 0.0);
    } else if (noise_kind == "crosstalk") {
        sc.noise.kind = NoiseSpec::Kind::crosstalk;
        sc.noise.eps_a = field<double>(n, "noise.", "eps_a", 0.0);
        sc.noise.eps_b = field<double>(n, "noise.", "eps_b", 0.0);
        sc.noise.total = field<double>(n, "noise.", "total", sc.noise.eps_a + sc.noise.eps_b);
        const auto model = field<std::string>(n, "noise.", "model", std::string("trace_preserving"));
        if (model == "trace_preserving") {
            sc.noise.model = CrosstalkModel::trace_preserving;
        } else if (model == "renormalized") {
            sc.noise.model = CrosstalkModel::renormalized;
        } else if (model == "raw") {
            sc.noise.model = CrosstalkModel::raw;
        } else {
            throw ScenarioError("field 'noise.model' must be trace_preserving, renormalized or raw");
        }
    } else {
        throw ScenarioError("field 'noise.kind' must be white or crosstalk (got '" + noise_kind + "')");
    }

    if (root.contains("config_sets")) {
        const json& sets = root.at("config_sets");
        if (!sets.is_array()) throw ScenarioError("field 'config_sets' must be a list of lists");
        for (std::size_t i = 0; i < sets.size(); ++i) {
            sc.config_sets.push_back(detail::config_list(sets[i], "config_sets[" + std::to_string(i) + "]"));
        }
    }
    if (root.contains("configs")) sc.config_sets.push_back(detail::config_list(root.at("configs"), "configs"));

    if (root.contains("chi_strategies")) {
        sc.chi_strategies.clear();
        for (const auto& name : field<std::vector<std::string>>(root, "", "chi_strategies")) {
            try {
                sc.chi_strategies.push_back(chi_hint_from_string(name));
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(std::string("field 'chi_strategies': ") + e.what());
            }
        }
    }

    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        const auto param = field<std::string>(sw, "sweep.", "parameter");
        bool known = false;
        for (SweepParameter p : {SweepParameter::eps, SweepParameter::eps_a, SweepParameter::eps_b, SweepParameter::crosstalk_ratio}) {
            if (param == to_string(p)) {
                sc.sweep.parameter = p;
                known = true;
            }
        }
        if (!known) throw ScenarioError("field 'sweep.parameter' is unknown ('" + param + "')");
        sc.sweep.from = field<double>(sw, "sweep.", "from", 0.0);
        sc.sweep.to = field<double>(sw, "sweep.", "to");
        sc.sweep.steps = field<int>(sw, "sweep.", "steps", 101);
    } else {
        // A single point at the configured noise level.
        if (sc.noise.kind == NoiseSpec::Kind::white) {
            sc.sweep = {SweepParameter::eps, sc.noise.eps, sc.noise.eps, 1};
        } else {
            sc.sweep = {SweepParameter::eps_a, sc.noise.eps_a, sc.noise.eps_a, 1};
        }
    }

    if (root.contains("mode")) {
        const json& m = root.at("mode");
        const auto kind = field<std::string>(m, "mode.", "kind");
        if (kind == "shots") {
            sc.shots = ShotBudget{field<std::int64_t>(m, "mode.", "shots"), field<std::uint64_t>(m, "mode.", "seed", std::uint64_t{0})};
        } else if (kind != "exact") {
            throw ScenarioError("field 'mode.kind' must be exact or shots");
        }
    }

    if (root.contains("estimators")) {
        sc.estimators.clear();
        for (const auto& name : field<std::vector<std::string>>(root, "", "estimators")) {
            if (name == "theorem1") {
                sc.estimators.push_back(Estimator::theorem1);
            } else if (name == "nonadaptive") {
                sc.estimators.push_back(Estimator::nonadaptive);
            } else if (name == "lemma2_trivial") {
                sc.estimators.push_back(Estimator::lemma2_trivial);
            } else {
                throw ScenarioError("field 'estimators' holds unknown estimator '" + name + "'");
            }
        }
    }
    sc.strict = field<bool>(root, "", "strict", false);

    const auto errs = validate(sc);
    if (!errs.empty()) {
        std::string msg = "invalid scenario '" + sc.name + "':";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ScenarioError(msg);
    }
    return sc;
}

inline Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError("parse error at line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
    }
    return scenario_from_json(root);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

// ---------------------------------------------------------------------------
// presets

inline json preset_json(std::string_view name) {
    auto nested = [](int d) {
        json sets = json::array();
        for (int n = 1; n <= d; ++n) {
            json m = json::array();
            for (int j = 0; j < n; ++j) m.push_back(j);
            sets.push_back(m);
        }
        return sets;
    };
    if (name == "fig1") {
        return {{"name", "fig1"},
                {"dimension", 7},
                {"schmidt", {{"kind", "proportional"}}},
                {"noise", {{"kind", "white"}}},
                {"config_sets", nested(7)},
                {"chi_strategies", {"symmetric"}},
                {"sweep", {{"parameter", "eps"}, {"from", 0.0}, {"to", 1.0}, {"steps", 101}}},
                {"estimators", {"theorem1", "nonadaptive"}},
                {"strict", true}};
    }
    if (name == "fig2") {
        return {{"name", "fig2"},
                {"dimension", 9},
                {"schmidt", {{"kind", "explicit"}, {"values", {0.0592, 0.118, 0.178, 0.237, 0.296, 0.355, 0.415, 0.474, 0.533}}}},
                {"noise", {{"kind", "white"}}},
                {"config_sets", nested(9)},
                {"chi_strategies", {"symmetric"}},
                {"sweep", {{"parameter", "eps"}, {"from", 0.0}, {"to", 1.0}, {"steps", 101}}},
                {"estimators", {"theorem1", "nonadaptive"}},
                {"strict", true}};
    }
    if (name == "fig3") {
        return {{"name", "fig3"},
                {"dimension", 7},
                {"schmidt", {{"kind", "explicit"}, {"values", {0.086, 0.243, 0.446, 0.686, 0.446, 0.243, 0.086}}}},
                {"noise", {{"kind", "crosstalk"}, {"total", 0.04}, {"model", "trace_preserving"}}},
                {"config_sets", {{0}}},
                {"chi_strategies", {"one_side_A", "one_side_B", "symmetric", "crosstalk_opt"}},
                {"sweep", {{"parameter", "crosstalk_ratio"}, {"from", 0.0}, {"to", 1.0}, {"steps", 101}}},
                {"estimators", {"theorem1"}},
                {"strict", true}};
    }
    throw ScenarioError("unknown preset '" + std::string(name) + "' (expected fig1, fig2 or fig3)");
}

inline Scenario preset(std::string_view name) { return scenario_from_json(preset_json(name)); }

// ---------------------------------------------------------------------------
// running

struct BoundsColumn {
    Estimator estimator;
    std::size_t config_set;
    ChiHint chi;
    std::string name;
};

struct StrategyPoint {
    ChiPair chi;
    double error = 0.0;
    std::map<int, double> v_j;
};

struct ReportRow {
    double parameter = 0.0;
    double exact_fidelity = 0.0;
    double v_e = 0.0;
    std::vector<FidelityBounds> bounds;  ///< aligned with BoundsReport::columns; NaN bounds when degenerate
    std::vector<StrategyPoint> strategies;  ///< aligned with Scenario::chi_strategies
    std::vector<std::string> notes;
    bool sandwich_ok = true;
    bool clamped = false;
};

struct BoundsReport {
    std::vector<BoundsColumn> columns;
    std::vector<int> measured_configs;
    std::vector<ReportRow> rows;
    int violations = 0;
};

inline std::string config_set_label(std::span<const int> m) {
    std::string s = "M";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "-" : "") + std::to_string(m[i]);
    return s;
}

namespace detail {

/// V_psi = u_e V_e + (1 - u_e) avg_j V_j with u_e = 1/(|M| + 1).
inline Verifier uniform_mixture(const Ket& psi, std::span<const int> configs, const ChiPair& chi) {
    std::vector<Verifier> vs;
    for (int j : configs) vs.push_back(bell_verifier(j, chi));
    const auto w = VerifierWeights::uniform(configs, 1.0 / (static_cast<double>(configs.size()) + 1.0));
    return mix_verifiers(w, comp_basis_verifier(psi), vs);
}

inline FidelityBounds degenerate(BoundMethod m, const std::string& why, ReportRow& row) {
    FidelityBounds b;
    b.method = m;
    b.lower = b.upper = b.raw_lower = b.raw_upper = std::numeric_limits<double>::quiet_NaN();
    row.notes.push_back(why);
    return b;
}

}  // namespace detail

inline BoundsReport run_scenario(const Scenario& sc) {
    BoundsReport rep;
    rep.measured_configs = sc.measured_configs();
    for (Estimator e : sc.estimators) {
        for (std::size_t c = 0; c < sc.config_sets.size(); ++c) {
            for (ChiHint h : sc.chi_strategies) {
                rep.columns.push_back({e, c, h,
                                       std::string(to_string(e)) + "_" + config_set_label(sc.config_sets[c]) + "_" + to_string(h)});
            }
        }
    }

    const SchmidtVector prep = sc.schmidt_vector();
    const Ket prep_psi = bell_state(prep);
    const int d = sc.dimension;

    for (double x : sc.sweep.grid()) {
        ReportRow row;
        row.parameter = x;
        const DensityMatrix rho = apply_noise(prep_psi, sc.noise_at(x));

        CompBasisStats p_e = comp_basis_stats(rho);
        if (sc.shots) p_e = sample_stats(p_e, sc.shots->shots, derive_seed(sc.shots->seed, 0));
        const SchmidtVector target = sc.adapt_schmidt ? schmidt_from_stats(p_e) : prep;
        const Ket psi = bell_state(target);
        row.exact_fidelity = exact_fidelity(rho, psi);
        row.v_e = comp_verifier_expectation(p_e);

        for (ChiHint h : sc.chi_strategies) {
            StrategyPoint sp{optimize_chi(p_e, target, h), 0.0, {}};
            sp.error = error_expectation(sp.chi, p_e);
            for (int j : rep.measured_configs) {
                ConfigStats cs = config_stats(rho, MeasurementConfig{j, sp.chi});
                if (sc.shots) cs = sample_stats(cs, sc.shots->shots, derive_seed(sc.shots->seed, static_cast<std::uint64_t>(j) + 1));
                sp.v_j[j] = config_verifier_expectation(sp.chi, cs);
            }
            row.strategies.push_back(std::move(sp));
        }

        for (const auto& col : rep.columns) {
            const auto hidx = static_cast<std::size_t>(
                std::find(sc.chi_strategies.begin(), sc.chi_strategies.end(), col.chi) - sc.chi_strategies.begin());
            const StrategyPoint& sp = row.strategies[hidx];
            const auto m = normalize_config_set(sc.config_sets[col.config_set], d);
            std::map<int, double> v_j;
            double avg = 0.0;
            for (int j : m) {
                v_j[j] = sp.v_j.at(j);
                avg += v_j[j] / static_cast<double>(m.size());
            }
            FidelityBounds b;
            try {
                if (col.estimator == Estimator::theorem1) {
                    b = theorem1_bounds(row.v_e, v_j, sp.error, d);
                } else {
                    const Verifier v_psi = detail::uniform_mixture(psi, m, sp.chi);
                    const double u_e = 1.0 / (static_cast<double>(m.size()) + 1.0);
                    const double v_psi_exp = u_e * row.v_e + (1.0 - u_e) * avg;
                    if (col.estimator == Estimator::nonadaptive) {
                        b = nonadaptive_bounds(v_psi, psi, v_psi_exp);
                    } else {
                        b = lemma2_bounds(v_psi_exp, 1.0, coefficients_from(trivial_decomposition(v_psi, psi)));
                    }
                }
            } catch (const DegenerateBound& e) {
                b = detail::degenerate(col.estimator == Estimator::theorem1 ? BoundMethod::theorem1 : BoundMethod::nonadaptive,
                                       col.name + ": " + e.what(), row);
            }
            if (!std::isnan(b.lower) && !b.sandwiches(row.exact_fidelity)) {
                row.sandwich_ok = false;
                row.notes.push_back(col.name + ": oracle fidelity outside [lower, upper]");
            }
            row.clamped = row.clamped || b.clamped;
            row.bounds.push_back(std::move(b));
        }
        if (!row.sandwich_ok) ++rep.violations;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// emission

/// Shortest round-trip decimal; "nan" / "inf" for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string report_csv(const Scenario& sc, const BoundsReport& rep) {
    std::string out = "sweep_param,exact_F";
    for (const auto& c : rep.columns) out += "," + c.name + "_lower," + c.name + "_upper";
    out += ",V_e";
    for (ChiHint h : sc.chi_strategies) {
        out += std::string(",E_") + to_string(h);
        for (int j : rep.measured_configs) out += ",V" + std::to_string(j) + "_" + to_string(h);
    }
    out += ",sandwich_ok,clamped\n";
    for (const auto& r : rep.rows) {
        out += format_double(r.parameter) + "," + format_double(r.exact_fidelity);
        for (const auto& b : r.bounds) out += "," + format_double(b.lower) + "," + format_double(b.upper);
        out += "," + format_double(r.v_e);
        for (const auto& sp : r.strategies) {
            out += "," + format_double(sp.error);
            for (int j : rep.measured_configs) out += "," + format_double(sp.v_j.at(j));
        }
        out += std::string(",") + (r.sandwich_ok ? "1" : "0") + "," + (r.clamped ? "1" : "0") + "\n";
    }
    return out;
}

inline json chi_json(const ChiVector& v) {
    json re = json::array(), im = json::array();
    for (const Complex& c : v.values()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return {{"re", re}, {"im", im}};
}

inline json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_json(const Scenario& sc, const BoundsReport& rep) {
    json cols = json::array();
    for (const auto& c : rep.columns) {
        cols.push_back({{"name", c.name},
                        {"estimator", to_string(c.estimator)},
                        {"config_set", sc.config_sets[c.config_set]},
                        {"chi_strategy", to_string(c.chi)}});
    }
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json bounds = json::array();
        for (std::size_t i = 0; i < r.bounds.size(); ++i) {
            const auto& b = r.bounds[i];
            json jb = {{"column", rep.columns[i].name},
                       {"lower", nullable(b.lower)},
                       {"upper", nullable(b.upper)},
                       {"raw_lower", nullable(b.raw_lower)},
                       {"raw_upper", nullable(b.raw_upper)},
                       {"clamped", b.clamped}};
            if (b.exact) jb["exact"] = *b.exact;
            if (!b.chosen_subset.empty()) {
                jb["chosen_subset"] = b.chosen_subset;
                jb["error_coefficient"] = b.error_coefficient;
            }
            bounds.push_back(std::move(jb));
        }
        json strategies = json::array();
        for (std::size_t i = 0; i < r.strategies.size(); ++i) {
            const auto& sp = r.strategies[i];
            json vj = json::object();
            for (const auto& [j, v] : sp.v_j) vj[std::to_string(j)] = v;
            strategies.push_back({{"chi_strategy", to_string(sc.chi_strategies[i])},
                                  {"chi_a", chi_json(sp.chi.a)},
                                  {"chi_b", chi_json(sp.chi.b)},
                                  {"E", sp.error},
                                  {"V_j", vj}});
        }
        rows.push_back({{"sweep_param", r.parameter},
                        {"exact_F", r.exact_fidelity},
                        {"V_e", r.v_e},
                        {"bounds", bounds},
                        {"strategies", strategies},
                        {"sandwich_ok", r.sandwich_ok},
                        {"clamped", r.clamped},
                        {"notes", r.notes}});
    }
    json provenance = {{"library", "qsfe"}, {"version", kVersion}, {"mode", sc.shots ? "shots" : "exact"}};
    if (sc.shots) {
        provenance["shots"] = sc.shots->shots;
        provenance["seed"] = sc.shots->seed;
    }
    return {{"config", sc.source},
            {"provenance", provenance},
            {"sweep_parameter", to_string(sc.sweep.parameter)},
            {"columns", cols},
            {"rows", rows},
            {"violations", rep.violations}};
}

/// 2 when strict, in exact mode, and some row breaks the sandwich; else 0.
/// Sampled statistics can legitimately miss, so shot mode never fails.
inline int strict_exit_code(const Scenario& sc, const BoundsReport& rep) {
    return sc.strict && !sc.shots && rep.violations > 0 ? 2 : 0;
}

struct RunResult {
    BoundsReport report;
    std::filesystem::path csv_path;
    std::filesystem::path json_path;
    int exit_code = 0;
};

/// Runs the scenario and writes <out>/<name>.csv and <out>/<name>.json.
/// Nonzero exit code when strict and an exact-mode row breaks the sandwich.
inline RunResult run_and_write(const Scenario& sc, const std::filesystem::path& out_dir) {
    RunResult res;
    res.report = run_scenario(sc);
    std::filesystem::create_directories(out_dir);
    res.csv_path = out_dir / (sc.name + ".csv");
    res.json_path = out_dir / (sc.name + ".json");
    std::ofstream(res.csv_path, std::ios::binary) << report_csv(sc, res.report);
    std::ofstream(res.json_path, std::ios::binary) << report_json(sc, res.report).dump(2) << "\n";
    res.exit_code = strict_exit_code(sc, res.report);
    return res;
}

}  // namespace qsfe
