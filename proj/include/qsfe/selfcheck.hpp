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

// Randomized invariant suite behind `qsfe selfcheck`.

#include "qsfe/estimation.hpp"
#include "qsfe/random.hpp"

#include <functional>
#include <sstream>

namespace qsfe {

struct InvariantCount {
    std::string name;
    int passed = 0;
    int failed = 0;
    std::string first_failure;
};

struct SelfcheckSummary {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<InvariantCount> invariants;

    bool ok() const {
        return std::all_of(invariants.begin(), invariants.end(), [](const auto& c) { return c.failed == 0; });
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "selfcheck seed=" << seed << " trials=" << trials << "\n";
        for (const auto& c : invariants) {
            os << "  " << c.name << ": " << c.passed << " passed, " << c.failed << " failed";
            if (c.failed) os << " (first: " << c.first_failure << ")";
            os << "\n";
        }
        os << (ok() ? "PASS" : "FAIL") << "\n";
        return os.str();
    }
};

struct SelfcheckOptions {
    std::uint64_t seed = 0;
    int trials = 200;
    /// Test hook: mutate each config verifier before the stabilization check.
    std::function<void(Verifier&)> corrupt_verifier;
};

inline SelfcheckSummary selfcheck(const SelfcheckOptions& opt) {
    if (opt.trials < 1) throw std::invalid_argument("selfcheck: trials must be >= 1");
    SelfcheckSummary sum{opt.seed, opt.trials, {{"stabilization"}, {"povm_validity"}, {"operator_identity"}, {"oracle_sandwich"}}};
    auto record = [&](std::size_t which, bool ok, int trial, int d, const std::string& what) {
        auto& c = sum.invariants[which];
        if (ok) {
            ++c.passed;
        } else {
            if (c.failed++ == 0) c.first_failure = "trial " + std::to_string(trial) + " d=" + std::to_string(d) + ": " + what;
        }
    };
    constexpr double tol = 1e-9;
    constexpr ChiHint hints[] = {ChiHint::symmetric, ChiHint::general, ChiHint::crosstalk,
                                 ChiHint::one_side_a, ChiHint::one_side_b, ChiHint::uniform};

    for (int t = 0; t < opt.trials; ++t) {
        random::Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(t)));
        const int d = 2 + t % 8;
        const SchmidtVector s = random::schmidt(rng, d);
        const Ket psi = bell_state(s);
        const ChiPair chi = random::chi_pair(rng, s);

        // Stabilization of V_e and every config verifier.
        double worst = comp_basis_verifier(psi).stabilizer_residual(psi);
        std::vector<Verifier> vs;
        for (int j = 0; j < d; ++j) {
            Verifier v = bell_verifier(j, chi);
            if (opt.corrupt_verifier) opt.corrupt_verifier(v);
            worst = std::max(worst, v.stabilizer_residual(psi));
            vs.push_back(std::move(v));
        }
        record(0, worst <= tol, t, d, "residual " + std::to_string(worst));

        // POVM validity on both sides of every config.
        bool povm_ok = true;
        for (int j = 0; j < d && povm_ok; ++j) {
            const MeasurementConfig cfg{j, chi};
            for (const Povm& p : {cfg.povm_a(), cfg.povm_b()}) {
                ComplexMatrix total = ComplexMatrix::Zero(d, d);
                for (const auto& e : p.elements) {
                    povm_ok = povm_ok && is_psd(e, 1e-10);
                    total += e;
                }
                povm_ok = povm_ok && max_abs(total - ComplexMatrix::Identity(d, d)) <= tol;
            }
        }
        record(1, povm_ok, t, d, "POVM not positive or incomplete");

        // Operator identity: prime d gives sum_j V_j = d psi psi^dag + E; every d
        // must reproduce V_psi^perp and I^perp from the Bell-family decomposition.
        const std::vector<int> m = random::config_set(rng, d);
        double defect = 0.0;
        if (is_prime(d)) {
            ComplexMatrix sum_v = ComplexMatrix::Zero(d * d, d * d);
            for (const auto& v : vs) sum_v += v.op;
            defect = max_abs(sum_v - static_cast<double>(d) * projector(psi) - error_operator(chi).matrix());
        }
        const auto w = VerifierWeights::uniform(m, 1.0 / (static_cast<double>(m.size()) + 1.0));
        std::vector<Verifier> picked;
        for (int j : m) picked.push_back(vs[static_cast<std::size_t>(j)]);
        const Verifier v_e = comp_basis_verifier(psi);
        const Verifier v_psi = mix_verifiers(w, v_e, picked);
        const VerifierDecomposition dec = bell_decomposition(w, chi, psi);
        defect = std::max(defect, max_abs(dec.reconstruct_lambda() - (v_psi.op - projector(psi))));
        defect = std::max(defect, max_abs(dec.reconstruct_r() - (info_operator(v_e, error_operator(chi)).matrix() - projector(psi))));
        record(2, defect <= tol, t, d, "defect " + std::to_string(defect));

        // Oracle sandwich with a random testing state and chi strategy.
        const DensityMatrix rho = random::noisy_state(rng, s, random::noise_kind(rng));
        const ChiHint hint = hints[random::uniform_int(rng, 0, 5)];
        const double f = exact_fidelity(rho, psi);
        std::string why;
        try {
            AdaptiveOptions ao{s, m, hint, std::nullopt};
            const auto rep = adaptive_estimate(rho, ao);
            if (!rep.bounds.sandwiches(f, tol)) why = "theorem1 with " + std::string(to_string(hint));
            try {
                const double exp_v = trace_product_real(v_psi.op, rho.matrix());
                if (!nonadaptive_bounds(v_psi, psi, exp_v).sandwiches(f, tol)) why = "nonadaptive";
            } catch (const DegenerateBound&) {
                // No bound to check.
            }
        } catch (const std::invalid_argument& e) {
            why = e.what();
        }
        record(3, why.empty(), t, d, why);
    }
    return sum;
}

}  // namespace qsfe
