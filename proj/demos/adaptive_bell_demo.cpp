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

// Estimate the fidelity of a noisy d=5 Bell-type state to its target with two
// measurement settings, then compare against the exact value.

#include "qsfe/estimation.hpp"

#include <cstdio>

int main() {
    const auto s = qsfe::SchmidtVector::proportional(5);
    const auto rho = qsfe::crosstalk_state(qsfe::bell_state(s), 0.03, 0.01);

    for (auto hint : {qsfe::ChiHint::symmetric, qsfe::ChiHint::general}) {
        qsfe::AdaptiveOptions opt{s, {0, 1}, hint, std::nullopt};
        const auto rep = qsfe::adaptive_estimate(rho, opt);
        std::printf("%-10s  <E>=%.5f  lower=%.6f  upper=%.6f\n", qsfe::to_string(hint),
                    qsfe::error_expectation(rep.chi, rep.p_e), rep.bounds.lower, rep.bounds.upper);
    }

    // Sampled statistics, 20000 shots per setting.
    qsfe::AdaptiveOptions sampled{s, {0, 1}, qsfe::ChiHint::general, qsfe::ShotBudget{20000, 11}};
    const auto rep = qsfe::adaptive_estimate(rho, sampled);
    std::printf("sampled     lower=%.6f  upper=%.6f\n", rep.bounds.lower, rep.bounds.upper);
    std::printf("exact F     %.6f\n", qsfe::exact_fidelity(rho, qsfe::bell_state(s)));
    return 0;
}
