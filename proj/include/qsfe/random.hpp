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

// Seeded generators for randomized instances (self-check and tests).

#include "qsfe/states.hpp"

#include <algorithm>
#include <random>

namespace qsfe::random {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Schmidt coefficients drawn from [0.05, 1] before normalization.
inline SchmidtVector schmidt(Rng& rng, int d) {
    std::vector<double> s(static_cast<std::size_t>(d));
    for (double& v : s) v = uniform(rng, 0.05, 1.0);
    return SchmidtVector::normalized(std::move(s));
}

/// Random complex chi_A (magnitudes in [0.2, 1], random phases) and the
/// chi_B that makes the pair compatible with s.
inline ChiPair chi_pair(Rng& rng, const SchmidtVector& s, bool complex_phases = true) {
    std::vector<Complex> a(static_cast<std::size_t>(s.dim()));
    for (Complex& c : a) {
        const double phase = complex_phases ? uniform(rng, 0.0, 2.0 * std::numbers::pi) : 0.0;
        c = std::polar(uniform(rng, 0.2, 1.0), phase);
    }
    return complete_chi_pair_from_a(ChiVector::normalized(std::move(a)), s);
}

/// Hermitian matrix with entries of order one.
inline ComplexMatrix hermitian(Rng& rng, int n) {
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    return hermitian_part(a);
}

/// Random density matrix G G^dag / tr, G Ginibre-like with entries in [-1,1].
inline DensityMatrix density(Rng& rng, int d) {
    const int n = d * d;
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(d, hermitian_part(rho));
}

/// Nonempty random subset of {0..d-1}, ascending.
inline std::vector<int> config_set(Rng& rng, int d) {
    std::vector<int> all(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) all[static_cast<std::size_t>(j)] = j;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(uniform_int(rng, 1, d)));
    std::sort(all.begin(), all.end());
    return all;
}

enum class NoiseKind { white, crosstalk, bell_mixture };

/// Testing state around psi(s): white noise, crosstalk, or a convex mixture
/// of psi with random generalized Bell states (built from an independent
/// random chi pair) and a white-noise floor.
inline DensityMatrix noisy_state(Rng& rng, const SchmidtVector& s, NoiseKind kind) {
    const Ket psi = bell_state(s);
    const int d = s.dim();
    switch (kind) {
        case NoiseKind::white: return white_noise_state(psi, uniform(rng, 0.0, 1.0));
        case NoiseKind::crosstalk: {
            const double total = uniform(rng, 0.0, 0.45);
            const double ratio = uniform(rng, 0.0, 1.0);
            return crosstalk_state(psi, total * ratio, total * (1.0 - ratio));
        }
        case NoiseKind::bell_mixture: {
            const ChiPair other = chi_pair(rng, schmidt(rng, d));
            const int parts = uniform_int(rng, 1, 4);
            std::vector<double> w;
            std::vector<DensityMatrix> states;
            w.push_back(uniform(rng, 0.0, 1.0));
            states.push_back(pure_state(psi));
            for (int i = 0; i < parts; ++i) {
                const GeneralizedBellIndex idx{uniform_int(rng, 0, d - 1), uniform_int(rng, 0, d - 1)};
                w.push_back(uniform(rng, 0.0, 1.0));
                states.push_back(pure_state(generalized_bell_state(idx, other)));
            }
            w.push_back(uniform(rng, 0.0, 0.3));
            states.push_back(white_noise_state(psi, 1.0));
            double total = 0.0;
            for (double v : w) total += v;
            for (double& v : w) v /= total;
            // Renormalize away the rounding left in the sum.
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < w.size(); ++i) acc += w[i];
            w.back() = 1.0 - acc;
            return DensityMatrix::mixture(w, states);
        }
    }
    throw std::logic_error("noisy_state: unknown kind");
}

inline NoiseKind noise_kind(Rng& rng) { return static_cast<NoiseKind>(uniform_int(rng, 0, 2)); }

}  // namespace qsfe::random
