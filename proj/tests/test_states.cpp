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

#include "qsfe/measurements.hpp"
#include "qsfe/random.hpp"
#include "qsfe/states.hpp"

#include <gtest/gtest.h>

using namespace qsfe;

namespace {

SchmidtVector fig3_schmidt() { return SchmidtVector::normalized({0.086, 0.243, 0.446, 0.686, 0.446, 0.243, 0.086}); }

}  // namespace

TEST(Schmidt, MaximallyEntangledQubits) {
    const Ket psi = bell_state(SchmidtVector::uniform(2));
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(psi(0) - r), 0.0, 1e-15);
    EXPECT_EQ(psi(1), Complex(0.0));
    EXPECT_EQ(psi(2), Complex(0.0));
    EXPECT_NEAR(std::abs(psi(3) - r), 0.0, 1e-15);
}

TEST(Schmidt, ProportionalFirstCoefficient) {
    const auto s = SchmidtVector::proportional(7);
    EXPECT_NEAR(s[0], 0.0845, 5e-5);
    EXPECT_NEAR(s[6], 0.592, 5e-4);
    EXPECT_NEAR(bell_state(s)(0).real(), 1.0 / std::sqrt(140.0), 1e-15);
}

TEST(Schmidt, RejectsNonPositiveOrUnnormalized) {
    EXPECT_THROW(SchmidtVector({1.0, 0.0001, 0.0}), std::invalid_argument);
    EXPECT_THROW(SchmidtVector({1.0, 0.0001, 0.1}), std::invalid_argument);
    EXPECT_THROW(SchmidtVector({0.8, -0.6}), std::invalid_argument);
    EXPECT_THROW(SchmidtVector::normalized({1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_NO_THROW(SchmidtVector({0.6, 0.8}));
}

TEST(GeneralizedBell, ZeroIndexIsTarget) {
    random::Rng rng(1);
    for (int d = 2; d <= 7; ++d) {
        const auto s = random::schmidt(rng, d);
        const auto chi = random::chi_pair(rng, s);
        // chi products carry phases; the Bell state only fixes magnitudes of
        // chi_A chi_B. Compatibility is checked on the complex products, so the
        // random pair completed from chi_A reproduces psi exactly.
        EXPECT_LE((generalized_bell_state({0, 0}, chi) - bell_state(s)).norm(), 1e-12) << "d=" << d;
    }
}

TEST(GeneralizedBell, QubitShiftedUniform) {
    const ChiPair chi = make_chi_pair(ChiVector::uniform(2), ChiVector::uniform(2));
    const Ket v = generalized_bell_state({1, 0}, chi);
    const double r = 1.0 / std::sqrt(2.0);
    // |10> is index 2, |01> index 1.
    EXPECT_NEAR(std::abs(v(1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v(2) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v(0)) + std::abs(v(3)), 0.0, 1e-15);
}

TEST(GeneralizedBell, OrthonormalFamily) {
    random::Rng rng(2);
    const auto s = random::schmidt(rng, 5);
    const auto chi = random::chi_pair(rng, s);
    for (int mu = 0; mu < 5; ++mu) {
        for (int nu = 0; nu < 5; ++nu) {
            for (int mu2 = 0; mu2 < 5; ++mu2) {
                for (int nu2 = 0; nu2 < 5; ++nu2) {
                    const Complex ip = generalized_bell_state({mu, nu}, chi).dot(generalized_bell_state({mu2, nu2}, chi));
                    if (mu != mu2) {
                        EXPECT_EQ(std::abs(ip), 0.0);
                    } else if (nu == nu2) {
                        EXPECT_NEAR(std::abs(ip), 1.0, 1e-12);
                    }
                }
            }
        }
    }
}

TEST(WhiteNoise, Endpoints) {
    const Ket psi = bell_state(SchmidtVector::proportional(3));
    EXPECT_LE(max_abs(white_noise_state(psi, 0.0).matrix() - projector(psi)), 1e-15);
    EXPECT_LE(max_abs(white_noise_state(psi, 1.0).matrix() - ComplexMatrix::Identity(9, 9) / 9.0), 1e-15);
    EXPECT_THROW(white_noise_state(psi, 1.1), std::invalid_argument);
}

TEST(WhiteNoise, QubitFidelity) {
    const Ket psi = bell_state(SchmidtVector::uniform(2));
    EXPECT_NEAR(exact_fidelity(white_noise_state(psi, 0.5), psi), 0.625, 1e-15);
}

TEST(WhiteNoise, FidelityFormula) {
    for (int d = 2; d <= 9; ++d) {
        const Ket psi = bell_state(SchmidtVector::proportional(d));
        for (double eps : {0.0, 0.13, 0.5, 0.97}) {
            EXPECT_NEAR(exact_fidelity(white_noise_state(psi, eps), psi), (1 - eps) + eps / (d * d), 1e-14);
        }
    }
}

TEST(ExactFidelity, PureAndOrthogonal) {
    const auto s = SchmidtVector::proportional(4);
    const Ket psi = bell_state(s);
    EXPECT_NEAR(exact_fidelity(pure_state(psi), psi), 1.0, 1e-15);
    const ChiPair chi = complete_chi_pair_from_a(ChiVector::uniform(4), s);
    EXPECT_NEAR(exact_fidelity(pure_state(generalized_bell_state({1, 2}, chi)), psi), 0.0, 1e-15);
}

TEST(Crosstalk, ZeroNoiseIsTarget) {
    const Ket psi = bell_state(fig3_schmidt());
    for (auto model : {CrosstalkModel::trace_preserving, CrosstalkModel::renormalized}) {
        EXPECT_LE(max_abs(crosstalk_state(psi, 0.0, 0.0, model).matrix() - projector(psi)), 1e-15);
    }
}

TEST(Crosstalk, RawTrace) {
    for (int d : {2, 3, 7}) {
        const Ket psi = bell_state(SchmidtVector::proportional(d));
        const double ea = 0.01, eb = 0.02;
        const double tr = crosstalk_operator(psi, ea, eb, CrosstalkModel::raw).trace().real();
        EXPECT_NEAR(tr, 1.0 - 2.0 * (d - 1) * (ea + eb), 1e-14) << "d=" << d;
    }
    EXPECT_THROW(crosstalk_state(bell_state(SchmidtVector::uniform(2)), 0.1, 0.0, CrosstalkModel::raw),
                 std::invalid_argument);
}

TEST(Crosstalk, TracePreservingWeights) {
    const Ket psi = bell_state(fig3_schmidt());
    const auto rho = crosstalk_state(psi, 0.03, 0.01);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(exact_fidelity(rho, psi), 1.0 - 2.0 * 0.04, 1e-14);
}

TEST(Crosstalk, OneSidedStatistics) {
    const auto s = fig3_schmidt();
    const auto p = comp_basis_stats(crosstalk_state(bell_state(s), 0.04, 0.0));
    for (int a = 0; a < 7; ++a) {
        for (int b = 0; b < 7; ++b) {
            const int diff = mod(a - b, 7);
            if (diff == 1 || diff == 6) {
                EXPECT_GT(p(a, b), 0.0);
                // Side-A shift moves e_k to e_{k±1} on A only: p(a, b) = eps s_b^2.
                EXPECT_NEAR(p(a, b), 0.04 * s[b] * s[b], 1e-15);
            } else if (diff != 0) {
                EXPECT_EQ(p(a, b), 0.0);
            }
        }
    }
    // Asymmetric: p(k+1, k) uses s_k, p(k, k+1) uses s_{k+1}.
    EXPECT_GT(std::abs(p(1, 0) - p(0, 1)), 1e-3);
}

TEST(Crosstalk, BalancedStatisticsAreSymmetric) {
    const auto p = comp_basis_stats(crosstalk_state(bell_state(fig3_schmidt()), 0.02, 0.02));
    EXPECT_LE((p.p - p.p.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Density, Validation) {
    EXPECT_THROW(DensityMatrix(2, ComplexMatrix::Identity(4, 4)), std::invalid_argument);  // trace 4
    ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(2, neg), std::invalid_argument);
    EXPECT_THROW(DensityMatrix(3, ComplexMatrix::Identity(4, 4) / 4.0), std::invalid_argument);
}

TEST(Density, MixtureOfRandomStates) {
    random::Rng rng(8);
    const auto a = random::density(rng, 3), b = random::density(rng, 3);
    const std::vector<double> w{0.25, 0.75};
    const std::vector<DensityMatrix> parts{a, b};
    const auto m = DensityMatrix::mixture(w, parts);
    EXPECT_LE(max_abs(m.matrix() - (0.25 * a.matrix() + 0.75 * b.matrix())), 1e-15);
}

TEST(RandomStates, AlwaysValid) {
    random::Rng rng(21);
    for (int t = 0; t < 60; ++t) {
        const int d = 2 + t % 8;
        const auto s = random::schmidt(rng, d);
        const auto kind = static_cast<random::NoiseKind>(t % 3);
        const auto rho = random::noisy_state(rng, s, kind);
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_TRUE(is_psd(rho.matrix(), 1e-10));
    }
}
