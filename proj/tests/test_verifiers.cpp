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

#include "qsfe/random.hpp"
#include "qsfe/verifiers.hpp"

#include <gtest/gtest.h>

using namespace qsfe;

namespace {

struct Instance {
    SchmidtVector s;
    ChiPair chi;
    Ket psi;
};

Instance random_instance(random::Rng& rng, int d) {
    auto s = random::schmidt(rng, d);
    auto chi = random::chi_pair(rng, s);
    Ket psi = bell_state(s);
    return {std::move(s), std::move(chi), std::move(psi)};
}

}  // namespace

TEST(CompVerifier, QubitBell) {
    const Verifier v = comp_basis_verifier(bell_state(SchmidtVector::uniform(2)));
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1.0;
    EXPECT_EQ(max_abs(v.op - expect), 0.0);
}

TEST(CompVerifier, RankAndWhiteNoiseExpectation) {
    for (int d = 2; d <= 9; ++d) {
        const Ket psi = bell_state(SchmidtVector::proportional(d));
        const Verifier v = comp_basis_verifier(psi);
        EXPECT_EQ(hermitian_rank(v.op), d);
        EXPECT_LE(v.stabilizer_residual(psi), 1e-15);
        const double eps = 0.35;
        const auto p = comp_basis_stats(white_noise_state(psi, eps));
        EXPECT_NEAR(comp_verifier_expectation(p), (1 - eps) + eps / d, 1e-14);
    }
}

TEST(Lemma1Verifier, MatchesBellVerifier) {
    random::Rng rng(11);
    for (int d = 2; d <= 7; ++d) {
        const auto in = random_instance(rng, d);
        for (int j = 0; j < d; ++j) {
            const Verifier l = lemma1_verifier(MeasurementConfig{j, in.chi}, in.psi);
            const Verifier b = bell_verifier(j, in.chi);
            EXPECT_LE(max_abs(l.op - b.op), 1e-10) << "d=" << d << " j=" << j;
            EXPECT_LE(l.stabilizer_residual(in.psi), 1e-10);
        }
    }
}

TEST(Lemma1Verifier, QubitMubUsesOnlyDPairs) {
    const auto s = SchmidtVector::uniform(2);
    const auto chi = make_chi_pair(ChiVector::uniform(2), ChiVector::uniform(2));
    const Verifier v = lemma1_verifier(MeasurementConfig{0, chi}, bell_state(s));
    // The verifier is diagonal in the product eigenbasis; count nonzero weights.
    const auto ba = hw_eigenbasis(0, chi.a), bb = hw_eigenbasis(0, chi.b);
    int nonzero = 0;
    for (int ma = 0; ma < 2; ++ma) {
        for (int mb = 0; mb < 2; ++mb) {
            const Ket e = tensor_product(ba[ma], bb[mb]);
            if (std::abs(e.dot(v.op * e)) > 1e-12) ++nonzero;
        }
    }
    EXPECT_EQ(nonzero, 2);
}

TEST(BellVerifier, RankStabilizationAndSpectrum) {
    random::Rng rng(12);
    for (int d = 2; d <= 9; ++d) {
        const auto in = random_instance(rng, d);
        for (int j = 0; j < d; ++j) {
            const Verifier v = bell_verifier(j, in.chi);
            EXPECT_TRUE(is_hermitian(v.op));
            EXPECT_EQ(hermitian_rank(v.op), d) << "d=" << d << " j=" << j;
            EXPECT_LE(v.stabilizer_residual(in.psi), 1e-10);
            EXPECT_NEAR(trace_product_real(v.op, projector(in.psi)), 1.0, 1e-10);
            EXPECT_GE(min_eigenvalue(v.op), -1e-10);
        }
    }
}

TEST(BellVerifier, DecomposesIntoBellFamily) {
    random::Rng rng(13);
    for (int d = 2; d <= 9; ++d) {
        const auto in = random_instance(rng, d);
        const double n0 = in.chi.normalization(0);
        for (int j = 0; j < d; ++j) {
            ComplexMatrix rec = ComplexMatrix::Zero(d * d, d * d);
            for (int mu = 0; mu < d; ++mu) {
                const int nu = mod(-static_cast<long long>(mu) * j, d);
                rec += (in.chi.normalization(mu) / n0) * projector(generalized_bell_state({mu, nu}, in.chi));
            }
            EXPECT_LE(max_abs(rec - bell_verifier(j, in.chi).op), 1e-9) << "d=" << d << " j=" << j;
        }
    }
}

TEST(ErrorOp, UniformChiCoefficientOne) {
    const int d = 4;
    const auto e = error_operator(make_chi_pair(ChiVector::uniform(d), ChiVector::uniform(d)));
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) EXPECT_NEAR(e.diag(a * d + b), a == b ? 0.0 : 1.0, 1e-14);
    }
}

TEST(ErrorOp, DecompositionAndTargetExpectation) {
    random::Rng rng(14);
    for (int d = 2; d <= 9; ++d) {
        const auto in = random_instance(rng, d);
        const auto e = error_operator(in.chi);
        EXPECT_NEAR(trace_product_real(e.matrix(), projector(in.psi)), 0.0, 1e-12);
        EXPECT_NEAR(e.expectation(comp_basis_stats(pure_state(in.psi))), 0.0, 1e-15);
        ComplexMatrix rec = ComplexMatrix::Zero(d * d, d * d);
        const double n0 = in.chi.normalization(0);
        for (int mu = 1; mu < d; ++mu) {
            for (int nu = 0; nu < d; ++nu) {
                rec += (in.chi.normalization(mu) / n0) * projector(generalized_bell_state({mu, nu}, in.chi));
            }
        }
        EXPECT_LE(max_abs(rec - e.matrix()), 1e-9) << "d=" << d;
    }
}

TEST(InfoOp, DiagonalAndStabilizing) {
    random::Rng rng(15);
    for (int d = 2; d <= 8; ++d) {
        const auto in = random_instance(rng, d);
        const auto info = info_operator(comp_basis_verifier(in.psi), error_operator(in.chi));
        EXPECT_LE((info.matrix() * in.psi - in.psi).norm(), 1e-10);
        const auto rho = random::density(rng, d);
        EXPECT_NEAR(info.expectation(comp_basis_stats(rho)), trace_product_real(info.matrix(), rho.matrix()), 1e-12);
        EXPECT_NEAR(info.expectation(comp_basis_stats(pure_state(in.psi))), 1.0, 1e-12);
    }
}

TEST(InfoOp, WhiteNoiseUniformPrime) {
    for (int d : {2, 3, 5, 7}) {
        const auto s = SchmidtVector::uniform(d);
        const auto chi = make_chi_pair(ChiVector::uniform(d), ChiVector::uniform(d));
        const double eps = 0.4;
        const auto p = comp_basis_stats(white_noise_state(bell_state(s), eps));
        const auto info = info_operator(comp_basis_verifier(bell_state(s)), error_operator(chi));
        EXPECT_NEAR(info.expectation(p), comp_verifier_expectation(p) + eps * (d - 1) / d, 1e-14);
    }
}

TEST(InfoOp, RejectsNonDiagonalVe) {
    const auto chi = make_chi_pair(ChiVector::uniform(2), ChiVector::uniform(2));
    EXPECT_THROW(info_operator(bell_verifier(0, chi), error_operator(chi)), std::invalid_argument);
}

TEST(Mixture, Weights) {
    random::Rng rng(16);
    const auto in = random_instance(rng, 5);
    const Verifier v_e = comp_basis_verifier(in.psi);
    std::vector<Verifier> vs;
    for (int j = 0; j < 5; ++j) vs.push_back(bell_verifier(j, in.chi));
    const std::vector<int> m{0, 2, 3};
    EXPECT_LE(max_abs(mix_verifiers(VerifierWeights{1.0, {}}, v_e, vs).op - v_e.op), 1e-15);
    const auto avg = mix_verifiers(VerifierWeights::uniform(m, 0.0), v_e, vs);
    EXPECT_LE(max_abs(avg.op - (vs[0].op + vs[2].op + vs[3].op) / 3.0), 1e-14);
    EXPECT_LE(avg.stabilizer_residual(in.psi), 1e-10);
    EXPECT_THROW(VerifierWeights({0.5, {{0, 0.7}, {1, 0.7}}}).validate(), std::invalid_argument);
    EXPECT_THROW(VerifierWeights({1.5, {{0, 1.0}}}).validate(), std::invalid_argument);
    EXPECT_THROW(mix_verifiers(VerifierWeights{0.5, {{9, 1.0}}}, v_e, vs), std::invalid_argument);
}

TEST(Mixture, PrimeFullSumIdentity) {
    random::Rng rng(17);
    for (int d : {2, 3, 5, 7}) {
        const auto in = random_instance(rng, d);
        ComplexMatrix sum = ComplexMatrix::Zero(d * d, d * d);
        for (int j = 0; j < d; ++j) sum += bell_verifier(j, in.chi).op;
        EXPECT_LE(max_abs(sum - d * projector(in.psi) - error_operator(in.chi).matrix()), 1e-9) << "d=" << d;
    }
}

TEST(Mixture, CompositeSumIsNotTheIdentity) {
    // For d = 4 the psi_{2 nu} terms collide across j, so the identity fails.
    random::Rng rng(18);
    const auto in = random_instance(rng, 4);
    ComplexMatrix sum = ComplexMatrix::Zero(16, 16);
    for (int j = 0; j < 4; ++j) sum += bell_verifier(j, in.chi).op;
    EXPECT_GT(max_abs(sum - 4.0 * projector(in.psi) - error_operator(in.chi).matrix()), 1e-3);
}

TEST(Decomposition, ReconstructsVerifierAndInfo) {
    random::Rng rng(19);
    for (int t = 0; t < 40; ++t) {
        const int d = 2 + t % 8;
        const auto in = random_instance(rng, d);
        const auto m = random::config_set(rng, d);
        const double u_e = random::uniform(rng, 0.0, 1.0);
        const auto w = VerifierWeights::uniform(m, u_e);
        std::vector<Verifier> vs;
        for (int j : m) vs.push_back(bell_verifier(j, in.chi));
        const Verifier v_e = comp_basis_verifier(in.psi);
        const Verifier v_psi = mix_verifiers(w, v_e, vs);
        const auto dec = bell_decomposition(w, in.chi, in.psi);
        const ComplexMatrix pp = projector(in.psi);
        EXPECT_LE(max_abs(dec.reconstruct_lambda() - (v_psi.op - pp)), 1e-9) << "d=" << d;
        const auto info = info_operator(v_e, error_operator(in.chi));
        EXPECT_LE(max_abs(dec.reconstruct_r() - (info.matrix() - pp)), 1e-9) << "d=" << d;
    }
}

TEST(Expectations, BornRuleConsistency) {
    random::Rng rng(20);
    for (int d = 2; d <= 7; ++d) {
        const auto in = random_instance(rng, d);
        const auto rho = random::density(rng, d);
        const auto pe = comp_basis_stats(rho);
        EXPECT_NEAR(comp_verifier_expectation(pe), trace_product_real(comp_basis_verifier(in.psi).op, rho.matrix()), 1e-12);
        EXPECT_NEAR(error_expectation(in.chi, pe), error_operator(in.chi).expectation(pe), 1e-12);
        EXPECT_NEAR(error_expectation(in.chi, pe), trace_product_real(error_operator(in.chi).matrix(), rho.matrix()), 1e-12);
        for (int j = 0; j < d; ++j) {
            const auto cs = config_stats(rho, MeasurementConfig{j, in.chi});
            EXPECT_NEAR(config_verifier_expectation(in.chi, cs), trace_product_real(bell_verifier(j, in.chi).op, rho.matrix()), 1e-12);
        }
    }
}

TEST(Expectations, DispatchAndMismatch) {
    random::Rng rng(21);
    const auto in = random_instance(rng, 3);
    const auto rho = random::density(rng, 3);
    const auto pe = comp_basis_stats(rho);
    const auto c1 = config_stats(rho, MeasurementConfig{1, in.chi});
    EXPECT_NEAR(expectation_from_stats(CompVerifierSpec{}, &pe), comp_verifier_expectation(pe), 0.0);
    EXPECT_NEAR(expectation_from_stats(InfoSpec{in.chi}, &pe),
                comp_verifier_expectation(pe) + error_expectation(in.chi, pe), 1e-15);
    EXPECT_NEAR(expectation_from_stats(ConfigVerifierSpec{1, in.chi}, &c1), config_verifier_expectation(in.chi, c1), 0.0);
    EXPECT_THROW(expectation_from_stats(ConfigVerifierSpec{2, in.chi}, &c1), std::invalid_argument);
    EXPECT_THROW(expectation_from_stats(ErrorSpec{in.chi}, &c1), std::invalid_argument);
    EXPECT_THROW(expectation_from_stats(ConfigVerifierSpec{1, in.chi}, &pe), std::invalid_argument);
}
