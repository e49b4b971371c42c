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

/// State verifiers (Hermitian stabilizers of the target), the diagonal error
/// and information operators, their decompositions into generalized Bell
/// states, and evaluation of expectations from measured statistics.

#include "qsfe/measurements.hpp"

#include <map>
#include <optional>

namespace qsfe {

inline constexpr double kStabilizerTol = 1e-10;
inline constexpr double kSupportTol = 1e-10;

enum class VerifierOrigin { computational, config, mixture };

struct VerifierWeights {
    double u_e = 0.0;
    std::map<int, double> u;  ///< config index j -> u_j

    void validate() const {
        if (!(u_e >= 0.0 && u_e <= 1.0)) throw std::invalid_argument("VerifierWeights: u_e outside [0, 1]");
        if (u.empty()) {
            if (u_e != 1.0) throw std::invalid_argument("VerifierWeights: no config weights but u_e < 1");
            return;
        }
        double total = 0.0;
        for (const auto& [j, w] : u) {
            if (w < 0.0) throw std::invalid_argument("VerifierWeights: negative u_" + std::to_string(j));
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("VerifierWeights: config weights do not sum to 1");
    }

    static VerifierWeights uniform(std::span<const int> configs, double u_e) {
        VerifierWeights w{u_e, {}};
        for (int j : configs) w.u[j] = 1.0 / static_cast<double>(configs.size());
        return w;
    }
};

struct Verifier {
    ComplexMatrix op;
    VerifierOrigin origin = VerifierOrigin::computational;
    int j = 0;  ///< config index when origin == config
    std::optional<VerifierWeights> weights;

    /// ||V psi - psi||.
    double stabilizer_residual(const Ket& psi) const { return (op * psi - psi).norm(); }
};

/// V_e: projector onto the computational product states in the support of psi.
inline Verifier comp_basis_verifier(const Ket& psi) {
    const auto n = psi.size();
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(psi(i)) > kSupportTol) v(i, i) = 1.0;
    }
    return Verifier{std::move(v), VerifierOrigin::computational, 0, std::nullopt};
}

/// Lemma-1 verifier for an arbitrary local measurement pair: weights
/// v = d^2 <e,e|T_A^{-1} (x) T_B^{-1}|psi> / <e,e|T_A^dag (x) T_B^dag|psi>,
/// zero where the denominator vanishes.
inline Verifier lemma1_verifier(const MeasurementConfig& cfg, const Ket& psi) {
    const int d = cfg.chi.dim();
    if (psi.size() != static_cast<Eigen::Index>(d) * d) throw std::invalid_argument("lemma1_verifier: dimension mismatch");
    const auto basis_a = hw_eigenbasis(cfg.j, cfg.chi.a);
    const auto basis_b = hw_eigenbasis(-cfg.j, cfg.chi.b);
    ComplexMatrix ta(d, d), tb(d, d);
    for (int m = 0; m < d; ++m) {
        ta.col(m) = basis_a[static_cast<std::size_t>(m)];
        tb.col(m) = basis_b[static_cast<std::size_t>(m)];
    }
    auto rcond = [](const ComplexMatrix& t) {
        Eigen::JacobiSVD<ComplexMatrix> svd(t);
        const auto& sv = svd.singularValues();
        return sv(sv.size() - 1) / sv(0);
    };
    if (rcond(ta) < 1e-12 || rcond(tb) < 1e-12) {
        throw std::invalid_argument("lemma1_verifier: basis transform is singular");
    }
    const Ket num = tensor_product(ComplexMatrix(ta.inverse()), ComplexMatrix(tb.inverse())) * psi;
    const Ket den = tensor_product(ComplexMatrix(ta.adjoint()), ComplexMatrix(tb.adjoint())) * psi;
    const double zero_tol = 1e-12 * den.norm();

    const auto n = psi.size();
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (int ma = 0; ma < d; ++ma) {
        for (int mb = 0; mb < d; ++mb) {
            const Eigen::Index idx = ma * d + mb;
            if (std::abs(den(idx)) <= zero_tol) continue;
            const Complex weight = static_cast<double>(d) * d * num(idx) / den(idx);
            const Ket e = tensor_product(basis_a[static_cast<std::size_t>(ma)], basis_b[static_cast<std::size_t>(mb)]);
            v += (weight / (static_cast<double>(d) * d)) * projector(e);
        }
    }
    if (!is_hermitian(v, 1e-9)) {
        throw std::invalid_argument("lemma1_verifier: weights are not real, no Hermitian verifier for this target");
    }
    return Verifier{hermitian_part(v), VerifierOrigin::config, cfg.j, std::nullopt};
}

/// V_j = [d / N(0)] sum_{m<d} M_m[Omega_j(chi_A)] (x) M_{-m}[Omega_{-j}(chi_B)].
inline Verifier bell_verifier(int j, const ChiPair& chi) {
    const int d = chi.dim();
    const auto basis_a = hw_eigenbasis(j, chi.a);
    const auto basis_b = hw_eigenbasis(-j, chi.b);
    const auto n = static_cast<Eigen::Index>(d) * d;
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (int m = 0; m < d; ++m) {
        v += projector(tensor_product(basis_a[static_cast<std::size_t>(m)], basis_b[static_cast<std::size_t>(mod(-m, d))]));
    }
    v /= static_cast<double>(d) * chi.normalization(0);
    return Verifier{hermitian_part(v), VerifierOrigin::config, j, std::nullopt};
}

/// Computational-basis diagonal operator stored by its diagonal.
struct DiagonalOperator {
    RealVector diag;

    ComplexMatrix matrix() const { return diag.cast<Complex>().asDiagonal(); }
    /// Expectation from computational-basis statistics.
    double expectation(const CompBasisStats& stats) const {
        const int d = stats.dim();
        if (diag.size() != static_cast<Eigen::Index>(d) * d) throw std::invalid_argument("diagonal operator/stats dimension mismatch");
        double e = 0.0;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) e += diag(a * d + b) * stats(a, b);
        }
        return e;
    }
};

/// E = [d / N(0)] sum_{kA != kB} |chi_A[kA] chi_B[kB]|^2 |kA,kB><kA,kB|.
struct ErrorOperator : DiagonalOperator {};
/// I = V_e + E.
struct InfoOperator : DiagonalOperator {};

inline ErrorOperator error_operator(const ChiPair& chi) {
    const int d = chi.dim();
    const double coeff = d / chi.normalization(0);
    ErrorOperator e{{RealVector::Zero(static_cast<Eigen::Index>(d) * d)}};
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a != b) e.diag(a * d + b) = coeff * std::norm(chi.a[a] * chi.b[b]);
        }
    }
    return e;
}

/// <E(chi)> on computational-basis statistics, without building the operator.
inline double error_expectation(const ChiPair& chi, const CompBasisStats& stats) {
    const int d = chi.dim();
    double acc = 0.0;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a != b) acc += std::norm(chi.a[a] * chi.b[b]) * stats(a, b);
        }
    }
    return d * acc / chi.normalization(0);
}

inline InfoOperator info_operator(const Verifier& v_e, const ErrorOperator& e) {
    if (v_e.op.rows() != e.diag.size()) throw std::invalid_argument("info_operator: dimension mismatch");
    const RealVector vd = v_e.op.diagonal().real();
    if (max_abs(v_e.op - ComplexMatrix(v_e.op.diagonal().asDiagonal())) > 0.0) {
        throw std::invalid_argument("info_operator: V_e is not diagonal in the computational basis");
    }
    return InfoOperator{{vd + e.diag}};
}

/// V_psi = u_e V_e + (1 - u_e) sum_j u_j V_j.
inline Verifier mix_verifiers(const VerifierWeights& w, const Verifier& v_e, std::span<const Verifier> configs) {
    w.validate();
    ComplexMatrix out = w.u_e * v_e.op;
    std::size_t used = 0;
    for (const Verifier& v : configs) {
        auto it = w.u.find(v.j);
        if (it == w.u.end()) continue;
        out += (1.0 - w.u_e) * it->second * v.op;
        ++used;
    }
    if (used != w.u.size()) throw std::invalid_argument("mix_verifiers: a weighted config has no verifier");
    return Verifier{hermitian_part(out), VerifierOrigin::mixture, 0, w};
}

/// Paired decomposition V_psi - |psi><psi| = sum lambda_i |phi_i><phi_i| and
/// I - |psi><psi| = sum r_i |phi_i><phi_i| over a common, generally
/// non-orthogonal, set of states.
struct VerifierDecomposition {
    struct Term {
        Ket state;
        double lambda = 0.0;
        double r = 1.0;
    };
    std::vector<Term> terms;

    ComplexMatrix reconstruct_lambda() const {
        ComplexMatrix acc = ComplexMatrix::Zero(terms.front().state.size(), terms.front().state.size());
        for (const auto& t : terms) acc += t.lambda * projector(t.state);
        return acc;
    }
    ComplexMatrix reconstruct_r() const {
        ComplexMatrix acc = ComplexMatrix::Zero(terms.front().state.size(), terms.front().state.size());
        for (const auto& t : terms) acc += t.r * projector(t.state);
        return acc;
    }
};

/// Total config weight c_{mu nu} = sum_{j : mu j + nu = 0 mod d} u_j.
inline double collision_weight(int mu, int nu, int d, const std::map<int, double>& u) {
    double c = 0.0;
    for (const auto& [j, w] : u) {
        if (mod(static_cast<long long>(mu) * j + nu, d) == 0) c += w;
    }
    return c;
}

/// Decomposition of V_psi^perp and I^perp for the Bell family: orthonormal
/// states of V_e - |psi><psi| (lambda = u_e, r = 1) plus psi_{mu nu}, mu >= 1
/// (lambda = (1 - u_e) c_{mu nu} r_mu, r = r_mu = N(mu)/N(0)).
inline VerifierDecomposition bell_decomposition(const VerifierWeights& w, const ChiPair& chi, const Ket& psi) {
    w.validate();
    const int d = chi.dim();
    VerifierDecomposition out;
    const Verifier v_e = comp_basis_verifier(psi);
    const EigenDecomposition eig = hermitian_eig(v_e.op - projector(psi));
    for (std::size_t i = 0; i < eig.eigenvectors.size(); ++i) {
        if (eig.eigenvalues(static_cast<Eigen::Index>(i)) > 0.5) out.terms.push_back({eig.eigenvectors[i], w.u_e, 1.0});
    }
    const double n0 = chi.normalization(0);
    for (int mu = 1; mu < d; ++mu) {
        const double r_mu = chi.normalization(mu) / n0;
        for (int nu = 0; nu < d; ++nu) {
            const double c = collision_weight(mu, nu, d, w.u);
            out.terms.push_back({generalized_bell_state({mu, nu}, chi), (1.0 - w.u_e) * c * r_mu, r_mu});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// expectations from statistics

struct CompVerifierSpec {};
struct ErrorSpec {
    ChiPair chi;
};
struct InfoSpec {
    ChiPair chi;
};
struct ConfigVerifierSpec {
    int j = 0;
    ChiPair chi;
};

using OperatorSpec = std::variant<CompVerifierSpec, ErrorSpec, InfoSpec, ConfigVerifierSpec>;
using StatsRef = std::variant<const CompBasisStats*, const ConfigStats*>;

/// <V_e> for a Bell-type target: sum_k p_e(k, k).
inline double comp_verifier_expectation(const CompBasisStats& stats) {
    double e = 0.0;
    for (int k = 0; k < stats.dim(); ++k) e += stats(k, k);
    return e;
}

/// <V_j> = [d / N(0)] sum_m p_j(m, -m mod d).
inline double config_verifier_expectation(const ChiPair& chi, const ConfigStats& stats) {
    const int d = stats.dim();
    if (chi.dim() != d) throw std::invalid_argument("config_verifier_expectation: dimension mismatch");
    double acc = 0.0;
    for (int m = 0; m < d; ++m) acc += stats(m, mod(-m, d));
    return d * acc / chi.normalization(0);
}

inline double expectation_from_stats(const OperatorSpec& op, StatsRef stats) {
    return std::visit(
        [](const auto& o, auto s) -> double {
            using Op = std::decay_t<decltype(o)>;
            using S = std::remove_cv_t<std::remove_pointer_t<decltype(s)>>;
            if constexpr (std::is_same_v<Op, ConfigVerifierSpec>) {
                if constexpr (std::is_same_v<S, ConfigStats>) {
                    if (s->j != o.j) throw std::invalid_argument("expectation_from_stats: config index mismatch");
                    return config_verifier_expectation(o.chi, *s);
                } else {
                    throw std::invalid_argument("expectation_from_stats: config verifier needs config statistics");
                }
            } else {
                if constexpr (std::is_same_v<S, CompBasisStats>) {
                    if constexpr (std::is_same_v<Op, CompVerifierSpec>) {
                        return comp_verifier_expectation(*s);
                    } else if constexpr (std::is_same_v<Op, ErrorSpec>) {
                        return error_expectation(o.chi, *s);
                    } else {
                        return comp_verifier_expectation(*s) + error_expectation(o.chi, *s);
                    }
                } else {
                    throw std::invalid_argument("expectation_from_stats: diagonal operator needs computational-basis statistics");
                }
            }
        },
        op, stats);
}

}  // namespace qsfe
