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

/// Chi-modified Heisenberg-Weyl operators, their eigenbases, the local POVMs
/// built from them, and Born-rule statistics (exact or finite-shot).
///
/// HW labels (i, j) are kept as signed integers: for even d the global phase
/// w^{-ij(d-1)/2} is not periodic in j with period d, so Omega_{-j} and
/// Omega_{d-j} differ by a sign. Callers pass -j literally.

#include "qsfe/states.hpp"

#include <cstdint>
#include <random>

namespace qsfe {

inline constexpr double kPovmTol = 1e-10;

/// Z = sum_k w^k |e_k><e_k|.
inline ComplexMatrix clock_op(int d) {
    if (d < 2) throw std::invalid_argument("clock_op: d must be >= 2");
    ComplexMatrix z = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) z(k, k) = root_of_unity_pow(d, k);
    return z;
}

/// X(chi) = sum_k (chi_{k+1} / chi_k) |e_{k+1}><e_k|.
inline ComplexMatrix shift_op(const ChiVector& chi) {
    const int d = chi.dim();
    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) x(mod(k + 1, d), k) = chi[k + 1] / chi[k];
    return x;
}

inline ComplexMatrix matrix_power(const ComplexMatrix& a, int n) {
    if (n < 0) return matrix_power(a.inverse(), -n);
    ComplexMatrix out = ComplexMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) out = out * a;
    return out;
}

struct HWIndex {
    int i = 1;
    int j = 0;
};

/// Omega_{i,j}(chi) = w^{-ij(d-1)/2} X(chi)^i Z^j.
inline ComplexMatrix hw_op(HWIndex idx, const ChiVector& chi) {
    const int d = chi.dim();
    const double phase_exp = -0.5 * static_cast<double>(idx.i) * idx.j * (d - 1);
    // Z^j is diagonal, so raise entries directly instead of multiplying.
    ComplexMatrix zj = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) zj(k, k) = root_of_unity_pow(d, static_cast<double>(idx.j) * k);
    return root_of_unity_pow(d, phase_exp) * matrix_power(shift_op(chi), idx.i) * zj;
}

/// |E_m(j; chi)> = sum_k w^{-(m + jd/2) k + j k^2 / 2} chi_k |e_k>; eigenvalue w^m of Omega_{1,j}.
inline Ket hw_eigenbasis_state(int m, int j, const ChiVector& chi) {
    const int d = chi.dim();
    Ket v(d);
    for (int k = 0; k < d; ++k) {
        const double x = -(m + 0.5 * j * d) * k + 0.5 * j * static_cast<double>(k) * k;
        v(k) = root_of_unity_pow(d, x) * chi[k];
    }
    return v;
}

inline std::vector<Ket> hw_eigenbasis(int j, const ChiVector& chi) {
    std::vector<Ket> basis;
    basis.reserve(static_cast<std::size_t>(chi.dim()));
    for (int m = 0; m < chi.dim(); ++m) basis.push_back(hw_eigenbasis_state(m, j, chi));
    return basis;
}

/// d weighted rank-one elements followed by the remainder I - sum.
struct Povm {
    std::vector<ComplexMatrix> elements;

    int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().rows()); }
    int outcomes() const { return static_cast<int>(elements.size()); }
};

/// M_m = |E_m><E_m| / d for m < d, M_d = I - sum_{m<d} M_m.
inline Povm povm_from_basis(std::span<const Ket> basis) {
    const int d = static_cast<int>(basis.size());
    if (d < 2) throw std::invalid_argument("povm_from_basis: need at least two basis states");
    Povm povm;
    ComplexMatrix rest = ComplexMatrix::Identity(d, d);
    for (const Ket& e : basis) {
        if (e.size() != d) throw std::invalid_argument("povm_from_basis: basis state has wrong dimension");
        if (std::abs(e.norm() - 1.0) > 1e-10) throw std::invalid_argument("povm_from_basis: basis state not unit norm");
        povm.elements.push_back(projector(e) / static_cast<double>(d));
        rest -= povm.elements.back();
    }
    rest = hermitian_part(rest);
    if (!is_psd(rest, kPovmTol)) {
        throw std::invalid_argument("povm_from_basis: remainder element is not positive semidefinite");
    }
    povm.elements.push_back(std::move(rest));
    return povm;
}

/// Local POVM pair M[Omega_j(chi_A)] (x) M[Omega_{-j}(chi_B)].
struct MeasurementConfig {
    int j = 0;
    ChiPair chi;

    Povm povm_a() const {
        auto basis = hw_eigenbasis(j, chi.a);
        return povm_from_basis(basis);
    }
    Povm povm_b() const {
        auto basis = hw_eigenbasis(-j, chi.b);
        return povm_from_basis(basis);
    }
};

/// p_e(k_A, k_B): diagonal of rho in the computational basis.
struct CompBasisStats {
    Eigen::MatrixXd p;

    int dim() const { return static_cast<int>(p.rows()); }
    double operator()(int ka, int kb) const { return p(ka, kb); }
};

/// p_j(m_A, m_B) for one config, outcomes 0..d (d is the remainder element).
struct ConfigStats {
    int j = 0;
    Eigen::MatrixXd p;

    int dim() const { return static_cast<int>(p.rows()) - 1; }
    double operator()(int ma, int mb) const { return p(ma, mb); }
};

inline CompBasisStats comp_basis_stats(const DensityMatrix& rho) {
    const int d = rho.local_dim();
    CompBasisStats out{Eigen::MatrixXd(d, d)};
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) out.p(a, b) = std::max(0.0, rho.matrix()(a * d + b, a * d + b).real());
    }
    return out;
}

inline ConfigStats config_stats(const DensityMatrix& rho, const MeasurementConfig& cfg) {
    const int d = rho.local_dim();
    if (cfg.chi.dim() != d) throw std::invalid_argument("config_stats: dimension mismatch");
    const Povm pa = cfg.povm_a();
    const Povm pb = cfg.povm_b();
    ConfigStats out{cfg.j, Eigen::MatrixXd(d + 1, d + 1)};
    for (int ma = 0; ma <= d; ++ma) {
        for (int mb = 0; mb <= d; ++mb) {
            const double p = trace_product_real(rho.matrix(), tensor_product(pa.elements[ma], pb.elements[mb]));
            out.p(ma, mb) = std::max(0.0, p);
        }
    }
    return out;
}

/// Multinomial draw of `shots` outcomes from an exact probability table,
/// returned as empirical frequencies. Deterministic for a given seed.
inline Eigen::MatrixXd sample_stats(const Eigen::MatrixXd& exact, std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_stats: shots must be >= 1");
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(exact.rows(), exact.cols());
    double mass_left = 0.0;
    for (Eigen::Index i = 0; i < exact.size(); ++i) mass_left += std::max(0.0, exact.data()[i]);
    std::int64_t shots_left = shots;
    // Sequential conditional binomials; the last nonzero cell takes the remainder.
    Eigen::Index last = -1;
    for (Eigen::Index i = 0; i < exact.size(); ++i) {
        if (exact.data()[i] > 0.0) last = i;
    }
    for (Eigen::Index i = 0; i < exact.size() && shots_left > 0; ++i) {
        const double p = std::max(0.0, exact.data()[i]);
        if (p == 0.0) continue;
        std::int64_t k;
        if (i == last) {
            k = shots_left;
        } else {
            const double q = std::clamp(p / mass_left, 0.0, 1.0);
            std::binomial_distribution<std::int64_t> draw(shots_left, q);
            k = draw(rng);
        }
        counts.data()[i] = static_cast<double>(k);
        shots_left -= k;
        mass_left -= p;
    }
    return counts / static_cast<double>(shots);
}

inline CompBasisStats sample_stats(const CompBasisStats& exact, std::int64_t shots, std::uint64_t seed) {
    return CompBasisStats{sample_stats(exact.p, shots, seed)};
}

inline ConfigStats sample_stats(const ConfigStats& exact, std::int64_t shots, std::uint64_t seed) {
    return ConfigStats{exact.j, sample_stats(exact.p, shots, seed)};
}

}  // namespace qsfe
