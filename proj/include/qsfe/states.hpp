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

// Target states, the chi-deformed generalized Bell family, and the noisy
// preparations used as testing states.

#include "qsfe/chi.hpp"

#include <variant>

namespace qsfe {

inline constexpr double kDensityTraceTol = 1e-12;
inline constexpr double kDensityPsdTol = 1e-10;

/// Trace-one PSD operator on a d x d bipartite space.
class DensityMatrix {
public:
    DensityMatrix(int d, ComplexMatrix rho) : d_(d), rho_(std::move(rho)) {
        if (rho_.rows() != static_cast<Eigen::Index>(d) * d || rho_.cols() != rho_.rows()) {
            throw std::invalid_argument("DensityMatrix: expected a d^2 x d^2 matrix");
        }
        if (!all_finite(rho_)) throw std::invalid_argument("DensityMatrix: non-finite entry");
        require_hermitian(rho_, "DensityMatrix");
        rho_ = hermitian_part(rho_);
        const double tr = rho_.trace().real();
        if (std::abs(tr - 1.0) > kDensityTraceTol) {
            throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
        }
        if (!is_psd(rho_, kDensityPsdTol)) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }

    int local_dim() const { return d_; }
    const ComplexMatrix& matrix() const { return rho_; }

    /// Convex combination sum_i w_i rho_i.
    static DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> parts) {
        if (weights.size() != parts.size() || parts.empty()) {
            throw std::invalid_argument("DensityMatrix::mixture: weights/parts mismatch");
        }
        ComplexMatrix acc = ComplexMatrix::Zero(parts[0].rho_.rows(), parts[0].rho_.cols());
        double total = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (weights[i] < 0.0) throw std::invalid_argument("DensityMatrix::mixture: negative weight");
            acc += weights[i] * parts[i].rho_;
            total += weights[i];
        }
        if (std::abs(total - 1.0) > kDensityTraceTol) {
            throw std::invalid_argument("DensityMatrix::mixture: weights do not sum to 1");
        }
        return DensityMatrix(parts[0].d_, std::move(acc));
    }

private:
    int d_;
    ComplexMatrix rho_;
};

inline int local_dim_of(const Ket& psi) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(psi.size()))));
    if (static_cast<Eigen::Index>(d) * d != psi.size() || d < 2) {
        throw std::invalid_argument("ket dimension is not a square d^2 with d >= 2");
    }
    return d;
}

/// |psi> = sum_k s_k |e_k, e_k>.
inline Ket bell_state(const SchmidtVector& s) {
    const int d = s.dim();
    Ket psi = Ket::Zero(static_cast<Eigen::Index>(d) * d);
    for (int k = 0; k < d; ++k) psi(k * d + k) = s[k];
    return psi;
}

struct GeneralizedBellIndex {
    int mu = 0;
    int nu = 0;
};

/// |psi_{mu nu}> = N(mu)^{-1/2} sum_k w^{-nu k} chi_A[k+mu] chi_B[k] |e_{k+mu}, e_k>.
inline Ket generalized_bell_state(GeneralizedBellIndex idx, const ChiPair& chi) {
    const int d = chi.dim();
    const double n = chi.normalization(idx.mu);
    if (!(n > 0.0)) throw std::invalid_argument("generalized_bell_state: N(mu) vanishes");
    Ket out = Ket::Zero(static_cast<Eigen::Index>(d) * d);
    for (int k = 0; k < d; ++k) {
        const int ka = mod(k + idx.mu, d);
        out(ka * d + k) = root_of_unity_pow(d, -static_cast<double>(idx.nu) * k) * chi.a[ka] * chi.b[k];
    }
    return out / std::sqrt(n);
}

inline DensityMatrix pure_state(const Ket& psi) {
    return DensityMatrix(local_dim_of(psi), projector(psi));
}

/// (1 - eps) |psi><psi| + eps I / d^2.
inline DensityMatrix white_noise_state(const Ket& psi, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("white_noise_state: eps outside [0, 1]");
    const int d = local_dim_of(psi);
    const auto n = psi.size();
    ComplexMatrix rho = (1.0 - eps) * projector(psi) + (eps / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
    return DensityMatrix(d, std::move(rho));
}

/// How the neighbour-crosstalk operator is normalized.
///  - trace_preserving: leading weight 1 - 2(eps_A + eps_B); trace exactly 1.
///  - renormalized: leading weight 1 - 2d(eps_A + eps_B), then divided by its trace.
///  - raw: leading weight 1 - 2d(eps_A + eps_B), trace 1 - 2(d-1)(eps_A + eps_B).
enum class CrosstalkModel { trace_preserving, renormalized, raw };

inline double crosstalk_leading_weight(int d, double eps_a, double eps_b, CrosstalkModel model) {
    const double factor = model == CrosstalkModel::trace_preserving ? 2.0 : 2.0 * d;
    return 1.0 - factor * (eps_a + eps_b);
}

/// Unnormalized crosstalk operator: leading |psi><psi| term plus, for each side,
/// the projections of psi onto e_k moved to e_{k+1} and e_{k-1}.
inline ComplexMatrix crosstalk_operator(const Ket& psi, double eps_a, double eps_b, CrosstalkModel model) {
    const int d = local_dim_of(psi);
    if (!(eps_a >= 0.0 && eps_b >= 0.0)) throw std::invalid_argument("crosstalk: negative eps");
    const double lead = crosstalk_leading_weight(d, eps_a, eps_b, model);
    if (lead < 0.0) throw std::invalid_argument("crosstalk: leading weight is negative");
    ComplexMatrix rho = lead * projector(psi);
    for (int k = 0; k < d; ++k) {
        for (int shift : {1, -1}) {
            const int kk = mod(k + shift, d);
            // side A: |e_kk><e_k| (x) I applied to psi
            Ket va = Ket::Zero(psi.size());
            Ket vb = Ket::Zero(psi.size());
            for (int other = 0; other < d; ++other) {
                va(kk * d + other) = psi(k * d + other);
                vb(other * d + kk) = psi(other * d + k);
            }
            rho += eps_a * projector(va) + eps_b * projector(vb);
        }
    }
    return rho;
}

inline DensityMatrix crosstalk_state(const Ket& psi, double eps_a, double eps_b,
                                     CrosstalkModel model = CrosstalkModel::trace_preserving) {
    if (model == CrosstalkModel::raw) {
        throw std::invalid_argument("crosstalk_state: raw model is not a state; use crosstalk_operator");
    }
    ComplexMatrix rho = crosstalk_operator(psi, eps_a, eps_b, model);
    if (model == CrosstalkModel::renormalized) rho /= rho.trace().real();
    return DensityMatrix(local_dim_of(psi), std::move(rho));
}

struct WhiteNoise {
    double eps = 0.0;
};

struct Crosstalk {
    double eps_a = 0.0;
    double eps_b = 0.0;
    CrosstalkModel model = CrosstalkModel::trace_preserving;
};

using NoiseParams = std::variant<WhiteNoise, Crosstalk>;

inline DensityMatrix apply_noise(const Ket& psi, const NoiseParams& noise) {
    return std::visit(
        [&](const auto& n) -> DensityMatrix {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                return white_noise_state(psi, n.eps);
            } else {
                return crosstalk_state(psi, n.eps_a, n.eps_b, n.model);
            }
        },
        noise);
}

/// F = <psi|rho|psi>.
inline double exact_fidelity(const DensityMatrix& rho, const Ket& psi) {
    return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

}  // namespace qsfe
