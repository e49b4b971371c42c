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

// Modification coefficients of the deformed Heisenberg-Weyl family, and the
// Schmidt vector they are tied to.

#include "qsfe/numerics.hpp"

#include <span>

namespace qsfe {

inline constexpr double kNormTol = 1e-12;

/// Positive Schmidt coefficients s_k with sum s_k^2 = 1.
class SchmidtVector {
public:
    explicit SchmidtVector(std::vector<double> s) : s_(std::move(s)) {
        if (s_.size() < 2) throw std::invalid_argument("SchmidtVector: dimension must be >= 2");
        double norm2 = 0.0;
        for (std::size_t k = 0; k < s_.size(); ++k) {
            if (!(s_[k] > 0.0) || !std::isfinite(s_[k])) {
                throw std::invalid_argument("SchmidtVector: coefficient s_" + std::to_string(k) +
                                            " is not strictly positive");
            }
            norm2 += s_[k] * s_[k];
        }
        if (std::abs(norm2 - 1.0) > kNormTol) {
            throw std::invalid_argument("SchmidtVector: sum of squares is " + std::to_string(norm2) +
                                        ", expected 1");
        }
    }

    /// Rescales arbitrary positive weights to unit norm.
    static SchmidtVector normalized(std::vector<double> s) {
        double norm2 = 0.0;
        for (double v : s) norm2 += v * v;
        if (!(norm2 > 0.0)) throw std::invalid_argument("SchmidtVector: all-zero weights");
        const double n = std::sqrt(norm2);
        for (double& v : s) v /= n;
        return SchmidtVector(std::move(s));
    }

    /// s_k proportional to k + 1.
    static SchmidtVector proportional(int d) {
        std::vector<double> s(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) s[static_cast<std::size_t>(k)] = k + 1.0;
        return normalized(std::move(s));
    }

    static SchmidtVector uniform(int d) {
        return SchmidtVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / std::sqrt(d)));
    }

    int dim() const { return static_cast<int>(s_.size()); }
    double operator[](int k) const { return s_[static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return s_; }

private:
    std::vector<double> s_;
};

/// Unit-norm complex coefficient vector with no zero entry.
class ChiVector {
public:
    explicit ChiVector(std::vector<Complex> chi) : chi_(std::move(chi)) {
        if (chi_.size() < 2) throw std::invalid_argument("ChiVector: dimension must be >= 2");
        double norm2 = 0.0;
        for (std::size_t k = 0; k < chi_.size(); ++k) {
            if (!(std::abs(chi_[k]) > 0.0) || !std::isfinite(std::abs(chi_[k]))) {
                throw std::invalid_argument("ChiVector: entry chi_" + std::to_string(k) + " is zero");
            }
            norm2 += std::norm(chi_[k]);
        }
        if (std::abs(norm2 - 1.0) > kNormTol) {
            throw std::invalid_argument("ChiVector: |chi|^2 = " + std::to_string(norm2) + ", expected 1");
        }
    }

    static ChiVector normalized(std::vector<Complex> chi) {
        double norm2 = 0.0;
        for (const Complex& c : chi) norm2 += std::norm(c);
        if (!(norm2 > 0.0)) throw std::invalid_argument("ChiVector: all-zero coefficients");
        const double n = std::sqrt(norm2);
        for (Complex& c : chi) c /= n;
        return ChiVector(std::move(chi));
    }

    static ChiVector normalized(std::span<const double> magnitudes) {
        return normalized(std::vector<Complex>(magnitudes.begin(), magnitudes.end()));
    }

    static ChiVector uniform(int d) {
        return ChiVector(std::vector<Complex>(static_cast<std::size_t>(d), Complex(1.0 / std::sqrt(d), 0.0)));
    }

    int dim() const { return static_cast<int>(chi_.size()); }
    /// Entry at k mod d.
    Complex operator[](int k) const { return chi_[static_cast<std::size_t>(mod(k, dim()))]; }
    std::span<const Complex> values() const { return chi_; }

private:
    std::vector<Complex> chi_;
};

struct ChiPair {
    ChiVector a;
    ChiVector b;

    int dim() const { return a.dim(); }

    /// N(mu) = sum_k |chi_A[k + mu] chi_B[k]|^2.
    double normalization(int mu) const {
        double n = 0.0;
        for (int k = 0; k < dim(); ++k) n += std::norm(a[k + mu] * b[k]);
        return n;
    }

    /// Largest |s_k - chi_A[k] chi_B[k] / sqrt(N(0))| (complex difference).
    double schmidt_mismatch(const SchmidtVector& s) const {
        if (s.dim() != dim()) return std::numeric_limits<double>::infinity();
        const double n0 = std::sqrt(normalization(0));
        double worst = 0.0;
        for (int k = 0; k < dim(); ++k) worst = std::max(worst, std::abs(a[k] * b[k] / n0 - s[k]));
        return worst;
    }

    bool compatible_with(const SchmidtVector& s, double tol = 1e-9) const {
        return schmidt_mismatch(s) <= tol;
    }
};

inline ChiPair make_chi_pair(ChiVector a, ChiVector b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ChiPair: side dimensions differ");
    return ChiPair{std::move(a), std::move(b)};
}

/// Pair with the given chi_A and chi_B fixed by s_k proportional to chi_A[k] chi_B[k].
inline ChiPair complete_chi_pair_from_a(const ChiVector& a, const SchmidtVector& s) {
    if (a.dim() != s.dim()) throw std::invalid_argument("complete_chi_pair_from_a: dimension mismatch");
    std::vector<Complex> b(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) b[static_cast<std::size_t>(k)] = s[k] / a[k];
    return make_chi_pair(a, ChiVector::normalized(std::move(b)));
}

}  // namespace qsfe
