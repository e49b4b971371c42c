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

/// Dense complex linear algebra used throughout the library.
///
/// All operator matrices are small (local dimension d <= ~12, so at most
/// 144x144 on the composite space) and stored dense. The composite index of a
/// product basis state |e_a, e_b> is a * d + b everywhere.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsfe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenResidualTol = 1e-9;

/// Nonnegative residue of a modulo d.
inline int mod(long long a, int d) {
    long long r = a % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

/// w^x with w = exp(2 pi i / d), for real exponent x.
inline Complex root_of_unity_pow(int d, double x) {
    return std::polar(1.0, 2.0 * std::numbers::pi * x / static_cast<double>(d));
}

inline double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const Complex z = a.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

/// Largest |A[i,j] - conj(A[j,i])|.
inline double hermiticity_defect(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(a - a.adjoint());
}

/// Hermitian within kHermitianTol, scaled by max(1, max|A_ij|).
inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) {
    if (a.rows() != a.cols()) return false;
    return hermiticity_defect(a) <= tol * std::max(1.0, max_abs(a));
}

inline void require_hermitian(const ComplexMatrix& a, const char* where) {
    if (!is_hermitian(a)) {
        std::ostringstream msg;
        msg << where << ": matrix is not Hermitian (" << a.rows() << "x" << a.cols()
            << ", defect " << hermiticity_defect(a) << ")";
        throw std::invalid_argument(msg.str());
    }
}

/// (A + A^dagger) / 2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

/// Kronecker product; entry (ia * rows_b + ib, ja * cols_b + jb) = a(ia,ja) * b(ib,jb).
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
        for (Eigen::Index ja = 0; ja < a.cols(); ++ja) {
            out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) = a(ia, ja) * b;
        }
    }
    return out;
}

inline Ket tensor_product(const Ket& a, const Ket& b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index ia = 0; ia < a.size(); ++ia) {
        out.segment(ia * b.size(), b.size()) = a(ia) * b;
    }
    return out;
}

inline ComplexMatrix projector(const Ket& v) { return v * v.adjoint(); }

inline Ket basis_ket(Eigen::Index dim, Eigen::Index index) {
    Ket e = Ket::Zero(dim);
    e(index) = 1.0;
    return e;
}

/// Rotates v so that its first component with |v_i| > tol is real-positive.
inline void fix_phase(Ket& v, double tol = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

struct EigenDecomposition {
    RealVector eigenvalues;      ///< ascending
    std::vector<Ket> eigenvectors;  ///< orthonormal, phase-fixed
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending; each
/// eigenvector's first nonzero component is made real-positive.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& a) {
    require_hermitian(a, "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    }
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors.reserve(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Ket v = solver.eigenvectors().col(i);
        fix_phase(v);
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

inline double min_eigenvalue(const ComplexMatrix& a) {
    require_hermitian(a, "min_eigenvalue");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

/// True iff the smallest eigenvalue is >= -tol.
inline bool is_psd(const ComplexMatrix& a, double tol) {
    return min_eigenvalue(a) >= -tol;
}

/// Numerical rank: count of |eigenvalue| > tol * max(1, spectral radius).
inline int hermitian_rank(const ComplexMatrix& a, double tol = 1e-9) {
    require_hermitian(a, "hermitian_rank");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    const RealVector& ev = solver.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > tol * scale) ++rank;
    }
    return rank;
}

/// Re tr(A B) without forming the product.
inline double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace qsfe
