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

/// Fidelity bounds from verifier expectations.
///
/// Three estimators are provided:
///  - spectral (nonadaptive) bounds from the extremal eigenvalues of the
///    psi-orthogonal part of a mixed verifier;
///  - bounds from a paired decomposition of the verifier and an information
///    operator (alpha / beta ratio bounds);
///  - the adaptive Bell-family bounds, where the config set is split into
///    residue classes modulo the smallest prime divisor of d and the error
///    operator is read off computational-basis statistics.
///
/// The chi coefficients feeding the adaptive bounds are chosen from the
/// computational-basis statistics by closed forms or by convex coordinate
/// descent.

#include "qsfe/verifiers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qsfe {

/// A bound whose denominator vanishes (verifier cannot separate psi).
class DegenerateBound : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline int smallest_prime_divisor(int d) {
    if (d < 2) throw std::invalid_argument("smallest_prime_divisor: d must be >= 2");
    for (int p = 2; p * p <= d; ++p) {
        if (d % p == 0) return p;
    }
    return d;
}

inline bool is_prime(int d) { return d >= 2 && smallest_prime_divisor(d) == d; }

struct SubclassPartition {
    int d = 0;
    int p1 = 0;
    std::vector<std::vector<int>> classes;  ///< classes[i] = configs equal to i mod p1, ascending

    int nonempty_count() const {
        return static_cast<int>(std::count_if(classes.begin(), classes.end(), [](const auto& c) { return !c.empty(); }));
    }
};

/// Sorted, deduplicated config set; rejects empty or out-of-range input.
inline std::vector<int> normalize_config_set(std::span<const int> configs, int d) {
    if (configs.empty()) throw std::invalid_argument("config set is empty");
    std::set<int> unique;
    for (int j : configs) {
        if (j < 0 || j >= d) throw std::invalid_argument("config index " + std::to_string(j) + " outside [0, d)");
        unique.insert(j);
    }
    return {unique.begin(), unique.end()};
}

inline SubclassPartition subclass_partition(std::span<const int> configs, int d) {
    const auto m = normalize_config_set(configs, d);
    SubclassPartition out{d, smallest_prime_divisor(d), {}};
    out.classes.resize(static_cast<std::size_t>(out.p1));
    for (int j : m) out.classes[static_cast<std::size_t>(j % out.p1)].push_back(j);
    return out;
}

/// Every subset holding exactly one config from each nonempty class, each
/// subset sorted ascending; the list is in lexicographic order.
inline std::vector<std::vector<int>> one_per_class_subsets(const SubclassPartition& part) {
    std::vector<std::vector<int>> out{{}};
    for (const auto& cls : part.classes) {
        if (cls.empty()) continue;
        std::vector<std::vector<int>> next;
        for (const auto& prefix : out) {
            for (int j : cls) {
                auto s = prefix;
                s.push_back(j);
                next.push_back(std::move(s));
            }
        }
        out = std::move(next);
    }
    for (auto& s : out) std::sort(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Largest total uniform weight (1/|S|) that configs in S put on one
/// psi_{mu nu} with mu >= 1, i.e. max over (mu, nu) of #{j in S : mu j + nu = 0} / |S|.
/// Equals 1/|S| when all pairwise differences are coprime to d.
inline double error_coefficient(std::span<const int> subset, int d) {
    int worst = 1;
    for (int mu = 1; mu < d; ++mu) {
        std::vector<int> hits(static_cast<std::size_t>(d), 0);
        for (int j : subset) worst = std::max(worst, ++hits[static_cast<std::size_t>(mod(-static_cast<long long>(mu) * j, d))]);
    }
    return static_cast<double>(worst) / static_cast<double>(subset.size());
}

// ---------------------------------------------------------------------------
// result records

struct ExpectationRecord {
    std::optional<double> v_e;
    std::map<int, double> v_j;
    std::optional<double> error;
    std::optional<double> info;
    std::optional<double> v_psi;
};

enum class BoundMethod { nonadaptive, lemma2, theorem1 };

inline const char* to_string(BoundMethod m) {
    switch (m) {
        case BoundMethod::nonadaptive: return "nonadaptive";
        case BoundMethod::lemma2: return "lemma2";
        case BoundMethod::theorem1: return "theorem1";
    }
    return "?";
}

struct FidelityBounds {
    double lower = 0.0;
    double upper = 1.0;
    std::optional<double> exact;
    double raw_lower = 0.0;
    double raw_upper = 1.0;
    bool clamped = false;
    BoundMethod method = BoundMethod::theorem1;
    ExpectationRecord inputs;
    std::vector<int> chosen_subset;  ///< maximizing one-per-class subset (theorem1)
    double error_coefficient = 0.0;  ///< coefficient of <E> in the lower bound (theorem1)

    bool sandwiches(double fidelity, double slack = 1e-9) const {
        return lower - slack <= fidelity && fidelity <= upper + slack;
    }
};

/// Clamps into [0, 1] and records whether anything moved.
inline void finalize_bounds(FidelityBounds& b) {
    b.raw_lower = b.lower;
    b.raw_upper = b.upper;
    b.lower = std::clamp(b.lower, 0.0, 1.0);
    b.upper = std::clamp(b.upper, 0.0, 1.0);
    b.clamped = b.lower != b.raw_lower || b.upper != b.raw_upper;
}

// ---------------------------------------------------------------------------
// spectral bounds

struct SpectralBounds {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    Ket phi_max;
    Ket phi_min;
};

/// Orthonormal basis of the complement of psi, as columns.
inline ComplexMatrix orthogonal_complement(const Ket& psi) {
    const EigenDecomposition eig = hermitian_eig(projector(psi.normalized()));
    ComplexMatrix q(psi.size(), psi.size() - 1);
    for (Eigen::Index i = 0; i + 1 < psi.size(); ++i) q.col(i) = eig.eigenvectors[static_cast<std::size_t>(i)];
    return q;
}

/// Extremal eigenpairs of V - |psi><psi| restricted to the complement of psi.
inline SpectralBounds spectral_bounds(const Verifier& v_psi, const Ket& psi) {
    const ComplexMatrix q = orthogonal_complement(psi);
    const ComplexMatrix restricted = q.adjoint() * (v_psi.op - projector(psi)) * q;
    const EigenDecomposition eig = hermitian_eig(hermitian_part(restricted));
    const auto last = static_cast<std::size_t>(eig.eigenvalues.size() - 1);
    SpectralBounds out;
    out.lambda_min = eig.eigenvalues(0);
    out.lambda_max = eig.eigenvalues(static_cast<Eigen::Index>(last));
    out.phi_min = q * eig.eigenvectors.front();
    out.phi_max = q * eig.eigenvectors[last];
    fix_phase(out.phi_min);
    fix_phase(out.phi_max);
    return out;
}

inline constexpr double kDegenerateTol = 1e-12;

/// Bounds from <V> = F + sum_i lambda_i q_i and <I> = F + sum_i r_i q_i (q_i >= 0).
/// With alpha = max lambda_i / r_i, <V> - alpha <I> <= (1 - alpha) F, which
/// bounds F from below when alpha < 1 and from above when alpha > 1; beta
/// (the minimum ratio) works the other way round. A side with no constraint
/// falls back to the trivial 0 or 1.
inline void ratio_bounds(FidelityBounds& b, double v, double info, double alpha, double beta) {
    if (std::abs(1.0 - alpha) <= kDegenerateTol || std::abs(1.0 - beta) <= kDegenerateTol) {
        throw DegenerateBound("ratio bound: alpha or beta equals 1; psi is not isolated by this verifier");
    }
    const double g_alpha = (v - alpha * info) / (1.0 - alpha);
    const double g_beta = (v - beta * info) / (1.0 - beta);
    b.lower = -std::numeric_limits<double>::infinity();
    b.upper = std::numeric_limits<double>::infinity();
    (alpha < 1.0 ? b.lower : b.upper) = g_alpha;
    if (beta < 1.0) {
        b.upper = std::min(b.upper, g_beta);
    } else {
        b.lower = std::max(b.lower, g_beta);
    }
    if (std::isinf(b.lower)) b.lower = 0.0;
    if (std::isinf(b.upper)) b.upper = 1.0;
}

inline FidelityBounds nonadaptive_bounds(const SpectralBounds& spec, double v_psi_expectation) {
    FidelityBounds b;
    b.method = BoundMethod::nonadaptive;
    ratio_bounds(b, v_psi_expectation, 1.0, spec.lambda_max, spec.lambda_min);
    b.inputs.v_psi = v_psi_expectation;
    finalize_bounds(b);
    return b;
}

inline FidelityBounds nonadaptive_bounds(const Verifier& v_psi, const Ket& psi, double v_psi_expectation) {
    return nonadaptive_bounds(spectral_bounds(v_psi, psi), v_psi_expectation);
}

// ---------------------------------------------------------------------------
// decomposition (alpha / beta) bounds

struct BoundCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
};

inline BoundCoefficients coefficients_from(const VerifierDecomposition& dec) {
    if (dec.terms.empty()) throw std::invalid_argument("coefficients_from: empty decomposition");
    BoundCoefficients c{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& t : dec.terms) {
        if (!(t.r > 0.0)) throw std::invalid_argument("coefficients_from: r_i must be positive");
        const double ratio = t.lambda / t.r;
        c.alpha = std::max(c.alpha, ratio);
        c.beta = std::min(c.beta, ratio);
    }
    return c;
}

/// Eigen-decomposition of V_psi^perp on the complement of psi, paired with
/// r_i = 1: the information operator is the identity.
inline VerifierDecomposition trivial_decomposition(const Verifier& v_psi, const Ket& psi) {
    const ComplexMatrix q = orthogonal_complement(psi);
    const EigenDecomposition eig = hermitian_eig(hermitian_part(q.adjoint() * (v_psi.op - projector(psi)) * q));
    VerifierDecomposition dec;
    for (std::size_t i = 0; i < eig.eigenvectors.size(); ++i) {
        dec.terms.push_back({q * eig.eigenvectors[i], eig.eigenvalues(static_cast<Eigen::Index>(i)), 1.0});
    }
    return dec;
}

/// lower = (<V> - alpha <I>) / (1 - alpha), upper = (<V> - beta <I>) / (1 - beta)
/// when alpha < 1; see ratio_bounds for ratios above 1.
inline FidelityBounds lemma2_bounds(double v_psi_expectation, double info_expectation, BoundCoefficients c) {
    FidelityBounds b;
    b.method = BoundMethod::lemma2;
    ratio_bounds(b, v_psi_expectation, info_expectation, c.alpha, c.beta);
    b.inputs.v_psi = v_psi_expectation;
    b.inputs.info = info_expectation;
    finalize_bounds(b);
    return b;
}

// ---------------------------------------------------------------------------
// adaptive Bell-family bounds

/// Bounds from <V_e>, <V_j> (j in M) and <E>.
///
/// lower = max over one-per-class subsets S of avg_{j in S} <V_j> - a(S) <E>,
/// where a(S) is error_coefficient(S, d) (= 1/|M_{/p1}| for prime-power d).
/// upper = min(<V_e>, min_j <V_j>). For prime d and full M the value
/// (1/d) sum_j <V_j> - <E>/d is exact and reported as both bounds.
inline FidelityBounds theorem1_bounds(double v_e, const std::map<int, double>& v_j, double error, int d) {
    std::vector<int> configs;
    for (const auto& [j, _] : v_j) configs.push_back(j);
    const SubclassPartition part = subclass_partition(configs, d);

    FidelityBounds b;
    b.method = BoundMethod::theorem1;
    b.inputs.v_e = v_e;
    b.inputs.v_j = v_j;
    b.inputs.error = error;
    b.inputs.info = v_e + error;

    bool have = false;
    for (const auto& subset : one_per_class_subsets(part)) {
        double avg = 0.0;
        for (int j : subset) avg += v_j.at(j);
        avg /= static_cast<double>(subset.size());
        const double coeff = error_coefficient(subset, d);
        const double value = avg - coeff * error;
        // Candidates arrive in lexicographic order; near-ties keep the earlier one.
        if (!have || value > b.lower + 1e-12) {
            b.lower = value;
            b.chosen_subset = subset;
            b.error_coefficient = coeff;
            have = true;
        }
    }

    b.upper = v_e;
    for (const auto& [j, v] : v_j) b.upper = std::min(b.upper, v);

    if (is_prime(d) && static_cast<int>(v_j.size()) == d) {
        double sum = 0.0;
        for (const auto& [j, v] : v_j) sum += v;
        const double exact = (sum - error) / static_cast<double>(d);
        b.exact = exact;
        b.lower = exact;
        b.upper = exact;
    }
    finalize_bounds(b);
    return b;
}

inline FidelityBounds theorem1_bounds(const CompBasisStats& p_e, const std::map<int, ConfigStats>& stats, const ChiPair& chi) {
    const int d = p_e.dim();
    if (stats.empty()) throw std::invalid_argument("theorem1_bounds: config set is empty");
    std::map<int, double> v_j;
    for (const auto& [j, s] : stats) {
        if (s.j != j) throw std::invalid_argument("theorem1_bounds: statistics labelled with the wrong config");
        v_j[j] = config_verifier_expectation(chi, s);
    }
    return theorem1_bounds(comp_verifier_expectation(p_e), v_j, error_expectation(chi, p_e), d);
}

// ---------------------------------------------------------------------------
// chi adaptation

enum class ChiHint { general, symmetric, crosstalk, one_side_a, one_side_b, uniform };

inline const char* to_string(ChiHint h) {
    switch (h) {
        case ChiHint::general: return "general";
        case ChiHint::symmetric: return "symmetric";
        case ChiHint::crosstalk: return "crosstalk_opt";
        case ChiHint::one_side_a: return "one_side_A";
        case ChiHint::one_side_b: return "one_side_B";
        case ChiHint::uniform: return "uniform";
    }
    return "?";
}

inline ChiHint chi_hint_from_string(std::string_view name) {
    for (ChiHint h : {ChiHint::general, ChiHint::symmetric, ChiHint::crosstalk, ChiHint::one_side_a, ChiHint::one_side_b,
                      ChiHint::uniform}) {
        if (name == to_string(h)) return h;
    }
    throw std::invalid_argument("unknown chi strategy '" + std::string(name) + "'");
}

/// s_k = sqrt(p_e(k,k) / sum_k' p_e(k',k')).
inline SchmidtVector schmidt_from_stats(const CompBasisStats& p_e) {
    std::vector<double> s(static_cast<std::size_t>(p_e.dim()));
    double total = 0.0;
    for (int k = 0; k < p_e.dim(); ++k) {
        if (!(p_e(k, k) > 0.0)) throw std::invalid_argument("schmidt_from_stats: p_e(k,k) is zero for k=" + std::to_string(k));
        total += p_e(k, k);
    }
    for (int k = 0; k < p_e.dim(); ++k) s[static_cast<std::size_t>(k)] = std::sqrt(p_e(k, k) / total);
    return SchmidtVector::normalized(std::move(s));
}

/// chi_A = chi_B = sqrt(s_k / sum s).
inline ChiPair symmetric_chi(const SchmidtVector& s) {
    std::vector<double> c(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) c[static_cast<std::size_t>(k)] = std::sqrt(s[k]);
    auto v = ChiVector::normalized(c);
    return make_chi_pair(v, v);
}

namespace detail {

inline ChiVector schmidt_chi(const SchmidtVector& s) { return ChiVector::normalized(s.values()); }

inline void require_positive_diagonal(const CompBasisStats& p_e) {
    for (int k = 0; k < p_e.dim(); ++k) {
        if (!(p_e(k, k) > 0.0)) throw std::invalid_argument("optimize_chi: p_e(k,k) is zero for k=" + std::to_string(k));
    }
}

/// Neighbour-crosstalk closed form, with p_e(k,k) taken as s_k^2 so the
/// product chi_A chi_B stays proportional to s.
inline ChiPair crosstalk_chi(const CompBasisStats& p, const SchmidtVector& s) {
    require_positive_diagonal(p);
    const int d = s.dim();
    std::vector<double> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
    double log_ratio = 0.0;  // log prod_{k'<k} p(k',k'+1)/p(k'+1,k')
    for (int k = 0; k < d; ++k) {
        if (k > 0) {
            const double up = p(k - 1, k);
            const double down = p(k, k - 1);
            if (up > 0.0 && down > 0.0) {
                log_ratio += std::log(up / down);
            } else if (up > 0.0 || down > 0.0) {
                throw std::invalid_argument("optimize_chi: one-directional neighbour statistics at k=" + std::to_string(k));
            }
        }
        const double log_s2 = 2.0 * std::log(s[k]);
        a[static_cast<std::size_t>(k)] = std::exp(0.25 * (log_s2 + log_ratio));
        b[static_cast<std::size_t>(k)] = std::exp(0.25 * (log_s2 - log_ratio));
    }
    return make_chi_pair(ChiVector::normalized(a), ChiVector::normalized(b));
}

/// d * sum_{i != j} exp(x_i - x_j) s_j^2 p(i,j): <E> with |chi_A|^2 = exp(x).
inline double log_objective(const std::vector<double>& x, const CompBasisStats& p, const SchmidtVector& s) {
    const int d = s.dim();
    double f = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i != j) f += std::exp(x[i] - x[j]) * s[j] * s[j] * p(i, j);
        }
    }
    return d * f;
}

inline ChiPair chi_from_log_weights(const std::vector<double>& x, const SchmidtVector& s) {
    std::vector<double> a(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) a[k] = std::exp(0.5 * x[k]);
    return complete_chi_pair_from_a(ChiVector::normalized(a), s);
}

inline constexpr double kLogClamp = 10.0;
inline constexpr int kMaxSweeps = 500;
inline constexpr double kImprovementTol = 1e-12;

/// Coordinate descent on the convex objective above, from the symmetric closed form.
inline ChiPair general_chi(const CompBasisStats& p, const SchmidtVector& s) {
    const int d = s.dim();
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = std::log(s[k]);
    double f = log_objective(x, p, s);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (int i = 0; i < d; ++i) {
            double a = 0.0, b = 0.0;
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                a += s[j] * s[j] * p(i, j) * std::exp(-x[j]);
                b += s[i] * s[i] * p(j, i) * std::exp(x[j]);
            }
            if (a > 0.0 && b > 0.0) {
                x[i] = 0.5 * std::log(b / a);
            } else if (b > 0.0) {
                x[i] = kLogClamp;
            } else if (a > 0.0) {
                x[i] = -kLogClamp;
            }
        }
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / d;
        for (double& v : x) v = std::clamp(v - mean, -kLogClamp, kLogClamp);
        const double next = log_objective(x, p, s);
        const double gain = f - next;
        f = std::min(f, next);
        if (gain < kImprovementTol) break;
    }
    return chi_from_log_weights(x, s);
}

}  // namespace detail

/// chi pair compatible with s, chosen to make <E> small on p_e.
inline ChiPair optimize_chi(const CompBasisStats& p_e, const SchmidtVector& s, ChiHint hint) {
    if (p_e.dim() != s.dim()) throw std::invalid_argument("optimize_chi: dimension mismatch");
    switch (hint) {
        case ChiHint::symmetric: return symmetric_chi(s);
        case ChiHint::crosstalk: return detail::crosstalk_chi(p_e, s);
        case ChiHint::one_side_a: return make_chi_pair(detail::schmidt_chi(s), ChiVector::uniform(s.dim()));
        case ChiHint::one_side_b: return make_chi_pair(ChiVector::uniform(s.dim()), detail::schmidt_chi(s));
        case ChiHint::uniform: return make_chi_pair(ChiVector::uniform(s.dim()), detail::schmidt_chi(s));
        case ChiHint::general: return detail::general_chi(p_e, s);
    }
    throw std::invalid_argument("optimize_chi: unknown hint");
}

/// Lower bound on <E> reached by the symmetric closed form:
/// [d / sum s^2] sum_{kA != kB} s_kA s_kB p_e(kA, kB).
inline double symmetric_error_bound(const CompBasisStats& p_e, const SchmidtVector& s) {
    const int d = s.dim();
    double acc = 0.0, norm2 = 0.0;
    for (int k = 0; k < d; ++k) norm2 += s[k] * s[k];
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a != b) acc += s[a] * s[b] * p_e(a, b);
        }
    }
    return d * acc / norm2;
}

struct ChiConditionReport {
    struct Pair {
        int k = 0;
        int k2 = 0;
        double residual_a = 0.0;  ///< relative residual of the chi_A ratio condition
        double residual_b = 0.0;
        bool skipped = false;     ///< a referenced probability is zero
    };
    std::vector<Pair> pairs;
    bool feasible = true;  ///< all non-skipped residuals within tolerance
    bool all_skipped = true;
};

/// Residuals of the pairwise optimality conditions
/// |chi_A[k']|^2/|chi_A[k]|^2 = sqrt(p(k,k')/p(k',k)) s_k'/s_k and the
/// mirrored condition for chi_B.
inline ChiConditionReport chi_condition_check(const ChiPair& chi, const CompBasisStats& p_e, const SchmidtVector& s,
                                              double tol = 1e-9) {
    ChiConditionReport rep;
    const int d = s.dim();
    for (int k = 0; k < d; ++k) {
        for (int k2 = k + 1; k2 < d; ++k2) {
            ChiConditionReport::Pair pr{k, k2};
            const double fwd = p_e(k, k2), bwd = p_e(k2, k);
            if (!(fwd > 0.0) || !(bwd > 0.0)) {
                pr.skipped = true;
            } else {
                rep.all_skipped = false;
                const double target_a = std::sqrt(fwd / bwd) * s[k2] / s[k];
                const double target_b = std::sqrt(bwd / fwd) * s[k2] / s[k];
                pr.residual_a = std::abs(std::norm(chi.a[k2]) / std::norm(chi.a[k]) / target_a - 1.0);
                pr.residual_b = std::abs(std::norm(chi.b[k2]) / std::norm(chi.b[k]) / target_b - 1.0);
                if (pr.residual_a > tol || pr.residual_b > tol) rep.feasible = false;
            }
            rep.pairs.push_back(pr);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// full adaptive pipeline

struct ShotBudget {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

struct AdaptiveOptions {
    std::optional<SchmidtVector> target;  ///< nullopt: adapt s to the diagonal statistics
    std::vector<int> configs;
    ChiHint hint = ChiHint::symmetric;
    std::optional<ShotBudget> shots;
};

struct AdaptiveReport {
    SchmidtVector schmidt;
    ChiPair chi;
    CompBasisStats p_e;
    std::map<int, ConfigStats> config_stats;
    FidelityBounds bounds;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Measure in the computational basis, pick chi, measure each config in M,
/// then bound the fidelity.
inline AdaptiveReport adaptive_estimate(const DensityMatrix& rho, const AdaptiveOptions& opt) {
    const int d = rho.local_dim();
    CompBasisStats p_e = comp_basis_stats(rho);
    if (opt.shots) p_e = sample_stats(p_e, opt.shots->shots, derive_seed(opt.shots->seed, 0));

    SchmidtVector s = opt.target ? *opt.target : schmidt_from_stats(p_e);
    if (s.dim() != d) throw std::invalid_argument("adaptive_estimate: target dimension mismatch");
    ChiPair chi = optimize_chi(p_e, s, opt.hint);

    std::map<int, ConfigStats> stats;
    for (int j : normalize_config_set(opt.configs, d)) {
        ConfigStats cs = config_stats(rho, MeasurementConfig{j, chi});
        if (opt.shots) cs = sample_stats(cs, opt.shots->shots, derive_seed(opt.shots->seed, static_cast<std::uint64_t>(j) + 1));
        stats.emplace(j, std::move(cs));
    }
    FidelityBounds bounds = theorem1_bounds(p_e, stats, chi);
    return AdaptiveReport{std::move(s), std::move(chi), std::move(p_e), std::move(stats), std::move(bounds)};
}

}  // namespace qsfe
