#pragma once

// Weak/strong/strong* seminorm evaluation, the block-diagonal counterexample
// matrix with its norm-gap witness, block-swap null sequences, rank-one
// strong-but-not-strong* sequences, the exposing functional for partial
// permutation matrices, and exact commutant/span dimensions at finite level.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blab/decomposition.hpp"
#include "blab/errors.hpp"
#include "blab/matrices.hpp"

namespace blab {

// ---------------------------------------------------------------------------
// Seminorms

/// <u x, y> (real pairing).
template <class T>
T weak_pairing(const CoeffMatrix<T>& u, const FinVector<T>& x, const FinVector<T>& y) {
    return u.apply(x).dot(y);
}

template <class T>
T strong_seminorm_sq(const CoeffMatrix<T>& u, const FinVector<T>& x) {
    return u.apply(x).norm_sq();
}

template <class T>
double strong_seminorm(const CoeffMatrix<T>& u, const FinVector<T>& x) {
    return std::sqrt(num<T>::to_double(strong_seminorm_sq(u, x)));
}

template <class T>
T strongstar_seminorm_sq(const CoeffMatrix<T>& u, const FinVector<T>& x) {
    return std::max(strong_seminorm_sq(u, x), strong_seminorm_sq(adjoint(u), x));
}

template <class T>
double strongstar_seminorm(const CoeffMatrix<T>& u, const FinVector<T>& x) {
    return std::sqrt(num<T>::to_double(strongstar_seminorm_sq(u, x)));
}

/// Largest singular value by power iteration on a^T a with the normalized
/// all-ones start. Entries are nonnegative, so the start overlaps the top
/// singular vector and the estimate converges from below.
template <class T>
double op_norm(const FiniteBlock<T>& a, double eps_it,
               const std::vector<double>* witness = nullptr, int max_iterations = 20000) {
    const Index n = a.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j) m[i - 1][j - 1] = num<T>::to_double(a.at(i, j));

    auto mat_vec = [&](const std::vector<double>& v, bool transpose) {
        std::vector<double> out(n, 0.0);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                out[i] += (transpose ? m[j][i] : m[i][j]) * v[j];
        return out;
    };
    auto norm2 = [](const std::vector<double>& v) {
        double s = 0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    };

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double sigma = 0.0;
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
        std::vector<double> y = mat_vec(v, false);
        double next = norm2(y);  // ||a v|| with ||v|| = 1, increases toward sigma_max
        if (next == 0.0) {
            sigma = 0.0;
            converged = true;
            break;
        }
        if (it > 0 && std::abs(next - sigma) <= eps_it * std::max(next, 1e-300)) {
            sigma = next;
            converged = true;
            break;
        }
        sigma = next;
        std::vector<double> z = mat_vec(y, true);
        double nz = norm2(z);
        if (nz == 0.0) {
            converged = true;
            break;
        }
        for (Index i = 0; i < n; ++i) v[i] = z[i] / nz;
    }
    if (!converged) throw PowerIterationNoConvergence(sigma);
    // Row and column norms are ||a^T e_i|| and ||a e_j||, genuine lower
    // bounds that also catch a stalled iteration.
    for (Index i = 0; i < n; ++i) {
        double row = 0, col = 0;
        for (Index j = 0; j < n; ++j) {
            row += m[i][j] * m[i][j];
            col += m[j][i] * m[j][i];
        }
        sigma = std::max({sigma, std::sqrt(row), std::sqrt(col)});
    }
    if (witness) {
        double nw = norm2(*witness);
        if (nw > 0.0) sigma = std::max(sigma, norm2(mat_vec(*witness, false)) / nw);
    }
    return sigma;
}

// ---------------------------------------------------------------------------
// Block-diagonal counterexample matrix

/// Block-diagonal matrix whose j-th block is j x j filled with 1/j, for
/// j = 1..num_blocks; realized as a zero-tail matrix of dimension
/// num_blocks (num_blocks + 1) / 2. Every realized row and column sums
/// to 1, and no finite convex combination of permutation matrices comes
/// uniformly close to it.
template <class T>
struct IsbellMatrix {
    Index num_blocks = 0;
    CoeffMatrix<T> realized;

    Index dimension() const { return num_blocks * (num_blocks + 1) / 2; }
};

/// First index of block j (blocks are consecutive along the diagonal).
inline Index isbell_block_start(Index j) { return j * (j - 1) / 2 + 1; }

template <class T>
IsbellMatrix<T> isbell_matrix(Index num_blocks) {
    if (num_blocks < 1) throw std::invalid_argument("need at least one block");
    typename CoeffMatrix<T>::EntryMap entries;
    for (Index j = 1; j <= num_blocks; ++j) {
        const Index start = isbell_block_start(j);
        const T value = T(1) / T(static_cast<long long>(j));
        for (Index r = start; r < start + j; ++r)
            for (Index c = start; c < start + j; ++c) entries[{r, c}] = value;
    }
    return IsbellMatrix<T>{num_blocks, CoeffMatrix<T>(std::move(entries), TailMode::zero())};
}

/// Action of a convex combination on a vector without materializing the
/// summed matrix.
template <class T>
FinVector<T> apply_combination(const ConvexCombination<T>& b, const FinVector<T>& x) {
    std::map<Index, T> out;
    for (const auto& [w, perm] : b.terms)
        for (const auto& [k, r] : perm.pairs()) {
            T xk = x.coord(k);
            if (!num<T>::is_zero(xk)) out[r] += w * xk;
        }
    return FinVector<T>(std::move(out));
}

/// Norm-gap witness against a p-term convex combination b on block n.
/// The witness is the indicator of the block columns where b has no entry
/// in the block rows; normalized to unit length it gives
/// gap_sq = ||(a - b) x||^2 >= clean_columns / n >= (n - p^2) / n.
template <class T>
struct IsbellGapResult {
    FinVector<T> witness;   // unnormalized indicator of the chosen columns
    T gap_sq;               // squared norm against the normalized witness
    Index clean_columns = 0;
};

template <class T>
IsbellGapResult<T> isbell_gap(const IsbellMatrix<T>& a, const ConvexCombination<T>& b,
                              Index block) {
    if (block < 1 || block > a.num_blocks)
        throw std::invalid_argument("block " + std::to_string(block) + " does not exist");
    const Index p = static_cast<Index>(b.terms.size());
    if (p * p >= block)
        throw PTooLarge("bound (n-p^2)/n is vacuous for p=" + std::to_string(p) +
                        ", n=" + std::to_string(block));

    const Index start = isbell_block_start(block);
    const Index end = start + block - 1;

    std::map<Index, T> indicator;
    for (Index k = start; k <= end; ++k) {
        bool clean = true;
        for (const auto& [w, perm] : b.terms) {
            auto r = perm.image(k);
            if (r && *r >= start && *r <= end) {
                clean = false;
                break;
            }
        }
        if (clean) indicator[k] = T(1);
    }
    const Index q = static_cast<Index>(indicator.size());
    if (q == 0)
        throw WitnessUnavailable("combination covers every column of block " +
                                 std::to_string(block));

    FinVector<T> ones(std::move(indicator));
    FinVector<T> diff = a.realized.apply(ones) - apply_combination(b, ones);
    T gap_sq = diff.norm_sq() / T(static_cast<long long>(q));
    return {std::move(ones), std::move(gap_sq), q};
}

// ---------------------------------------------------------------------------
// Sweeps

enum class VerdictKind { ConvergesToZero, BoundedAway, Inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double bound = 0.0;  // meaningful for BoundedAway

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

/// Report of a seminorm sweep; samples are keyed by index n.
struct SeminormReport {
    std::string label;
    std::vector<std::pair<Index, double>> samples;
    Verdict verdict;
};

/// Decision rule: converges-to-zero when the trailing quarter of the
/// samples is below eps; bounded away when a claimed bound is met by all
/// samples within eps; otherwise inconclusive.
Verdict decide_verdict(const std::vector<double>& values, double eps,
                       std::optional<double> claimed_bound);

/// Typed sweep data; exact samples convert to a double report at the edge.
template <class T>
struct SweepData {
    std::string label;
    std::vector<std::pair<Index, T>> samples;
    Verdict verdict;

    SeminormReport to_report() const {
        SeminormReport r{label, {}, verdict};
        r.samples.reserve(samples.size());
        for (const auto& [n, v] : samples) r.samples.push_back({n, num<T>::to_double(v)});
        return r;
    }
};

/// Block swap of [1, n] and [n+1, 2n], identity beyond; an involution.
PartialPermutation shift_permutation(Index n);

/// Samples <pi(rho_n) x, y> for the block swaps rho_n, n = 1..max_n. The
/// pairing is exactly 0 once n reaches the larger support, which in exact
/// mode is also the verdict rule; float mode falls back to the trailing
/// quarter threshold.
template <class T>
SweepData<T> weak_null_sweep(const FinVector<T>& x, const FinVector<T>& y, Index max_n) {
    SweepData<T> data;
    data.label = "weak pairing against block-swap permutations";
    std::vector<double> values;
    for (Index n = 1; n <= max_n; ++n) {
        auto u = permutation_matrix<T>(shift_permutation(n), TailMode::identity(2 * n + 1));
        T v = weak_pairing(u, x, y);
        data.samples.push_back({n, v});
        values.push_back(num<T>::to_double(v));
    }
    if constexpr (num<T>::exact) {
        Index support = std::max(x.max_support(), y.max_support());
        bool decided = max_n >= support;
        bool all_zero = true;
        for (const auto& [n, v] : data.samples)
            if (n >= support && !num<T>::is_zero(v)) all_zero = false;
        data.verdict = (decided && all_zero) ? Verdict{VerdictKind::ConvergesToZero, 0.0}
                                             : Verdict{VerdictKind::Inconclusive, 0.0};
    } else {
        data.verdict = decide_verdict(values, float_tolerance(), std::nullopt);
    }
    return data;
}

/// Rank-one matrices u_n with a single 1 at (1, n): ||u_n x|| = |x_n| dies
/// along any finitely supported x, while ||u_n^* e_1|| = ||e_n|| stays 1.
/// Returns the strong sweep and the adjoint sweep.
template <class T>
std::pair<SweepData<T>, SweepData<T>> strong_not_strongstar_sweep(const FinVector<T>& x,
                                                                  Index max_n) {
    SweepData<T> strong, adj;
    strong.label = "strong seminorm of rank-one matrices";
    adj.label = "adjoint strong seminorm at e_1";
    const FinVector<T> e1 = FinVector<T>::unit(1);
    std::vector<double> strong_values;
    for (Index n = 1; n <= max_n; ++n) {
        CoeffMatrix<T> u({{{1, n}, T(1)}}, TailMode::zero());
        // u x is supported on coordinate 1 alone, so the norm is exact.
        T s = u.apply(x).coord(1);
        if (s < T(0)) s = -s;
        strong.samples.push_back({n, s});
        strong_values.push_back(num<T>::to_double(s));
        FinVector<T> astar = adjoint(u).apply(e1);
        T t = astar.coord(n);
        if (t < T(0)) t = -t;
        adj.samples.push_back({n, t});
    }
    if constexpr (num<T>::exact) {
        Index support = x.max_support();
        bool decided = max_n > support || x.is_zero();
        bool all_zero = true;
        for (const auto& [n, v] : strong.samples)
            if (n > support && !num<T>::is_zero(v)) all_zero = false;
        strong.verdict = (decided && all_zero) ? Verdict{VerdictKind::ConvergesToZero, 0.0}
                                               : Verdict{VerdictKind::Inconclusive, 0.0};
    } else {
        strong.verdict = decide_verdict(strong_values, float_tolerance(), std::nullopt);
    }
    bool away = true;
    for (const auto& [n, v] : adj.samples)
        if (v < T(1) && !num<T>::eq(v, T(1))) away = false;
    adj.verdict = away ? Verdict{VerdictKind::BoundedAway, 1.0}
                       : Verdict{VerdictKind::Inconclusive, 0.0};
    return {std::move(strong), std::move(adj)};
}

// ---------------------------------------------------------------------------
// Exposing functional and exact dimensions

/// f(v) = <v x_I, u x_I> - <v x_{I^c}, x_{[1,n]}>, where x_J has
/// coordinates 2^{-j/2} on J, I is the column support of u, and I^c its
/// complement in [1, n]. Attains its strict maximum over the partial
/// permutations of [1, n] at u alone.
double exposed_functional(const PartialPermutation& u, const PartialPermutation& v, Index n);

/// Exhaustive uniqueness check of the maximum; budget-limited to n <= 6.
bool exposed_verify(const PartialPermutation& u, Index n);

/// All partial permutations of [1, n], deterministically ordered.
std::vector<PartialPermutation> enumerate_partial_permutations(Index n);

/// All total permutations of [1, n], in lexicographic image order.
std::vector<PartialPermutation> enumerate_total_permutations(Index n);

/// Dimension of {X : X P = P X for the transposition (1 2) and the full
/// cycle (1..m)} by exact null-space rank of the m^2 x m^2 system;
/// budget-limited to m <= 8. Equals 2 for m >= 2 and 1 for m = 1.
Index commutant_dimension(Index m);

enum class SpanVariant { TailLift, Corner };

/// Exact dimension of the real span, vectorized in R^{n^2}: TailLift spans
/// the n x n total permutation matrices, dimension (n-1)^2 + 1; Corner
/// spans the corners of finitary permutations of [1, 2n], i.e. all partial
/// permutation matrices, dimension n^2. Budget-limited to n <= 6.
Index span_dimension(Index n, SpanVariant variant);

}  // namespace blab
