#pragma once

// Birkhoff-von Neumann decomposition of doubly stochastic blocks and its
// extension to doubly substochastic blocks through a doubly stochastic
// completion. Peeling is exact on rational input; the returned combination
// reconstructs the block with zero residual.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blab/errors.hpp"
#include "blab/matrices.hpp"

namespace blab {

/// Dense n x n block with nonnegative entries, 1-based accessors.
template <class T>
class FiniteBlock {
  public:
    explicit FiniteBlock(Index n) : n_(n), a_(n * n, T(0)) {
        if (n < 1) throw std::invalid_argument("block size must be >= 1");
    }

    static FiniteBlock from_rows(const std::vector<std::vector<T>>& rows) {
        FiniteBlock b(static_cast<Index>(rows.size()));
        for (Index i = 0; i < b.n_; ++i) {
            if (rows[i].size() != b.n_)
                throw std::invalid_argument("block rows must all have length n");
            for (Index j = 0; j < b.n_; ++j) b.a_[i * b.n_ + j] = rows[i][j];
        }
        b.check_nonneg();
        return b;
    }

    Index size() const { return n_; }

    const T& at(Index i, Index j) const { return a_[(i - 1) * n_ + (j - 1)]; }
    void set(Index i, Index j, T v) { a_[(i - 1) * n_ + (j - 1)] = std::move(v); }
    void add(Index i, Index j, const T& v) { a_[(i - 1) * n_ + (j - 1)] += v; }

    T row_sum(Index i) const {
        T acc(0);
        for (Index j = 1; j <= n_; ++j) acc += at(i, j);
        return acc;
    }
    T col_sum(Index j) const {
        T acc(0);
        for (Index i = 1; i <= n_; ++i) acc += at(i, j);
        return acc;
    }

    bool is_doubly_stochastic() const {
        for (Index i = 1; i <= n_; ++i)
            if (!num<T>::eq(row_sum(i), T(1)) || !num<T>::eq(col_sum(i), T(1))) return false;
        return true;
    }

    bool is_substochastic() const {
        for (Index i = 1; i <= n_; ++i) {
            T r = row_sum(i), c = col_sum(i);
            if (r > T(1) && !num<T>::eq(r, T(1))) return false;
            if (c > T(1) && !num<T>::eq(c, T(1))) return false;
        }
        return true;
    }

    /// Sparse zero-tail view of the block.
    CoeffMatrix<T> to_matrix() const {
        typename CoeffMatrix<T>::EntryMap out;
        for (Index i = 1; i <= n_; ++i)
            for (Index j = 1; j <= n_; ++j)
                if (!num<T>::is_zero(at(i, j))) out[{i, j}] = at(i, j);
        return CoeffMatrix<T>(std::move(out), TailMode::zero());
    }

    friend bool operator==(const FiniteBlock&, const FiniteBlock&) = default;

  private:
    void check_nonneg() const {
        for (Index i = 1; i <= n_; ++i)
            for (Index j = 1; j <= n_; ++j)
                if (at(i, j) < T(0) && !num<T>::eq(at(i, j), T(0)))
                    throw NotSubstochastic(NotSubstochastic::Axis::Entry, i,
                                           format_scalar(at(i, j)));
    }

    Index n_;
    std::vector<T> a_;
};

/// Positive weights summing to 1, each attached to a distinct partial
/// permutation. Term order is part of the deterministic contract.
template <class T>
struct ConvexCombination {
    std::vector<std::pair<T, PartialPermutation>> terms;

    void validate() const {
        T total(0);
        std::vector<const PartialPermutation*> perms;
        perms.reserve(terms.size());
        for (const auto& [w, p] : terms) {
            if (!num<T>::positive(w))
                throw std::invalid_argument("combination weight must be positive");
            total += w;
            perms.push_back(&p);
        }
        std::sort(perms.begin(), perms.end(),
                  [](const auto* a, const auto* b) { return *a < *b; });
        for (std::size_t i = 1; i < perms.size(); ++i)
            if (*perms[i - 1] == *perms[i])
                throw std::invalid_argument("duplicate permutation in combination");
        if (!num<T>::eq(total, T(1)))
            throw std::invalid_argument("combination weights sum to " + format_scalar(total) +
                                        ", expected 1");
    }
};

/// Weighted sum of the terms' permutation matrices inside [1,n]^2.
template <class T>
FiniteBlock<T> reconstruct(const ConvexCombination<T>& c, Index n) {
    FiniteBlock<T> out(n);
    for (const auto& [w, p] : c.terms) {
        if (!p.within(n))
            throw std::invalid_argument("combination term acts outside [1," +
                                        std::to_string(n) + "]");
        for (const auto& [k, r] : p.pairs()) out.add(r, k, w);
    }
    return out;
}

namespace detail {

// Deterministic perfect matching on the support of a residual whose row and
// column sums are all equal and positive. The matching is forced through
// the first row-major minimum entry, which both keeps the peeled weight
// maximal for that entry and bounds the total term count. Rows are matched
// in increasing order; the augmenting search scans columns in increasing
// order. Returns row index per column, or empty when no matching exists.
template <class T>
std::vector<Index> support_matching(const FiniteBlock<T>& r) {
    const Index n = r.size();
    auto in_support = [&](Index i, Index j) { return num<T>::positive(r.at(i, j)); };

    Index min_row = 0, min_col = 0;
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j)
            if (in_support(i, j) && (min_row == 0 || r.at(i, j) < r.at(min_row, min_col))) {
                min_row = i;
                min_col = j;
            }
    if (min_row == 0) return {};

    std::vector<Index> row_of_col(n + 1, 0);  // 0 = unmatched
    row_of_col[min_col] = min_row;

    std::vector<char> visited(n + 1, 0);
    auto augment = [&](auto&& self, Index row) -> bool {
        for (Index c = 1; c <= n; ++c) {
            if (visited[c] || !in_support(row, c)) continue;
            visited[c] = 1;
            if (row_of_col[c] == 0 ||
                (row_of_col[c] != min_row && self(self, row_of_col[c]))) {
                row_of_col[c] = row;
                return true;
            }
        }
        return false;
    };

    for (Index i = 1; i <= n; ++i) {
        if (i == min_row) continue;
        std::fill(visited.begin(), visited.end(), 0);
        visited[min_col] = 1;  // the seeded pair is immovable
        if (!augment(augment, i)) return {};
    }
    return row_of_col;
}

}  // namespace detail

/// Peels a doubly stochastic block into a convex combination of total
/// permutations of [1,n]. Each peel subtracts the residual minimum along a
/// support matching through that minimum, so at least one support entry
/// dies per step and the term count stays within n^2 - 2n + 2.
template <class T>
ConvexCombination<T> bvn_decompose(const FiniteBlock<T>& a) {
    const Index n = a.size();
    for (Index i = 1; i <= n; ++i) {
        T r = a.row_sum(i);
        if (!num<T>::eq(r, T(1)))
            throw NotDoublyStochastic(NotDoublyStochastic::Axis::Row, i, format_scalar(r));
        T c = a.col_sum(i);
        if (!num<T>::eq(c, T(1)))
            throw NotDoublyStochastic(NotDoublyStochastic::Axis::Col, i, format_scalar(c));
    }

    FiniteBlock<T> residual = a;
    ConvexCombination<T> out;
    T remaining(1);
    while (num<T>::positive(remaining)) {
        auto row_of_col = detail::support_matching(residual);
        if (row_of_col.empty())
            throw NoPerfectMatching("doubly stochastic residual has no support matching");
        T t = remaining;
        for (Index c = 1; c <= n; ++c) t = std::min(t, residual.at(row_of_col[c], c));
        std::map<Index, Index> pairs;
        for (Index c = 1; c <= n; ++c) {
            residual.set(row_of_col[c], c, residual.at(row_of_col[c], c) - t);
            pairs[c] = row_of_col[c];
        }
        out.terms.push_back({t, PartialPermutation(std::move(pairs))});
        remaining -= t;
    }

    if constexpr (!num<T>::exact) {
        T total(0);
        for (auto& [w, p] : out.terms) total += w;
        for (auto& [w, p] : out.terms) w /= total;
    }
    out.validate();
    return out;
}

/// Doubly stochastic completion [[A, D_r], [D_c, A^T]] of a substochastic
/// block, with D_r = diag(1 - row sums) and D_c = diag(1 - column sums).
/// Row i sums to rowsum_i + (1 - rowsum_i) = 1 and row n+j to
/// (1 - colsum_j) + colsum_j = 1; columns are symmetric.
template <class T>
FiniteBlock<T> mirsky_complete(const FiniteBlock<T>& a) {
    const Index n = a.size();
    for (Index i = 1; i <= n; ++i) {
        T r = a.row_sum(i);
        if (r > T(1) && !num<T>::eq(r, T(1)))
            throw NotSubstochastic(NotSubstochastic::Axis::Row, i, format_scalar(r));
        T c = a.col_sum(i);
        if (c > T(1) && !num<T>::eq(c, T(1)))
            throw NotSubstochastic(NotSubstochastic::Axis::Col, i, format_scalar(c));
    }
    FiniteBlock<T> out(2 * n);
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j) {
            out.set(i, j, a.at(i, j));
            out.set(n + j, n + i, a.at(i, j));  // transpose block
        }
    for (Index i = 1; i <= n; ++i) out.set(i, n + i, T(1) - a.row_sum(i));
    for (Index j = 1; j <= n; ++j) out.set(n + j, j, T(1) - a.col_sum(j));
    return out;
}

/// Decomposes a substochastic block into partial permutations of [1,n]:
/// completes to 2n x 2n, peels, and restricts each permutation to the
/// upper-left corner. Restrictions that coincide are merged by adding
/// weights, keeping first-occurrence order. The empty partial permutation
/// may carry weight.
template <class T>
ConvexCombination<T> mirsky_decompose(const FiniteBlock<T>& a) {
    const Index n = a.size();
    ConvexCombination<T> full = bvn_decompose(mirsky_complete(a));
    ConvexCombination<T> out;
    std::map<PartialPermutation, std::size_t> seen;
    for (const auto& [w, p] : full.terms) {
        std::map<Index, Index> corner_pairs;
        for (const auto& [k, r] : p.pairs())
            if (k <= n && r <= n) corner_pairs[k] = r;
        PartialPermutation restricted(std::move(corner_pairs));
        auto [it, inserted] = seen.try_emplace(restricted, out.terms.size());
        if (inserted)
            out.terms.push_back({w, std::move(restricted)});
        else
            out.terms[it->second].first += w;
    }
    out.validate();
    return out;
}

/// A substochastic block is an extreme point of the substochastic polytope
/// iff every entry is 0 or 1: any strictly interior entry splits the block
/// into two distinct substochastic neighbours.
template <class T>
bool is_extreme(const FiniteBlock<T>& a) {
    const Index n = a.size();
    for (Index i = 1; i <= n; ++i) {
        T r = a.row_sum(i);
        if (r > T(1) && !num<T>::eq(r, T(1)))
            throw NotSubstochastic(NotSubstochastic::Axis::Row, i, format_scalar(r));
        T c = a.col_sum(i);
        if (c > T(1) && !num<T>::eq(c, T(1)))
            throw NotSubstochastic(NotSubstochastic::Axis::Col, i, format_scalar(c));
    }
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j) {
            const T& v = a.at(i, j);
            if (!num<T>::eq(v, T(0)) && !num<T>::eq(v, T(1))) return false;
        }
    return true;
}

}  // namespace blab
