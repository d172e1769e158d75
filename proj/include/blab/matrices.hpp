#pragma once

// Finitely describable infinite matrices over N x N, finitary permutations,
// and the classification DS / DSS / PS / Permutation. A matrix is a finite
// sparse entry map plus an explicit tail: zero everywhere else, or the
// identity pattern delta_{mk} from a given start index on. The tail is part
// of the value, not inferred, because stochasticity is undecidable from any
// finite entry list alone.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blab/errors.hpp"
#include "blab/scalar.hpp"

namespace blab {

enum class TailKind { Zero, Identity };

struct TailMode {
    TailKind kind = TailKind::Zero;
    Index identity_from = 0;  // meaningful iff kind == Identity; >= 1

    static TailMode zero() { return {TailKind::Zero, 0}; }
    static TailMode identity(Index start) {
        if (start < 1) throw std::invalid_argument("identity tail start must be >= 1");
        return {TailKind::Identity, start};
    }
    bool is_identity() const { return kind == TailKind::Identity; }
    friend bool operator==(const TailMode&, const TailMode&) = default;
};

/// Finite injection on positive integers; maps column index -> row index,
/// so its matrix has a 1 at (image(k), k) for each pair.
class PartialPermutation {
  public:
    PartialPermutation() = default;

    explicit PartialPermutation(std::map<Index, Index> pairs) : map_(std::move(pairs)) {
        std::set<Index> seen;
        for (const auto& [k, r] : map_) {
            if (k < 1 || r < 1) throw std::invalid_argument("indices must be >= 1");
            if (!seen.insert(r).second)
                throw std::invalid_argument("partial permutation is not injective at value " +
                                            std::to_string(r));
        }
    }

    const std::map<Index, Index>& pairs() const { return map_; }
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }

    std::optional<Index> image(Index k) const {
        auto it = map_.find(k);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Index> preimage(Index r) const {
        for (const auto& [k, v] : map_)
            if (v == r) return k;
        return std::nullopt;
    }

    PartialPermutation inverse() const {
        std::map<Index, Index> inv;
        for (const auto& [k, v] : map_) inv[v] = k;
        return PartialPermutation(std::move(inv));
    }

    /// Largest index appearing in the domain or range (0 when empty).
    Index max_index() const {
        Index m = 0;
        for (const auto& [k, v] : map_) m = std::max({m, k, v});
        return m;
    }

    /// Domain and range both equal [1, n].
    bool total_on(Index n) const {
        if (map_.size() != n) return false;
        std::set<Index> range;
        for (const auto& [k, v] : map_) {
            if (k < 1 || k > n || v < 1 || v > n) return false;
            range.insert(v);
        }
        return range.size() == n;
    }

    /// Domain and range contained in [1, n].
    bool within(Index n) const { return max_index() <= n; }

    friend bool operator==(const PartialPermutation&, const PartialPermutation&) = default;
    friend auto operator<=>(const PartialPermutation& a, const PartialPermutation& b) {
        return a.map_ <=> b.map_;
    }

  private:
    std::map<Index, Index> map_;
};

/// Composition as partial maps: defined at k iff inner is defined at k and
/// outer is defined at inner(k).
inline PartialPermutation compose_partial(const PartialPermutation& outer,
                                          const PartialPermutation& inner) {
    std::map<Index, Index> out;
    for (const auto& [k, mid] : inner.pairs())
        if (auto r = outer.image(mid)) out[k] = *r;
    return PartialPermutation(std::move(out));
}

/// Composition as finitary permutations: both maps are extended by the
/// identity off their domains. Fixed points of the composite are dropped.
inline PartialPermutation compose_finitary(const PartialPermutation& outer,
                                           const PartialPermutation& inner) {
    std::set<Index> domain;
    for (const auto& [k, v] : inner.pairs()) domain.insert(k);
    for (const auto& [k, v] : outer.pairs()) domain.insert(k);
    auto step = [](const PartialPermutation& p, Index k) {
        auto r = p.image(k);
        return r ? *r : k;
    };
    std::map<Index, Index> out;
    for (Index k : domain) {
        Index r = step(outer, step(inner, k));
        if (r != k) out[k] = r;
    }
    return PartialPermutation(std::move(out));
}

/// Finitely supported vector over positive indices; zero coordinates are
/// never stored.
template <class T>
class FinVector {
  public:
    FinVector() = default;

    explicit FinVector(std::map<Index, T> coords) : coords_(std::move(coords)) {
        for (auto it = coords_.begin(); it != coords_.end();) {
            if (it->first < 1) throw std::invalid_argument("vector index must be >= 1");
            it = num<T>::is_zero(it->second) ? coords_.erase(it) : std::next(it);
        }
    }

    static FinVector unit(Index k) { return FinVector(std::map<Index, T>{{k, T(1)}}); }

    const std::map<Index, T>& coords() const { return coords_; }
    bool is_zero() const { return coords_.empty(); }

    T coord(Index k) const {
        auto it = coords_.find(k);
        return it == coords_.end() ? T(0) : it->second;
    }

    Index max_support() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }

    T dot(const FinVector& other) const {
        T acc(0);
        const auto& small = coords_.size() <= other.coords_.size() ? coords_ : other.coords_;
        const auto& big = coords_.size() <= other.coords_.size() ? other.coords_ : coords_;
        for (const auto& [k, v] : small) {
            auto it = big.find(k);
            if (it != big.end()) acc += v * it->second;
        }
        return acc;
    }

    T norm_sq() const {
        T acc(0);
        for (const auto& [k, v] : coords_) acc += v * v;
        return acc;
    }

    double norm() const { return std::sqrt(num<T>::to_double(norm_sq())); }

    FinVector scaled(const T& factor) const {
        std::map<Index, T> out;
        for (const auto& [k, v] : coords_) out[k] = v * factor;
        return FinVector(std::move(out));
    }

    friend FinVector operator+(const FinVector& a, const FinVector& b) {
        std::map<Index, T> out = a.coords_;
        for (const auto& [k, v] : b.coords_) out[k] += v;
        return FinVector(std::move(out));
    }

    friend FinVector operator-(const FinVector& a, const FinVector& b) {
        std::map<Index, T> out = a.coords_;
        for (const auto& [k, v] : b.coords_) out[k] -= v;
        return FinVector(std::move(out));
    }

    friend bool operator==(const FinVector&, const FinVector&) = default;

  private:
    std::map<Index, T> coords_;
};

enum class MatrixClass { DS, DSS_strict, PS, Permutation, Other };

inline const char* to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::DS: return "DS";
        case MatrixClass::DSS_strict: return "DSS_strict";
        case MatrixClass::PS: return "PS";
        case MatrixClass::Permutation: return "Permutation";
        case MatrixClass::Other: return "Other";
    }
    return "?";
}

/// Sparse matrix with an explicit tail. Construction canonicalizes: zero
/// entries are dropped, and an identity tail is shrunk to the smallest
/// start whose diagonal pattern is already stored explicitly, so equal
/// operators compare equal.
template <class T>
class CoeffMatrix {
  public:
    using EntryMap = std::map<std::pair<Index, Index>, T>;

    CoeffMatrix() : tail_(TailMode::zero()) {}

    CoeffMatrix(EntryMap entries, TailMode tail) : entries_(std::move(entries)), tail_(tail) {
        for (auto it = entries_.begin(); it != entries_.end();) {
            if (it->first.first < 1 || it->first.second < 1)
                throw std::invalid_argument("matrix indices must be >= 1");
            it = num<T>::is_zero(it->second) ? entries_.erase(it) : std::next(it);
        }
        if (tail_.is_identity()) {
            for (const auto& [pos, v] : entries_)
                if (pos.first >= tail_.identity_from && pos.second >= tail_.identity_from)
                    throw std::invalid_argument(
                        "explicit entry overlaps the identity tail region at (" +
                        std::to_string(pos.first) + "," + std::to_string(pos.second) + ")");
            shrink_tail();
        }
    }

    static CoeffMatrix zero() { return CoeffMatrix(); }

    /// Full identity operator.
    static CoeffMatrix identity() { return CoeffMatrix({}, TailMode::identity(1)); }

    /// The operator that kills e_1..e_{start-1} and fixes e_k for k >= start.
    static CoeffMatrix tail_identity(Index start) {
        return CoeffMatrix({}, TailMode::identity(start));
    }

    const EntryMap& entries() const { return entries_; }
    const TailMode& tail() const { return tail_; }

    T coefficient(Index m, Index k) const {
        auto it = entries_.find({m, k});
        if (it != entries_.end()) return it->second;
        if (tail_.is_identity() && m == k && m >= tail_.identity_from) return T(1);
        return T(0);
    }

    T row_sum(Index m) const {
        T acc(0);
        auto it = entries_.lower_bound({m, 1});
        for (; it != entries_.end() && it->first.first == m; ++it) acc += it->second;
        if (tail_.is_identity() && m >= tail_.identity_from) acc += T(1);
        return acc;
    }

    T col_sum(Index k) const {
        T acc(0);
        for (const auto& [pos, v] : entries_)
            if (pos.second == k) acc += v;
        if (tail_.is_identity() && k >= tail_.identity_from) acc += T(1);
        return acc;
    }

    /// Matrix action (u x)_m = sum_k u_{mk} x_k. Finite because the
    /// explicit entry map is finite and the tail acts diagonally on the
    /// finitely supported x; divergence cannot occur for finitely
    /// describable input.
    FinVector<T> apply(const FinVector<T>& x) const {
        std::map<Index, T> out;
        for (const auto& [pos, v] : entries_) {
            T xk = x.coord(pos.second);
            if (!num<T>::is_zero(xk)) out[pos.first] += v * xk;
        }
        if (tail_.is_identity()) {
            Index s = tail_.identity_from;
            for (const auto& [k, xk] : x.coords())
                if (k >= s) out[k] += xk;
        }
        return FinVector<T>(std::move(out));
    }

    /// Indices of rows (respectively columns) carrying explicit entries.
    std::set<Index> explicit_rows() const {
        std::set<Index> out;
        for (const auto& [pos, v] : entries_) out.insert(pos.first);
        return out;
    }
    std::set<Index> explicit_cols() const {
        std::set<Index> out;
        for (const auto& [pos, v] : entries_) out.insert(pos.second);
        return out;
    }

    /// Largest row/column index touched by an explicit entry (0 if none).
    Index max_explicit_index() const {
        Index m = 0;
        for (const auto& [pos, v] : entries_) m = std::max({m, pos.first, pos.second});
        return m;
    }

    friend bool operator==(const CoeffMatrix&, const CoeffMatrix&) = default;

  private:
    void shrink_tail() {
        // Absorb explicit diagonal 1-entries adjacent to the tail. Shrinking
        // from s to s-1 needs a_{s-1,s-1} == 1 stored explicitly and no other
        // explicit entry with both coordinates >= s-1.
        while (tail_.identity_from > 1) {
            Index d = tail_.identity_from - 1;
            auto diag = entries_.find({d, d});
            if (diag == entries_.end() || !num<T>::eq(diag->second, T(1))) break;
            bool blocked = false;
            for (const auto& [pos, v] : entries_) {
                if (pos == std::pair{d, d}) continue;
                if (pos.first >= d && pos.second >= d) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) break;
            entries_.erase(diag);
            tail_.identity_from = d;
        }
    }

    EntryMap entries_;
    TailMode tail_;
};

/// Classifies by entries and tail. Precedence runs most specific first:
/// Permutation, then PS, DS, DSS_strict, Other.
template <class T>
MatrixClass classify(const CoeffMatrix<T>& u) {
    const auto& tail = u.tail();
    const Index start = tail.is_identity() ? tail.identity_from : 0;

    bool nonneg = true;
    bool zero_one = true;           // every explicit entry is 0 or 1 (0 only via float noise)
    bool inside_block = true;       // identity tail: all entries within [1,start)^2
    std::map<Index, int> row_ones, col_ones;
    for (const auto& [pos, v] : u.entries()) {
        if (v < T(0) && !num<T>::eq(v, T(0))) nonneg = false;
        bool is_one = num<T>::eq(v, T(1));
        if (!is_one && !num<T>::eq(v, T(0))) zero_one = false;
        if (is_one) {
            ++row_ones[pos.first];
            ++col_ones[pos.second];
        }
        if (tail.is_identity() && (pos.first >= start || pos.second >= start))
            inside_block = false;
    }
    if (!nonneg) return MatrixClass::Other;

    auto rows = u.explicit_rows();
    auto cols = u.explicit_cols();

    bool ps = zero_one && inside_block;
    if (ps)
        for (const auto& [r, c] : row_ones)
            if (c > 1) { ps = false; break; }
    if (ps)
        for (const auto& [k, c] : col_ones)
            if (c > 1) { ps = false; break; }

    if (ps && tail.is_identity()) {
        // Permutation needs exactly one 1 in every row and column below the
        // tail; beyond it the tail provides the diagonal 1.
        if (row_ones.size() == start - 1 && col_ones.size() == start - 1)
            return MatrixClass::Permutation;
        return MatrixClass::PS;
    }
    if (ps) return MatrixClass::PS;

    // Row/column sums. Rows inside an identity tail without explicit entries
    // sum to exactly 1; rows beyond all explicit data sum to 0 (zero tail).
    bool all_le_one = true;
    bool explicit_region_exactly_one = true;
    for (Index m : rows) {
        T s = u.row_sum(m);
        if (s > T(1) && !num<T>::eq(s, T(1))) all_le_one = false;
        if (!num<T>::eq(s, T(1))) explicit_region_exactly_one = false;
    }
    for (Index k : cols) {
        T s = u.col_sum(k);
        if (s > T(1) && !num<T>::eq(s, T(1))) all_le_one = false;
        if (!num<T>::eq(s, T(1))) explicit_region_exactly_one = false;
    }

    bool ds = false;
    if (tail.is_identity() && inside_block && explicit_region_exactly_one) {
        // Every row and column in [1, start) must be covered by entries
        // summing to 1; uncovered ones sum to 0.
        ds = rows.size() == start - 1 && cols.size() == start - 1;
    }
    if (ds) return MatrixClass::DS;
    if (all_le_one) return MatrixClass::DSS_strict;
    return MatrixClass::Other;
}

/// Row/column sums that exceed 1, for diagnostics on Other-classified input.
template <class T>
std::vector<std::pair<std::string, T>> sum_violations(const CoeffMatrix<T>& u) {
    std::vector<std::pair<std::string, T>> out;
    for (Index m : u.explicit_rows()) {
        T s = u.row_sum(m);
        if (s > T(1) && !num<T>::eq(s, T(1))) out.push_back({"row " + std::to_string(m), s});
    }
    for (Index k : u.explicit_cols()) {
        T s = u.col_sum(k);
        if (s > T(1) && !num<T>::eq(s, T(1))) out.push_back({"col " + std::to_string(k), s});
    }
    for (const auto& [pos, v] : u.entries())
        if (v < T(0) && !num<T>::eq(v, T(0)))
            out.push_back({"entry (" + std::to_string(pos.first) + "," +
                               std::to_string(pos.second) + ")",
                           v});
    return out;
}

/// Transpose; the tail is preserved (the identity pattern is symmetric).
template <class T>
CoeffMatrix<T> adjoint(const CoeffMatrix<T>& u) {
    typename CoeffMatrix<T>::EntryMap out;
    for (const auto& [pos, v] : u.entries()) out[{pos.second, pos.first}] = v;
    return CoeffMatrix<T>(std::move(out), u.tail());
}

/// Matrix of a partial permutation: a 1 at (p(k), k) per pair. With a zero
/// tail this is a partial permutation matrix. With an identity tail the map
/// is read as a finitary permutation, extended by the identity on the rest
/// of [1, start): the extension must itself be injective, i.e. the stored
/// domain and range must coincide as sets.
template <class T>
CoeffMatrix<T> permutation_matrix(const PartialPermutation& p, TailMode tail) {
    typename CoeffMatrix<T>::EntryMap out;
    for (const auto& [k, r] : p.pairs()) out[{r, k}] = T(1);
    if (tail.is_identity()) {
        const Index start = tail.identity_from;
        if (p.max_index() >= start)
            throw std::invalid_argument(
                "permutation touches index " + std::to_string(p.max_index()) +
                " inside the identity tail starting at " + std::to_string(start));
        std::set<Index> domain, range;
        for (const auto& [k, r] : p.pairs()) {
            domain.insert(k);
            range.insert(r);
        }
        if (domain != range)
            throw std::invalid_argument(
                "map is not a finitary permutation: identity extension collides with its "
                "domain or range");
        for (Index j = 1; j < start; ++j)
            if (!domain.count(j)) out[{j, j}] = T(1);
    }
    return CoeffMatrix<T>(std::move(out), tail);
}

namespace detail {

// Re-expresses entries + identity-from-start when explicit deviations fall
// inside the tail region: pushes the start beyond them and materializes the
// displaced diagonal.
template <class T>
CoeffMatrix<T> fold_into_identity_tail(typename CoeffMatrix<T>::EntryMap entries, Index start) {
    Index far = 0;
    for (const auto& [pos, v] : entries)
        if (pos.first >= start && pos.second >= start)
            far = std::max(far, std::max(pos.first, pos.second));
    if (far > 0) {
        Index new_start = far + 1;
        for (Index j = start; j < new_start; ++j) entries[{j, j}] += T(1);
        start = new_start;
    }
    return CoeffMatrix<T>(std::move(entries), TailMode::identity(start));
}

}  // namespace detail

/// Matrix product u * w of finitely describable matrices. The product of
/// the explicit parts is a finite sum; tails compose as zero-absorbing and
/// identity-composing.
template <class T>
CoeffMatrix<T> compose(const CoeffMatrix<T>& u, const CoeffMatrix<T>& w) {
    std::map<Index, std::vector<std::pair<Index, T>>> w_rows;
    for (const auto& [pos, v] : w.entries()) w_rows[pos.first].push_back({pos.second, v});

    typename CoeffMatrix<T>::EntryMap acc;
    const bool u_id = u.tail().is_identity();
    const bool w_id = w.tail().is_identity();

    for (const auto& [pos, uv] : u.entries()) {
        const auto [m, j] = pos;
        if (auto it = w_rows.find(j); it != w_rows.end())
            for (const auto& [k, wv] : it->second) acc[{m, k}] += uv * wv;
        if (w_id && j >= w.tail().identity_from) acc[{m, j}] += uv;
    }
    if (u_id) {
        Index su = u.tail().identity_from;
        for (const auto& [pos, wv] : w.entries())
            if (pos.first >= su) acc[pos] += wv;
    }

    if (u_id && w_id)
        return detail::fold_into_identity_tail<T>(
            std::move(acc), std::max(u.tail().identity_from, w.tail().identity_from));
    return CoeffMatrix<T>(std::move(acc), TailMode::zero());
}

/// Convex blend t*u + (1-t)*w. Requires matching tail kinds so the blended
/// tail is again a zero or identity pattern.
template <class T>
CoeffMatrix<T> blend(const T& t, const CoeffMatrix<T>& u, const CoeffMatrix<T>& w) {
    if (!(t > T(0) && t < T(1))) throw std::invalid_argument("blend weight must be in (0,1)");
    if (u.tail().is_identity() != w.tail().is_identity())
        throw std::invalid_argument("blend requires matching tail kinds");
    const T s = T(1) - t;

    typename CoeffMatrix<T>::EntryMap acc;
    for (const auto& [pos, v] : u.entries()) acc[pos] += t * v;
    for (const auto& [pos, v] : w.entries()) acc[pos] += s * v;

    if (!u.tail().is_identity()) return CoeffMatrix<T>(std::move(acc), TailMode::zero());

    Index su = u.tail().identity_from, sw = w.tail().identity_from;
    Index start = std::max(su, sw);
    for (Index j = su; j < start; ++j) acc[{j, j}] += t;   // u's tail diagonal before start
    for (Index j = sw; j < start; ++j) acc[{j, j}] += s;   // w's tail diagonal before start
    return CoeffMatrix<T>(std::move(acc), TailMode::identity(start));
}

}  // namespace blab
