#pragma once

// Corner and border truncations, the finitary lift that re-attaches an
// identity tail behind a corner, and the truncation gaps that witness
// strong/weak approximation on finitely supported vectors.

#include <cmath>
#include <stdexcept>

#include "blab/matrices.hpp"

namespace blab {

namespace detail {
inline void check_level(Index n) {
    if (n < 1) throw std::invalid_argument("truncation level must be >= 1");
}
}  // namespace detail

/// Corner truncation: keeps entries with both indices <= n, zero tail.
template <class T>
CoeffMatrix<T> corner(const CoeffMatrix<T>& u, Index n) {
    detail::check_level(n);
    typename CoeffMatrix<T>::EntryMap out;
    for (const auto& [pos, v] : u.entries())
        if (pos.first <= n && pos.second <= n) out[pos] = v;
    if (u.tail().is_identity())
        for (Index j = u.tail().identity_from; j <= n; ++j) out[{j, j}] = T(1);
    return CoeffMatrix<T>(std::move(out), TailMode::zero());
}

/// Border truncation: keeps entries with row <= n or column <= n. An
/// identity tail contributes only its finitely many diagonal positions
/// inside the border, so the result is always a zero-tail matrix.
template <class T>
CoeffMatrix<T> border(const CoeffMatrix<T>& u, Index n) {
    detail::check_level(n);
    typename CoeffMatrix<T>::EntryMap out;
    for (const auto& [pos, v] : u.entries())
        if (pos.first <= n || pos.second <= n) out[pos] = v;
    if (u.tail().is_identity())
        for (Index j = u.tail().identity_from; j <= n; ++j) out[{j, j}] = T(1);
    return CoeffMatrix<T>(std::move(out), TailMode::zero());
}

/// Corner plus identity tail from n+1.
template <class T>
CoeffMatrix<T> finitary_lift(const CoeffMatrix<T>& u, Index n) {
    detail::check_level(n);
    return CoeffMatrix<T>(corner(u, n).entries(), TailMode::identity(n + 1));
}

/// Squared strong gap ||(u - u^[n]) x||_2^2, exact in rational mode.
template <class T>
T border_strong_gap_sq(const CoeffMatrix<T>& u, const FinVector<T>& x, Index n) {
    return (u.apply(x) - border(u, n).apply(x)).norm_sq();
}

/// Strong gap ||(u - u^[n]) x||_2.
template <class T>
double border_strong_gap(const CoeffMatrix<T>& u, const FinVector<T>& x, Index n) {
    return std::sqrt(num<T>::to_double(border_strong_gap_sq(u, x, n)));
}

/// Weak gap |<(u - u^<n>) x, y>|, exact in rational mode.
template <class T>
T corner_weak_gap(const CoeffMatrix<T>& u, const FinVector<T>& x, const FinVector<T>& y,
                  Index n) {
    T d = u.apply(x).dot(y) - corner(u, n).apply(x).dot(y);
    return d < T(0) ? T(-d) : d;
}

}  // namespace blab
