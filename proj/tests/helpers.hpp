#pragma once

// Shared shorthand for building exact-mode values in tests.

#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>

#include "blab/matrices.hpp"

namespace blab::test {

inline Rational rat(const std::string& s) { return parse_rational(s); }

inline PartialPermutation pp(std::initializer_list<std::pair<Index, Index>> pairs) {
    std::map<Index, Index> m;
    for (auto& [k, r] : pairs) m[k] = r;
    return PartialPermutation(std::move(m));
}

inline CoeffMatrix<Rational> mat(
    std::initializer_list<std::tuple<Index, Index, std::string>> entries,
    TailMode tail = TailMode::zero()) {
    CoeffMatrix<Rational>::EntryMap m;
    for (auto& [r, c, v] : entries) m[{r, c}] = rat(v);
    return CoeffMatrix<Rational>(std::move(m), tail);
}

inline FinVector<Rational> vec(std::initializer_list<std::pair<Index, std::string>> coords) {
    std::map<Index, Rational> m;
    for (auto& [k, v] : coords) m[k] = rat(v);
    return FinVector<Rational>(std::move(m));
}

}  // namespace blab::test
