#pragma once

// Seeded, suite-scoped random streams. Each suite derives its generator
// from (user seed, suite name), so adding a suite never perturbs the
// streams of existing ones. Sampling avoids std::uniform_int_distribution
// to keep byte-identical reports across standard library implementations.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "blab/decomposition.hpp"
#include "blab/matrices.hpp"
#include "blab/scalar.hpp"

namespace blab {

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 suite_rng(std::uint64_t seed, std::string_view suite) {
    return std::mt19937_64(splitmix64(seed ^ fnv1a64(suite)));
}

/// Uniform integer in [0, n) by rejection; n >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Uniform total permutation of [1, n] (Fisher-Yates).
inline PartialPermutation random_total_permutation(std::mt19937_64& rng, Index n) {
    std::vector<Index> image(n);
    for (Index i = 0; i < n; ++i) image[i] = i + 1;
    for (Index i = n; i > 1; --i) std::swap(image[i - 1], image[uniform_below(rng, i)]);
    std::map<Index, Index> pairs;
    for (Index k = 1; k <= n; ++k) pairs[k] = image[k - 1];
    return PartialPermutation(std::move(pairs));
}

/// Random partial injection on [1, n] with roughly `expected` pairs.
inline PartialPermutation random_partial_permutation(std::mt19937_64& rng, Index n,
                                                     Index expected) {
    PartialPermutation total = random_total_permutation(rng, n);
    std::map<Index, Index> pairs;
    for (const auto& [k, r] : total.pairs())
        if (uniform_below(rng, n) < expected) pairs[k] = r;
    return PartialPermutation(std::move(pairs));
}

/// Positive rational weights summing to exactly 1.
inline std::vector<Rational> random_convex_weights(std::mt19937_64& rng, std::size_t count) {
    std::vector<Rational> w(count);
    Rational total(0);
    for (auto& v : w) {
        v = Rational(1 + uniform_below(rng, 16));
        total += v;
    }
    for (auto& v : w) v /= total;
    return w;
}

/// Random rational substochastic block: sparse entries a/16 with a in
/// [1,16], then rows with sum > 1 are rescaled to sum 1, then columns
/// likewise. Rescaling only shrinks entries, so two passes suffice.
inline FiniteBlock<Rational> random_substochastic_block(std::mt19937_64& rng, Index n) {
    FiniteBlock<Rational> b(n);
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j)
            if (uniform_below(rng, 2) == 0)
                b.set(i, j, Rational(1 + uniform_below(rng, 16), 16));
    for (Index i = 1; i <= n; ++i) {
        Rational s = b.row_sum(i);
        if (s > 1)
            for (Index j = 1; j <= n; ++j) b.set(i, j, b.at(i, j) / s);
    }
    for (Index j = 1; j <= n; ++j) {
        Rational s = b.col_sum(j);
        if (s > 1)
            for (Index i = 1; i <= n; ++i) b.set(i, j, b.at(i, j) / s);
    }
    return b;
}

/// Random doubly stochastic block as an explicit convex combination of
/// `terms` random permutations.
inline FiniteBlock<Rational> random_ds_block(std::mt19937_64& rng, Index n,
                                             std::size_t terms) {
    auto weights = random_convex_weights(rng, terms);
    FiniteBlock<Rational> b(n);
    for (std::size_t t = 0; t < terms; ++t) {
        PartialPermutation p = random_total_permutation(rng, n);
        for (const auto& [k, r] : p.pairs()) b.add(r, k, weights[t]);
    }
    return b;
}

/// Random finitely supported rational vector on indices [1, window].
inline FinVector<Rational> random_vector(std::mt19937_64& rng, Index window,
                                         Index expected_support) {
    std::map<Index, Rational> coords;
    for (Index k = 1; k <= window; ++k)
        if (uniform_below(rng, window) < expected_support) {
            long long numerator = static_cast<long long>(uniform_below(rng, 33)) - 16;
            if (numerator != 0) coords[k] = Rational(numerator, 8);
        }
    return FinVector<Rational>(std::move(coords));
}

}  // namespace blab
