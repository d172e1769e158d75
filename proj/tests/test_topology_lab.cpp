#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <set>

#include "blab/rng.hpp"
#include "blab/topology_lab.hpp"
#include "blab/truncation.hpp"

#include "helpers.hpp"

using namespace blab;
using namespace blab::test;

TEST_CASE("weak_pairing") {
    CHECK(weak_pairing(CoeffMatrix<Rational>::identity(), FinVector<Rational>::unit(1),
                       FinVector<Rational>::unit(1)) == 1);
    for (Index n = 1; n <= 8; ++n) {
        auto u = permutation_matrix<Rational>(shift_permutation(n),
                                              TailMode::identity(2 * n + 1));
        CHECK(weak_pairing(u, FinVector<Rational>::unit(1), FinVector<Rational>::unit(1)) == 0);
    }
    auto isbell = isbell_matrix<Rational>(3).realized;
    CHECK(weak_pairing(isbell, FinVector<Rational>::unit(2), FinVector<Rational>::unit(3)) ==
          rat("1/2"));
}

TEST_CASE("strong and strong* seminorms of rank-one matrices") {
    for (Index n = 1; n <= 6; ++n) {
        auto u = mat({{1, n, "1"}});
        CHECK(strong_seminorm_sq(u, FinVector<Rational>::unit(n)) == 1);
        if (n > 1) CHECK(strong_seminorm_sq(u, FinVector<Rational>::unit(n + 1)) == 0);
        CHECK(strongstar_seminorm_sq(u, FinVector<Rational>::unit(1)) == 1);
    }
}

TEST_CASE("op_norm") {
    auto identity = FiniteBlock<Rational>::from_rows(
        {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
    CHECK(op_norm(identity, 1e-12) == doctest::Approx(1.0));

    CHECK(op_norm(FiniteBlock<Rational>(3), 1e-12) == doctest::Approx(0.0));

    auto half = FiniteBlock<Rational>::from_rows(
        {{rat("1/2"), rat("1/2")}, {rat("1/2"), rat("1/2")}});
    CHECK(op_norm(half, 1e-12) == doctest::Approx(1.0));

    // DS/DSS blocks act as contractions; single rows give lower bounds.
    auto rng = suite_rng(21, "test-opnorm");
    for (int trial = 0; trial < 20; ++trial) {
        Index n = 2 + uniform_below(rng, 6);
        auto a = random_substochastic_block(rng, n);
        double sigma = op_norm(a, 1e-10);
        CHECK(sigma <= 1.0 + 1e-8);
        for (Index i = 1; i <= n; ++i) {
            double row = 0;
            for (Index j = 1; j <= n; ++j) {
                double v = num<Rational>::to_double(a.at(i, j));
                row += v * v;
            }
            CHECK(sigma >= std::sqrt(row) - 1e-8);
        }
    }

    // A supplied witness can only raise the estimate.
    std::vector<double> e1 = {1.0, 0.0};
    CHECK(op_norm(identity, 1e-12, &e1) == doctest::Approx(1.0));
}

TEST_CASE("isbell_matrix structure") {
    auto one = isbell_matrix<Rational>(1);
    CHECK(one.dimension() == 1);
    CHECK(one.realized == mat({{1, 1, "1"}}));

    auto two = isbell_matrix<Rational>(2);
    CHECK(two.dimension() == 3);
    CHECK(two.realized ==
          mat({{1, 1, "1"}, {2, 2, "1/2"}, {2, 3, "1/2"}, {3, 2, "1/2"}, {3, 3, "1/2"}}));

    auto three = isbell_matrix<Rational>(3);
    CHECK(three.dimension() == 6);
    CHECK(three.realized.coefficient(4, 6) == rat("1/3"));
    for (Index i = 1; i <= 6; ++i) {
        CHECK(three.realized.row_sum(i) == 1);
        CHECK(three.realized.col_sum(i) == 1);
    }
    CHECK(isbell_block_start(3) == 4);
}

TEST_CASE("isbell_gap bounds and edge cases") {
    auto a = isbell_matrix<Rational>(5);

    // A permutation acting far from block 2 leaves all columns clean.
    ConvexCombination<Rational> far{{{Rational(1), pp({{10, 11}, {11, 10}})}}};
    auto r = isbell_gap(a, far, 2);
    CHECK(r.clean_columns == 2);
    CHECK(r.gap_sq >= rat("1/2"));

    // Exactly p^2 = 1 covered column: the bound is attained.
    ConvexCombination<Rational> tight{{{Rational(1), pp({{2, 3}})}}};
    auto t = isbell_gap(a, tight, 2);
    CHECK(t.clean_columns == 1);
    CHECK(t.gap_sq == rat("1/2"));

    // n = 4 block with one covered column.
    ConvexCombination<Rational> one4{{{Rational(1), pp({{7, 8}})}}};
    CHECK(isbell_gap(a, one4, 4).gap_sq >= rat("3/4"));

    CHECK_THROWS_AS(isbell_gap(a, far, 1), PTooLarge);
    CHECK_THROWS_AS(isbell_gap(a, far, 6), std::invalid_argument);

    // The identity covers every column of the block: no witness columns.
    ConvexCombination<Rational> diag{{{Rational(1), pp({{2, 2}, {3, 3}})}}};
    CHECK_THROWS_AS(isbell_gap(a, diag, 2), WitnessUnavailable);
}

TEST_CASE("shift_permutation") {
    CHECK(shift_permutation(1) == pp({{1, 2}, {2, 1}}));
    CHECK(shift_permutation(2) == pp({{1, 3}, {2, 4}, {3, 1}, {4, 2}}));
    for (Index n = 1; n <= 6; ++n) {
        auto s = shift_permutation(n);
        CHECK(compose_finitary(s, s).empty());  // involution
        CHECK(s.total_on(2 * n));
    }
}

TEST_CASE("weak_null_sweep") {
    auto s1 = weak_null_sweep(FinVector<Rational>::unit(1), FinVector<Rational>::unit(1), 10);
    CHECK(s1.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0});
    for (const auto& [n, v] : s1.samples) CHECK(v == 0);

    auto s2 = weak_null_sweep(FinVector<Rational>::unit(1), FinVector<Rational>::unit(2), 10);
    CHECK(s2.samples[0].second == 1);  // the swap (1 2) pairs e_1 to e_2
    for (std::size_t i = 1; i < s2.samples.size(); ++i) CHECK(s2.samples[i].second == 0);
    CHECK(s2.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0});

    // Samples are keyed by strictly increasing n.
    auto report = s2.to_report();
    for (std::size_t i = 1; i < report.samples.size(); ++i)
        CHECK(report.samples[i - 1].first < report.samples[i].first);

    // Geometric decay, float mode: decreasing values, threshold verdict.
    std::map<Index, double> coords;
    for (Index k = 1; k <= 20; ++k) coords[k] = std::exp2(-0.5 * static_cast<double>(k));
    FinVector<double> g(std::move(coords));
    auto s3 = weak_null_sweep(g, g, 40);
    CHECK(s3.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0});
    CHECK(s3.samples[0].second > s3.samples[19].second);
}

TEST_CASE("strong_not_strongstar_sweep") {
    auto [strong, adj] = strong_not_strongstar_sweep(FinVector<Rational>::unit(3), 10);
    for (const auto& [n, v] : strong.samples) CHECK(v == (n == 3 ? 1 : 0));
    for (const auto& [n, v] : adj.samples) CHECK(v == 1);
    CHECK(strong.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0});
    CHECK(adj.verdict == Verdict{VerdictKind::BoundedAway, 1.0});

    auto [zs, za] = strong_not_strongstar_sweep(FinVector<Rational>(), 5);
    for (const auto& [n, v] : zs.samples) CHECK(v == 0);
    CHECK(zs.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0});

    // Cross-check the closed-form samples against the generic seminorms.
    std::map<Index, Rational> coords{{2, rat("3/5")}, {7, rat("-4/5")}};
    FinVector<Rational> x(std::move(coords));
    auto [sx, ax] = strong_not_strongstar_sweep(x, 9);
    for (const auto& [n, v] : sx.samples) {
        auto u = mat({{1, n, "1"}});
        CHECK(v * v == strong_seminorm_sq(u, x));
    }
}

TEST_CASE("verdict rule") {
    CHECK(decide_verdict({1.0, 0.5, 0.0, 0.0}, 1e-9, std::nullopt) ==
          Verdict{VerdictKind::ConvergesToZero, 0.0});
    CHECK(decide_verdict({1.0, 1.0, 1.0, 1.0}, 1e-9, 1.0) ==
          Verdict{VerdictKind::BoundedAway, 1.0});
    CHECK(decide_verdict({1.0, 1.0, 1.0, 0.5}, 1e-9, 1.0) ==
          Verdict{VerdictKind::Inconclusive, 0.0});
    CHECK(decide_verdict({}, 1e-9, std::nullopt) == Verdict{VerdictKind::Inconclusive, 0.0});
}

TEST_CASE("exposed_functional examples on [1,2]") {
    auto id2 = pp({{1, 1}, {2, 2}});
    CHECK(exposed_functional(id2, id2, 2) == doctest::Approx(0.75));

    // <swap x_I, x_I> = 2 * 2^{-1/2} * 2^{-1}, strictly below f(id) = 3/4.
    auto swap2 = pp({{1, 2}, {2, 1}});
    CHECK(exposed_functional(id2, swap2, 2) == doctest::Approx(2 * std::exp2(-1.5)));
    CHECK(exposed_functional(id2, swap2, 2) < exposed_functional(id2, id2, 2));

    // Empty u: f(v) = -<v x, x> <= 0 with equality only at v = empty.
    PartialPermutation empty;
    CHECK(exposed_functional(empty, empty, 2) == doctest::Approx(0.0));
    for (const auto& v : enumerate_partial_permutations(2)) {
        if (v.empty()) continue;
        CHECK(exposed_functional(empty, v, 2) < 0.0);
    }
}

TEST_CASE("exposed_verify") {
    CHECK(exposed_verify(pp({{1, 1}, {2, 2}}), 2));
    CHECK(exposed_verify(PartialPermutation(), 2));
    CHECK(exposed_verify(pp({{1, 2}}), 3));
    CHECK_THROWS_AS(exposed_verify(PartialPermutation(), 7), BudgetExceeded);
}

TEST_CASE("enumeration counts") {
    CHECK(enumerate_partial_permutations(1).size() == 2);
    CHECK(enumerate_partial_permutations(2).size() == 7);
    CHECK(enumerate_partial_permutations(3).size() == 34);
    CHECK(enumerate_partial_permutations(4).size() == 209);
    CHECK(enumerate_total_permutations(3).size() == 6);

    // No duplicates.
    auto all = enumerate_partial_permutations(3);
    std::set<PartialPermutation> unique(all.begin(), all.end());
    CHECK(unique.size() == all.size());
}

TEST_CASE("commutant dimensions against the orbit-counting oracle") {
    // Independent oracle: X commutes with the generators iff X_{ij} is
    // constant on the orbits of the diagonal action sigma.(i,j) =
    // (sigma(i), sigma(j)); the dimension is the number of orbits.
    auto orbit_count = [](Index m) {
        std::vector<std::vector<Index>> gens;
        if (m >= 2) {
            std::vector<Index> sw(m + 1), cy(m + 1);
            for (Index i = 1; i <= m; ++i) sw[i] = i;
            sw[1] = 2;
            sw[2] = 1;
            for (Index i = 1; i <= m; ++i) cy[i] = i % m + 1;
            gens = {sw, cy};
        }
        std::vector<Index> parent(m * m);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](auto&& self, Index v) -> Index {
            return parent[v] == v ? v : parent[v] = self(self, parent[v]);
        };
        for (const auto& g : gens)
            for (Index i = 1; i <= m; ++i)
                for (Index j = 1; j <= m; ++j) {
                    Index a = (i - 1) * m + (j - 1);
                    Index b = (g[i] - 1) * m + (g[j] - 1);
                    parent[find(find, a)] = find(find, b);
                }
        std::set<Index> roots;
        for (Index v = 0; v < m * m; ++v) roots.insert(find(find, v));
        return static_cast<Index>(roots.size());
    };

    CHECK(commutant_dimension(1) == 1);
    CHECK(commutant_dimension(2) == 2);
    CHECK(commutant_dimension(5) == 2);
    for (Index m = 1; m <= 8; ++m) CHECK(commutant_dimension(m) == orbit_count(m));
    CHECK_THROWS_AS(commutant_dimension(9), BudgetExceeded);
}

TEST_CASE("span dimensions") {
    CHECK(span_dimension(1, SpanVariant::TailLift) == 1);
    CHECK(span_dimension(3, SpanVariant::TailLift) == 5);
    CHECK(span_dimension(3, SpanVariant::Corner) == 9);
    for (Index n = 1; n <= 5; ++n) {
        CHECK(span_dimension(n, SpanVariant::TailLift) == (n - 1) * (n - 1) + 1);
        CHECK(span_dimension(n, SpanVariant::Corner) == n * n);
    }
    CHECK_THROWS_AS(span_dimension(7, SpanVariant::Corner), BudgetExceeded);

    // Corners of random finitary permutations of [1, 2n] are partial
    // permutations of [1, n], confirming the corner span's generating set.
    auto rng = suite_rng(23, "test-span");
    auto all3 = enumerate_partial_permutations(3);
    std::set<PartialPermutation> inventory(all3.begin(), all3.end());
    for (int trial = 0; trial < 40; ++trial) {
        auto rho = random_total_permutation(rng, 6);
        std::map<Index, Index> cornered;
        for (const auto& [k, r] : rho.pairs())
            if (k <= 3 && r <= 3) cornered[k] = r;
        CHECK(inventory.count(PartialPermutation(std::move(cornered))) == 1);
    }
}
