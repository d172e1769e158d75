#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blab/matrices.hpp"
#include "blab/rng.hpp"
#include "blab/topology_lab.hpp"
#include "blab/truncation.hpp"

#include "helpers.hpp"

using namespace blab;
using namespace blab::test;

TEST_CASE("rational parsing and formatting") {
    CHECK(rat("3/4") == Rational(3, 4));
    CHECK(rat("-2") == Rational(-2));
    CHECK(rat("0.25") == Rational(1, 4));
    CHECK(rat("-1.5") == Rational(-3, 2));
    CHECK(Rational(0.5) == Rational(1, 2));  // doubles convert exactly
    CHECK(format_rational(Rational(3, 4)) == "3/4");
    CHECK(format_rational(Rational(5)) == "5");
    CHECK_THROWS_AS(rat("1/0"), ParseError);
    CHECK_THROWS_AS(rat(""), ParseError);
}

TEST_CASE("coefficient respects tail semantics") {
    auto id = CoeffMatrix<Rational>::identity();
    CHECK(id.coefficient(7, 7) == 1);
    CHECK(id.coefficient(7, 8) == 0);

    auto m = mat({{1, 2, "1"}});
    CHECK(m.coefficient(1, 2) == 1);
    CHECK(m.coefficient(2, 1) == 0);

    auto isbell = isbell_matrix<Rational>(4).realized;
    CHECK(isbell.coefficient(2, 3) == rat("1/2"));
    CHECK(isbell.coefficient(4, 4) == rat("1/3"));
    CHECK(isbell.coefficient(1, 2) == 0);
}

TEST_CASE("row and column sums") {
    auto isbell = isbell_matrix<Rational>(4).realized;
    CHECK(isbell.row_sum(4) == 1);
    CHECK(isbell.col_sum(6) == 1);

    CHECK(CoeffMatrix<Rational>::zero().row_sum(1) == 0);

    auto m = mat({{1, 1, "0.4"}, {1, 5, "0.7"}});
    CHECK(m.row_sum(1) == rat("11/10"));

    // Identity-tail rows report the tail 1 plus explicit cross entries.
    auto cross = mat({{5, 2, "1/2"}}, TailMode::identity(3));
    CHECK(cross.row_sum(5) == rat("3/2"));
    CHECK(cross.row_sum(4) == 1);
    CHECK(cross.col_sum(2) == rat("1/2"));
}

TEST_CASE("classification") {
    CHECK(classify(mat({{1, 2, "1"}})) == MatrixClass::PS);

    // The zero-tail realization is substochastic; only the identity-tail
    // lift (blocks continued by 1 x 1 blocks) is doubly stochastic.
    auto isbell = isbell_matrix<Rational>(4);
    CHECK(classify(isbell.realized) == MatrixClass::DSS_strict);
    CHECK(classify(finitary_lift(isbell.realized, isbell.dimension())) == MatrixClass::DS);
    CHECK(classify(mat({{1, 1, "0.5"}, {1, 2, "0.6"}})) == MatrixClass::Other);
    CHECK(classify(CoeffMatrix<Rational>::zero()) == MatrixClass::PS);
    CHECK(classify(CoeffMatrix<Rational>::identity()) == MatrixClass::Permutation);
    CHECK(classify(CoeffMatrix<Rational>::tail_identity(4)) == MatrixClass::PS);
    CHECK(classify(mat({{1, 1, "1/2"}})) == MatrixClass::DSS_strict);
    CHECK(classify(mat({{1, 1, "-1/2"}})) == MatrixClass::Other);

    // A cross entry into an identity tail pushes a row sum above 1.
    CHECK(classify(mat({{5, 2, "1/2"}}, TailMode::identity(3))) == MatrixClass::Other);

    // Doubly stochastic needs every row below the tail covered.
    CHECK(classify(mat({{1, 1, "1/2"}, {1, 2, "1/2"}, {2, 1, "1/2"}, {2, 2, "1/2"}},
                       TailMode::identity(3))) == MatrixClass::DS);
    CHECK(classify(mat({{1, 1, "1/2"}, {1, 2, "1/2"}}, TailMode::identity(3))) ==
          MatrixClass::DSS_strict);

    auto viol = sum_violations(mat({{1, 1, "0.5"}, {1, 2, "0.6"}}));
    REQUIRE(viol.size() == 1);
    CHECK(viol[0].first == "row 1");
    CHECK(viol[0].second == rat("11/10"));
}

TEST_CASE("float-mode classification uses the tolerance") {
    CoeffMatrix<double>::EntryMap m;
    m[{1, 1}] = 0.5 + 1e-12;
    m[{1, 2}] = 0.5;
    m[{2, 1}] = 0.5;
    m[{2, 2}] = 0.5 - 1e-12;
    CHECK(classify(CoeffMatrix<double>(std::move(m), TailMode::identity(3))) ==
          MatrixClass::DS);
}

TEST_CASE("apply") {
    auto swap12 = permutation_matrix<Rational>(pp({{1, 2}, {2, 1}}), TailMode::identity(3));
    CHECK(swap12.apply(FinVector<Rational>::unit(1)) == FinVector<Rational>::unit(2));
    CHECK(swap12.apply(FinVector<Rational>::unit(5)) == FinVector<Rational>::unit(5));

    CHECK(CoeffMatrix<Rational>::zero().apply(vec({{1, "3"}, {2, "4"}})).is_zero());

    auto isbell = isbell_matrix<Rational>(3).realized;
    CHECK(isbell.apply(FinVector<Rational>::unit(2)) == vec({{2, "1/2"}, {3, "1/2"}}));
}

TEST_CASE("adjoint") {
    auto t = permutation_matrix<Rational>(pp({{1, 2}, {2, 1}}), TailMode::identity(3));
    CHECK(adjoint(t) == t);

    CHECK(adjoint(mat({{1, 5, "1"}})) == mat({{5, 1, "1"}}));

    auto cycle = pp({{1, 2}, {2, 3}, {3, 1}});
    auto pi = permutation_matrix<Rational>(cycle, TailMode::identity(4));
    CHECK(adjoint(pi) == permutation_matrix<Rational>(cycle.inverse(), TailMode::identity(4)));
}

TEST_CASE("permutation_matrix") {
    CHECK(permutation_matrix<Rational>(PartialPermutation(), TailMode::zero()) ==
          CoeffMatrix<Rational>::zero());
    CHECK(permutation_matrix<Rational>(PartialPermutation(), TailMode::identity(1)) ==
          CoeffMatrix<Rational>::identity());
    auto t = permutation_matrix<Rational>(pp({{1, 2}, {2, 1}}), TailMode::identity(3));
    CHECK(t.coefficient(2, 1) == 1);
    CHECK(t.coefficient(1, 2) == 1);
    CHECK(t.coefficient(3, 3) == 1);
    CHECK(t.coefficient(1, 1) == 0);
    CHECK_THROWS_AS(permutation_matrix<Rational>(pp({{3, 4}}), TailMode::identity(3)),
                    std::invalid_argument);
}

TEST_CASE("canonical form absorbs tail-shaped entries") {
    auto stored = mat({{1, 1, "1"}}, TailMode::identity(2));
    CHECK(stored == CoeffMatrix<Rational>::identity());
    CHECK(stored.entries().empty());
    CHECK(stored.tail().identity_from == 1);

    // A blocked diagonal is not absorbed.
    auto blocked = mat({{2, 2, "1"}, {2, 3, "1"}}, TailMode::identity(3));
    CHECK(blocked.tail().identity_from == 3);
}

TEST_CASE("compose") {
    auto rho = pp({{1, 2}, {2, 3}, {3, 1}});
    auto pi_rho = permutation_matrix<Rational>(rho, TailMode::identity(4));
    auto pi_inv = permutation_matrix<Rational>(rho.inverse(), TailMode::identity(4));
    CHECK(compose(pi_rho, pi_inv) == CoeffMatrix<Rational>::identity());

    CHECK(compose(CoeffMatrix<Rational>::zero(), pi_rho) == CoeffMatrix<Rational>::zero());
    CHECK(compose(pi_rho, CoeffMatrix<Rational>::zero()) == CoeffMatrix<Rational>::zero());

    auto a = pp({{1, 2}, {2, 1}});
    auto b = pp({{2, 3}, {3, 2}});
    auto product = compose(permutation_matrix<Rational>(a, TailMode::identity(4)),
                           permutation_matrix<Rational>(b, TailMode::identity(4)));
    CHECK(product == permutation_matrix<Rational>(compose_finitary(a, b),
                                                  TailMode::identity(4)));

    // Zero-tail products stay zero-tail.
    auto ps = permutation_matrix<Rational>(pp({{2, 5}}), TailMode::zero());
    auto composed = compose(ps, permutation_matrix<Rational>(pp({{1, 2}}), TailMode::zero()));
    CHECK(composed == permutation_matrix<Rational>(pp({{1, 5}}), TailMode::zero()));
}

TEST_CASE("partial permutation composition semantics") {
    auto a = pp({{1, 2}, {2, 1}});
    auto b = pp({{2, 3}, {3, 2}});
    // As partial maps, (a after b)(3) = a(2) = 1 and nothing else survives.
    CHECK(compose_partial(a, b) == pp({{3, 1}}));
    // As finitary permutations, 1 -> 2, 2 -> 3, 3 -> 1.
    CHECK(compose_finitary(a, b) == pp({{1, 2}, {2, 3}, {3, 1}}));
}

TEST_CASE("homomorphism and unitarity over random finitary permutations") {
    auto rng = suite_rng(7, "test-homomorphism");
    for (int trial = 0; trial < 50; ++trial) {
        Index n = 2 + uniform_below(rng, 6);
        auto rho = random_total_permutation(rng, n);
        auto nu = random_total_permutation(rng, n);
        auto tail = TailMode::identity(n + 1);
        auto pr = permutation_matrix<Rational>(rho, tail);
        auto pn = permutation_matrix<Rational>(nu, tail);
        CHECK(compose(pr, pn) ==
              permutation_matrix<Rational>(compose_finitary(rho, nu), tail));
        CHECK(compose(adjoint(pr), pr) == CoeffMatrix<Rational>::identity());
        CHECK(classify(pr) == MatrixClass::Permutation);
        CHECK(classify(permutation_matrix<Rational>(rho, TailMode::zero())) == MatrixClass::PS);

        // Dropping the fixed points changes the stored map but not the
        // finitary permutation it denotes.
        std::map<Index, Index> moved;
        for (const auto& [k, r] : rho.pairs())
            if (k != r) moved[k] = r;
        CHECK(permutation_matrix<Rational>(PartialPermutation(std::move(moved)), tail) == pr);
    }
}

TEST_CASE("zero-tail matrix product realizes partial-map composition") {
    auto rng = suite_rng(31, "test-ps-compose");
    for (int trial = 0; trial < 60; ++trial) {
        auto a = random_partial_permutation(rng, 10, 5);
        auto b = random_partial_permutation(rng, 10, 5);
        CHECK(compose(permutation_matrix<Rational>(a, TailMode::zero()),
                      permutation_matrix<Rational>(b, TailMode::zero())) ==
              permutation_matrix<Rational>(compose_partial(a, b), TailMode::zero()));
    }
}

TEST_CASE("contraction over random substochastic matrices") {
    auto rng = suite_rng(11, "test-contraction");
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_substochastic_block(rng, 1 + uniform_below(rng, 7)).to_matrix();
        auto cls = classify(a);
        CHECK((cls == MatrixClass::DSS_strict || cls == MatrixClass::PS));
        auto x = random_vector(rng, 12, 5);
        CHECK(a.apply(x).norm_sq() <= x.norm_sq());
    }
}

TEST_CASE("blend preserves DSS and DS") {
    auto rng = suite_rng(13, "test-blend");
    for (int trial = 0; trial < 40; ++trial) {
        Index n = 1 + uniform_below(rng, 5);
        auto u = random_substochastic_block(rng, n).to_matrix();
        auto w = random_substochastic_block(rng, n).to_matrix();
        Rational t(1 + uniform_below(rng, 7), 8);
        auto mixed = blend(t, u, w);
        auto cls = classify(mixed);
        CHECK((cls == MatrixClass::DSS_strict || cls == MatrixClass::PS));

        Index m = 2 + uniform_below(rng, 4);
        auto du = permutation_matrix<Rational>(random_total_permutation(rng, m),
                                               TailMode::identity(m + 1));
        auto dw = permutation_matrix<Rational>(random_total_permutation(rng, m),
                                               TailMode::identity(m + 1));
        auto ds = classify(blend(t, du, dw));
        CHECK((ds == MatrixClass::DS || ds == MatrixClass::Permutation));
    }
    CHECK_THROWS_AS(blend(Rational(1, 2), CoeffMatrix<Rational>::zero(),
                          CoeffMatrix<Rational>::identity()),
                    std::invalid_argument);
}

TEST_CASE("0/1 matrices: contraction characterizes PS on a 3x3 grid") {
    // Brute force over all 512 zero-tail {0,1} patterns on [1,3]^2. The
    // contraction test uses the unit vectors and all pairwise sums, which
    // suffices: a doubled row or column shows up on one of those.
    std::vector<FinVector<Rational>> probes;
    for (Index k = 1; k <= 3; ++k) probes.push_back(FinVector<Rational>::unit(k));
    for (Index i = 1; i <= 3; ++i)
        for (Index j = i + 1; j <= 3; ++j)
            probes.push_back(FinVector<Rational>::unit(i) + FinVector<Rational>::unit(j));

    for (unsigned bits = 0; bits < 512; ++bits) {
        CoeffMatrix<Rational>::EntryMap entries;
        for (unsigned cell = 0; cell < 9; ++cell)
            if (bits & (1u << cell)) entries[{cell / 3 + 1, cell % 3 + 1}] = 1;
        CoeffMatrix<Rational> a(std::move(entries), TailMode::zero());
        bool contraction = true;
        for (const auto& x : probes)
            if (a.apply(x).norm_sq() > x.norm_sq()) contraction = false;
        CHECK(contraction == (classify(a) == MatrixClass::PS));
    }
}

namespace {

// Random finitely describable matrix with either tail and signed entries,
// including cross entries reaching into an identity tail's rows/columns.
CoeffMatrix<Rational> random_mixed_matrix(std::mt19937_64& rng) {
    bool identity = uniform_below(rng, 2) == 0;
    Index start = 1 + uniform_below(rng, 7);
    CoeffMatrix<Rational>::EntryMap entries;
    Index count = uniform_below(rng, 10);
    for (Index e = 0; e < count; ++e) {
        Index m = 1 + uniform_below(rng, 10);
        Index k = 1 + uniform_below(rng, 10);
        if (identity && m >= start && k >= start) {
            if (uniform_below(rng, 2) == 0)
                m = 1 + uniform_below(rng, start - 1 > 0 ? start - 1 : 1);
            else
                k = 1 + uniform_below(rng, start - 1 > 0 ? start - 1 : 1);
            if (m >= start && k >= start) continue;
        }
        long long numerator = static_cast<long long>(uniform_below(rng, 9)) - 4;
        entries[{m, k}] = Rational(numerator, 4);
    }
    return CoeffMatrix<Rational>(std::move(entries),
                                 identity ? TailMode::identity(start) : TailMode::zero());
}

}  // namespace

TEST_CASE("compose, blend, adjoint and apply agree with direct coefficient sums") {
    auto rng = suite_rng(19, "test-window");
    const Index window = 12;
    for (int trial = 0; trial < 120; ++trial) {
        auto u = random_mixed_matrix(rng);
        auto w = random_mixed_matrix(rng);

        // Sums over j <= reach capture every contribution to the window:
        // beyond it both factors are pure tail patterns.
        Index reach = std::max({u.max_explicit_index(), w.max_explicit_index(),
                                u.tail().is_identity() ? u.tail().identity_from : 0,
                                w.tail().is_identity() ? w.tail().identity_from : 0, window}) +
                      1;
        auto uw = compose(u, w);
        for (Index m = 1; m <= window; ++m)
            for (Index k = 1; k <= window; ++k) {
                Rational direct(0);
                for (Index j = 1; j <= reach; ++j)
                    direct += u.coefficient(m, j) * w.coefficient(j, k);
                CHECK(uw.coefficient(m, k) == direct);
            }

        auto ut = adjoint(u);
        for (Index m = 1; m <= window; ++m)
            for (Index k = 1; k <= window; ++k)
                CHECK(ut.coefficient(m, k) == u.coefficient(k, m));

        auto x = random_vector(rng, 10, 4);
        auto ux = u.apply(x);
        for (Index m = 1; m <= window; ++m) {
            Rational direct(0);
            for (Index j = 1; j <= reach; ++j) direct += u.coefficient(m, j) * x.coord(j);
            CHECK(ux.coord(m) == direct);
        }

        if (u.tail().is_identity() == w.tail().is_identity()) {
            Rational t(1 + uniform_below(rng, 7), 8);
            auto mixed = blend(t, u, w);
            for (Index m = 1; m <= window; ++m)
                for (Index k = 1; k <= window; ++k)
                    CHECK(mixed.coefficient(m, k) ==
                          t * u.coefficient(m, k) + (1 - t) * w.coefficient(m, k));
        }
    }
}

TEST_CASE("float-mode contraction within 4 eps") {
    auto rng = suite_rng(29, "test-float-contraction");
    for (int trial = 0; trial < 60; ++trial) {
        Index n = 1 + uniform_below(rng, 7);
        auto exact = random_substochastic_block(rng, n);
        CoeffMatrix<double>::EntryMap entries;
        for (Index i = 1; i <= n; ++i)
            for (Index j = 1; j <= n; ++j)
                if (exact.at(i, j) != 0)
                    entries[{i, j}] = num<Rational>::to_double(exact.at(i, j));
        CoeffMatrix<double> a(std::move(entries), TailMode::zero());
        std::map<Index, double> coords;
        for (Index k = 1; k <= 8; ++k)
            if (uniform_below(rng, 2) == 0)
                coords[k] = (static_cast<double>(uniform_below(rng, 33)) - 16.0) / 8.0;
        FinVector<double> x(std::move(coords));
        double lhs = std::sqrt(a.apply(x).norm_sq());
        double rhs = std::sqrt(x.norm_sq());
        CHECK(lhs <= rhs + 4 * float_tolerance() * (rhs + 1));
    }
}

TEST_CASE("FinVector arithmetic") {
    auto x = vec({{1, "3/5"}, {4, "-4/5"}});
    CHECK(x.norm_sq() == 1);
    CHECK(x.norm() == doctest::Approx(1.0));
    CHECK(x.dot(FinVector<Rational>::unit(4)) == rat("-4/5"));
    CHECK((x - x).is_zero());
    CHECK(x.scaled(rat("5")) == vec({{1, "3"}, {4, "-4"}}));
    CHECK(x.max_support() == 4);
}
