#include "blab/verify.hpp"

#include <algorithm>
#include <set>

#include "blab/exact_linalg.hpp"
#include "blab/truncation.hpp"

namespace blab {

ordered_json SuiteReport::to_json() const {
    ordered_json j;
    j["suite"] = suite;
    j["claim"] = claim;
    j["seed"] = seed;
    j["params"] = params;
    auto arr = ordered_json::array();
    for (const auto& a : assertions)
        arr.push_back({{"name", a.name},
                       {"measured", a.measured},
                       {"bound", a.bound},
                       {"pass", a.pass}});
    j["assertions"] = std::move(arr);
    j["passed"] = passed;
    if (counterexample) j["counterexample"] = *counterexample;
    if (!detail.is_null()) j["detail"] = detail;
    return j;
}

std::string SuiteReport::to_csv() const {
    std::string out = "suite," + suite + "\nseed," + std::to_string(seed) + "\n";
    out += "assertion,measured,bound,pass\n";
    for (const auto& a : assertions)
        out += a.name + "," + a.measured + "," + a.bound + "," + (a.pass ? "true" : "false") +
               "\n";
    out += std::string("passed,") + (passed ? "true" : "false") + "\n";
    return out;
}

std::string SuiteReport::render(RunConfig::Output out) const {
    return out == RunConfig::Output::Json ? to_json().dump(2) + "\n" : to_csv();
}

namespace {

bool finalize(SuiteReport& report) {
    report.passed = !report.assertions.empty();
    for (const auto& a : report.assertions) report.passed = report.passed && a.pass;
    return report.passed;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gap trials

IsbellTrialStats isbell_gap_trials(const IsbellMatrix<Rational>& a, Index block, Index perms,
                                   std::uint64_t trials, std::mt19937_64& rng) {
    const Index dim = a.dimension();
    IsbellTrialStats stats;
    stats.bound = Rational(block - perms * perms, block);
    stats.min_gap_sq = Rational(-1);
    stats.all_meet_bound = true;

    const Index need_clean = block - perms * perms;
    const Index start = isbell_block_start(block);
    const Index end = start + block - 1;

    for (std::uint64_t t = 0; t < trials; ++t) {
        ConvexCombination<Rational> b;
        for (int attempt = 0;; ++attempt) {
            b.terms.clear();
            auto weights = random_convex_weights(rng, perms);
            std::set<PartialPermutation> used;
            for (Index j = 0; j < perms; ++j) {
                PartialPermutation p = random_total_permutation(rng, dim);
                while (!used.insert(p).second) p = random_total_permutation(rng, dim);
                b.terms.push_back({weights[j], std::move(p)});
            }
            Index clean = 0;
            for (Index k = start; k <= end; ++k) {
                bool hit = false;
                for (const auto& [w, perm] : b.terms) {
                    auto r = perm.image(k);
                    if (r && *r >= start && *r <= end) {
                        hit = true;
                        break;
                    }
                }
                if (!hit) ++clean;
            }
            if (clean >= need_clean) break;
            ++stats.resampled;
            if (attempt > 500)
                throw Error("could not draw a combination leaving " +
                            std::to_string(need_clean) + " columns of block " +
                            std::to_string(block) + " untouched");
        }
        auto result = isbell_gap(a, b, block);
        if (stats.min_gap_sq < 0 || result.gap_sq < stats.min_gap_sq)
            stats.min_gap_sq = result.gap_sq;
        if (result.gap_sq < stats.bound) stats.all_meet_bound = false;
        ++stats.trials;
    }
    return stats;
}

// Combination built from p partial permutations, each sending p columns of
// the block to block rows; exactly p^2 columns are touched and nothing acts
// elsewhere, so the gap attains (n - p^2)/n exactly.
static ConvexCombination<Rational> adversarial_combination(Index block, Index perms) {
    const Index start = isbell_block_start(block);
    ConvexCombination<Rational> b;
    for (Index j = 0; j < perms; ++j) {
        std::map<Index, Index> pairs;
        for (Index i = 0; i < perms; ++i) pairs[start + j * perms + i] = start + i;
        b.terms.push_back({Rational(1, perms), PartialPermutation(std::move(pairs))});
    }
    b.validate();
    return b;
}

SuiteReport run_isbell_suite(const RunConfig& cfg, Index blocks, Index perms,
                             std::uint64_t trials) {
    if (blocks > cfg.isbell_max_blocks)
        throw BudgetExceeded("blocks=" + std::to_string(blocks) + " exceeds cap " +
                             std::to_string(cfg.isbell_max_blocks));
    if (trials > cfg.max_trials)
        throw BudgetExceeded("trials exceed cap " + std::to_string(cfg.max_trials));
    if (perms < 1 || perms * perms >= blocks)
        throw PTooLarge("need p^2 < largest block; got p=" + std::to_string(perms) +
                        ", blocks=" + std::to_string(blocks));

    SuiteReport report;
    report.suite = "isbell";
    report.claim =
        "On the block-diagonal doubly stochastic matrix with j x j blocks of 1/j, every "
        "p-term convex combination of permutation matrices stays at squared operator-norm "
        "distance at least (n - p^2)/n, witnessed on the size-n block.";
    report.seed = cfg.seed;
    report.params = {{"blocks", blocks}, {"perms", perms}, {"trials", trials}};

    auto rng = suite_rng(cfg.seed, "isbell");
    auto a = isbell_matrix<Rational>(blocks);
    for (Index n = perms * perms + 1; n <= blocks; ++n) {
        auto stats = isbell_gap_trials(a, n, perms, trials, rng);
        Assertion as;
        as.name = "block n=" + std::to_string(n) + " p=" + std::to_string(perms) + " trials=" +
                  std::to_string(trials);
        as.measured = "min gap_sq " + format_rational(stats.min_gap_sq) +
                      (stats.resampled ? " (resampled " + std::to_string(stats.resampled) + ")"
                                       : "");
        as.bound = ">= " + format_rational(stats.bound);
        as.pass = stats.all_meet_bound;
        if (!as.pass && !report.counterexample)
            report.counterexample = "block " + std::to_string(n) + " gap " +
                                    format_rational(stats.min_gap_sq);
        report.assertions.push_back(std::move(as));

        auto adv = isbell_gap(a, adversarial_combination(n, perms), n);
        Assertion tight;
        tight.name = "block n=" + std::to_string(n) + " adversarial p^2 covered columns";
        tight.measured = "gap_sq " + format_rational(adv.gap_sq);
        tight.bound = "= " + format_rational(stats.bound);
        tight.pass = adv.gap_sq == stats.bound;
        report.assertions.push_back(std::move(tight));
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_topology_suite(const RunConfig& cfg) {
    SuiteReport report;
    report.suite = "topology";
    report.claim =
        "Rank-one matrices with a single 1 at (1, n) converge to zero strongly while their "
        "adjoints keep norm 1 at e_1; block-swap permutation matrices pair to exactly zero "
        "once the swap clears the supports.";
    report.seed = cfg.seed;
    report.params = {{"max_n", 50}};

    // Strong but not strong*: geometric test vector on [1, 20].
    std::map<Index, double> coords;
    for (Index k = 1; k <= 20; ++k) coords[k] = std::exp2(-0.5 * static_cast<double>(k));
    FinVector<double> x(std::move(coords));
    auto [strong, adj] = strong_not_strongstar_sweep(x, 50);

    bool tail_small = true;
    for (const auto& [n, v] : strong.samples)
        if (n > 20 && std::abs(v) >= 1e-3) tail_small = false;
    report.assertions.push_back({"strong samples vanish beyond the support",
                                 tail_small ? "all < 1e-3 for n > 20" : "tail sample >= 1e-3",
                                 "< 1e-3", tail_small});
    report.assertions.push_back(
        {"strong sweep verdict", to_string(strong.verdict), "ConvergesToZero",
         strong.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0}});
    bool adj_ones = true;
    for (const auto& [n, v] : adj.samples)
        if (v != 1.0) adj_ones = false;
    report.assertions.push_back(
        {"adjoint samples stay at 1", adj_ones ? "all equal 1" : "sample differs from 1",
         "= 1", adj_ones});
    report.assertions.push_back({"adjoint sweep verdict", to_string(adj.verdict),
                                 "BoundedAway(1)",
                                 adj.verdict == Verdict{VerdictKind::BoundedAway, 1.0}});

    // Weak null sweeps with exact arithmetic: zero beyond the support.
    auto check_weak = [&](const FinVector<Rational>& xv, const FinVector<Rational>& yv,
                          Index max_n, const std::string& label) {
        auto sweep = weak_null_sweep(xv, yv, max_n);
        Index support = std::max(xv.max_support(), yv.max_support());
        bool zeros = true;
        for (const auto& [n, v] : sweep.samples)
            if (n >= support && v != 0) zeros = false;
        report.assertions.push_back(
            {label + ": exact zeros from n=" + std::to_string(support),
             zeros ? "all zero" : "nonzero pairing", "= 0", zeros});
        bool verdict_ok = sweep.verdict == Verdict{VerdictKind::ConvergesToZero, 0.0};
        report.assertions.push_back({label + ": verdict", to_string(sweep.verdict),
                                     "ConvergesToZero", verdict_ok});
    };
    check_weak(FinVector<Rational>::unit(1), FinVector<Rational>::unit(1), 10, "pairing e1,e1");
    check_weak(FinVector<Rational>::unit(1), FinVector<Rational>::unit(2), 10, "pairing e1,e2");
    std::map<Index, Rational> geo;
    for (Index k = 1; k <= 12; ++k) geo[k] = Rational(1, 1 << k);
    FinVector<Rational> g(std::move(geo));
    check_weak(g, g, 24, "pairing geometric,geometric");

    report.detail = {{"sweeps", ordered_json::array({report_to_json(strong.to_report()),
                                                     report_to_json(adj.to_report()),
                                                     report_to_json(weak_null_sweep(g, g, 24)
                                                                        .to_report())})}};

    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_exposed_suite(const RunConfig& cfg, Index max_n) {
    if (max_n > cfg.exposed_suite_max_n)
        throw BudgetExceeded("exhaustive exposed-point sweep capped at n <= " +
                             std::to_string(cfg.exposed_suite_max_n));
    SuiteReport report;
    report.suite = "exposed";
    report.claim =
        "Every partial permutation matrix u on [1, n] uniquely maximizes its exposing "
        "functional f(v) = <v x_I, u x_I> - <v x_{I^c}, x_{[1,n]}> over all partial "
        "permutations, where x_J carries weights 2^{-j/2} on J and I is u's column support.";
    report.seed = cfg.seed;
    report.params = {{"max_n", max_n}};

    for (Index n = 1; n <= max_n; ++n) {
        auto all = enumerate_partial_permutations(n);
        std::uint64_t verified = 0;
        std::optional<std::string> bad;
        for (const auto& u : all) {
            if (exposed_verify(u, n))
                ++verified;
            else if (!bad)
                bad = ordered_json(permutation_to_json(u)).dump();
        }
        Assertion as;
        as.name = "n=" + std::to_string(n) + " unique maximizers";
        as.measured = std::to_string(verified) + " of " + std::to_string(all.size());
        as.bound = "= " + std::to_string(all.size());
        as.pass = verified == all.size();
        if (bad && !report.counterexample) report.counterexample = *bad;
        report.assertions.push_back(std::move(as));
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_commutant_suite(const RunConfig& cfg, Index max_m) {
    if (max_m > cfg.commutant_max_m)
        throw BudgetExceeded("commutant suite capped at m <= " +
                             std::to_string(cfg.commutant_max_m));
    SuiteReport report;
    report.suite = "commutant";
    report.claim =
        "The commutant of the standard permutation representation of S_m inside the m x m "
        "matrices is spanned by the identity and the all-ones matrix: dimension 1 at m = 1 "
        "and 2 for every m >= 2.";
    report.seed = cfg.seed;
    report.params = {{"max_m", max_m}};

    for (Index m = 1; m <= max_m; ++m) {
        Index dim = commutant_dimension(m);
        Index expected = m == 1 ? 1 : 2;
        report.assertions.push_back({"m=" + std::to_string(m), std::to_string(dim),
                                     "= " + std::to_string(expected), dim == expected});
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_span_suite(const RunConfig& cfg, Index max_n) {
    if (max_n > cfg.span_max_n)
        throw BudgetExceeded("span suite capped at n <= " + std::to_string(cfg.span_max_n));
    SuiteReport report;
    report.suite = "span";
    report.claim =
        "The n x n permutation matrices span a space of dimension (n-1)^2 + 1, while corner "
        "truncations of finitary permutations of [1, 2n] span all of R^{n x n}.";
    report.seed = cfg.seed;
    report.params = {{"max_n", max_n}};

    for (Index n = 1; n <= max_n; ++n) {
        Index lift = span_dimension(n, SpanVariant::TailLift);
        Index expected_lift = (n - 1) * (n - 1) + 1;
        report.assertions.push_back({"n=" + std::to_string(n) + " tail-lift span",
                                     std::to_string(lift),
                                     "= " + std::to_string(expected_lift),
                                     lift == expected_lift});
        Index corner_dim = span_dimension(n, SpanVariant::Corner);
        report.assertions.push_back({"n=" + std::to_string(n) + " corner span",
                                     std::to_string(corner_dim),
                                     "= " + std::to_string(n * n), corner_dim == n * n});
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_contraction_suite(const RunConfig& cfg, std::uint64_t trials) {
    if (trials > cfg.max_trials)
        throw BudgetExceeded("trials exceed cap " + std::to_string(cfg.max_trials));
    SuiteReport report;
    report.suite = "contraction";
    report.claim =
        "Every matrix with nonnegative entries and all row and column sums at most 1 is a "
        "contraction in the 2-norm: ||a x|| <= ||x|| exactly, in rational arithmetic.";
    report.seed = cfg.seed;
    report.params = {{"trials", trials}};

    auto rng = suite_rng(cfg.seed, "contraction");
    const char* kind_names[] = {"substochastic block", "partial permutation",
                                "finitary permutation", "finitary lift"};
    std::uint64_t checked[4] = {0, 0, 0, 0};
    std::uint64_t held[4] = {0, 0, 0, 0};
    Rational max_ratio(0);
    std::optional<std::string> bad;

    for (std::uint64_t t = 0; t < trials; ++t) {
        int kind = static_cast<int>(t % 4);
        CoeffMatrix<Rational> a;
        switch (kind) {
            case 0: a = random_substochastic_block(rng, 1 + uniform_below(rng, 8)).to_matrix(); break;
            case 1:
                a = permutation_matrix<Rational>(random_partial_permutation(rng, 12, 6),
                                                 TailMode::zero());
                break;
            case 2: {
                Index m = 1 + uniform_below(rng, 8);
                a = permutation_matrix<Rational>(random_total_permutation(rng, m),
                                                 TailMode::identity(m + 1));
                break;
            }
            case 3: {
                Index n = 1 + uniform_below(rng, 6);
                a = finitary_lift(random_substochastic_block(rng, n).to_matrix(), n);
                break;
            }
        }
        FinVector<Rational> x = random_vector(rng, 16, 6);
        Rational lhs = a.apply(x).norm_sq();
        Rational rhs = x.norm_sq();
        ++checked[kind];
        bool ok = lhs <= rhs;
        if (ok) ++held[kind];
        if (rhs != 0 && lhs / rhs > max_ratio) max_ratio = lhs / rhs;
        if (!ok && !bad)
            bad = "trial " + std::to_string(t) + ": ||ax||^2 = " + format_rational(lhs) +
                  " > ||x||^2 = " + format_rational(rhs);
    }

    for (int k = 0; k < 4; ++k)
        report.assertions.push_back(
            {std::string(kind_names[k]) + " pairs", std::to_string(held[k]) + " of " +
                                                        std::to_string(checked[k]) + " held",
             "all", held[k] == checked[k]});
    report.assertions.push_back({"max ||ax||^2 / ||x||^2", format_rational(max_ratio), "<= 1",
                                 max_ratio <= 1});
    report.counterexample = bad;
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

std::vector<FiniteBlock<Rational>> enumerate_substochastic_vertices(Index n) {
    if (n > 3)
        throw BudgetExceeded("vertex enumeration solves C(n^2+2n, n^2) systems; capped at "
                             "n <= 3");
    const std::size_t dim = static_cast<std::size_t>(n) * n;

    // Constraint rows a.x <= b: nonnegativity (-x_ij <= 0), then row sums
    // <= 1, then column sums <= 1.
    std::vector<std::vector<Rational>> lhs;
    std::vector<Rational> rhs;
    for (std::size_t v = 0; v < dim; ++v) {
        std::vector<Rational> row(dim, Rational(0));
        row[v] = -1;
        lhs.push_back(std::move(row));
        rhs.push_back(Rational(0));
    }
    for (Index i = 0; i < n; ++i) {
        std::vector<Rational> row(dim, Rational(0));
        for (Index j = 0; j < n; ++j) row[i * n + j] = 1;
        lhs.push_back(std::move(row));
        rhs.push_back(Rational(1));
    }
    for (Index j = 0; j < n; ++j) {
        std::vector<Rational> row(dim, Rational(0));
        for (Index i = 0; i < n; ++i) row[i * n + j] = 1;
        lhs.push_back(std::move(row));
        rhs.push_back(Rational(1));
    }

    const std::size_t constraints = lhs.size();
    std::vector<char> mask(constraints, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(dim), 1);
    std::sort(mask.begin(), mask.end(), std::greater<char>());

    std::set<std::vector<Rational>> vertices;
    do {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t c = 0; c < constraints; ++c)
            if (mask[c]) {
                a.push_back(lhs[c]);
                b.push_back(rhs[c]);
            }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x) continue;
        bool feasible = true;
        for (std::size_t c = 0; c < constraints && feasible; ++c) {
            Rational dot(0);
            for (std::size_t v = 0; v < dim; ++v) dot += lhs[c][v] * (*x)[v];
            if (dot > rhs[c]) feasible = false;
        }
        if (feasible) vertices.insert(*x);
    } while (std::prev_permutation(mask.begin(), mask.end()));

    std::vector<FiniteBlock<Rational>> out;
    for (const auto& x : vertices) {
        FiniteBlock<Rational> b(n);
        for (Index i = 1; i <= n; ++i)
            for (Index j = 1; j <= n; ++j) b.set(i, j, x[(i - 1) * n + (j - 1)]);
        out.push_back(std::move(b));
    }
    return out;
}

SuiteReport run_extremality_suite(const RunConfig& cfg, Index max_n) {
    if (max_n > cfg.extremality_max_n)
        throw BudgetExceeded("extremality suite capped at n <= " +
                             std::to_string(cfg.extremality_max_n));
    SuiteReport report;
    report.suite = "extremality";
    report.claim =
        "The vertices of the polytope of n x n doubly substochastic matrices are exactly "
        "the partial permutation matrices, and each is detected by the 0/1-entry test.";
    report.seed = cfg.seed;
    report.params = {{"max_n", max_n}};

    // Sum over k of C(n,k)^2 k!.
    auto expected_count = [](Index n) {
        auto binom = [](Index a, Index b) {
            std::uint64_t r = 1;
            for (Index i = 1; i <= b; ++i) r = r * (a - i + 1) / i;
            return r;
        };
        std::uint64_t fact = 1, total = 0;
        for (Index k = 0; k <= n; ++k) {
            if (k > 0) fact *= k;
            total += binom(n, k) * binom(n, k) * fact;
        }
        return total;
    };

    for (Index n = 1; n <= max_n; ++n) {
        auto vertices = enumerate_substochastic_vertices(n);

        std::set<std::vector<Rational>> vertex_set, pp_set;
        auto flatten = [n](const FiniteBlock<Rational>& b) {
            std::vector<Rational> v;
            for (Index i = 1; i <= n; ++i)
                for (Index j = 1; j <= n; ++j) v.push_back(b.at(i, j));
            return v;
        };
        for (const auto& v : vertices) vertex_set.insert(flatten(v));
        for (const auto& p : enumerate_partial_permutations(n))
            pp_set.insert(flatten(reconstruct(ConvexCombination<Rational>{{{Rational(1), p}}}, n)));

        report.assertions.push_back({"n=" + std::to_string(n) + " vertex count",
                                     std::to_string(vertices.size()),
                                     "= " + std::to_string(expected_count(n)),
                                     vertices.size() == expected_count(n)});
        report.assertions.push_back({"n=" + std::to_string(n) +
                                         " vertices equal partial permutation matrices",
                                     vertex_set == pp_set ? "sets match" : "sets differ",
                                     "equal", vertex_set == pp_set});

        bool extreme_ok = true;
        bool single_term_ok = true;
        for (const auto& v : vertices) {
            if (!is_extreme(v)) extreme_ok = false;
            if (mirsky_decompose(v).terms.size() != 1) single_term_ok = false;
        }
        report.assertions.push_back({"n=" + std::to_string(n) + " vertices pass is_extreme",
                                     extreme_ok ? "all" : "failure", "all", extreme_ok});
        report.assertions.push_back(
            {"n=" + std::to_string(n) + " vertices decompose to a single term",
             single_term_ok ? "all" : "failure", "all", single_term_ok});

        FiniteBlock<Rational> interior(n);
        for (Index i = 1; i <= n; ++i)
            for (Index j = 1; j <= n; ++j) interior.set(i, j, Rational(1, n + 1));
        bool interior_not_extreme =
            !is_extreme(interior) && mirsky_decompose(interior).terms.size() > 1;
        report.assertions.push_back({"n=" + std::to_string(n) + " interior point is not extreme",
                                     interior_not_extreme ? "rejected" : "accepted", "rejected",
                                     interior_not_extreme});
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------

SuiteReport run_suite(const std::string& name, const RunConfig& cfg, const SuiteParams& p) {
    if (name == "isbell")
        return run_isbell_suite(cfg, p.blocks.value_or(10), p.perms.value_or(2),
                                p.trials.value_or(100));
    if (name == "topology") return run_topology_suite(cfg);
    if (name == "exposed") return run_exposed_suite(cfg, p.max_n.value_or(4));
    if (name == "commutant") return run_commutant_suite(cfg, p.max_m.value_or(8));
    if (name == "span") return run_span_suite(cfg, p.max_n.value_or(6));
    if (name == "contraction") return run_contraction_suite(cfg, p.trials.value_or(1000));
    if (name == "extremality") return run_extremality_suite(cfg, p.max_n.value_or(3));
    throw ParseError("unknown suite '" + name + "'");
}

std::vector<std::string> suite_names() {
    return {"isbell", "topology", "exposed", "commutant", "span", "contraction", "extremality"};
}

}  // namespace blab
