#include "blab/topology_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blab/exact_linalg.hpp"

namespace blab {

std::string to_string(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::ConvergesToZero: return "ConvergesToZero";
        case VerdictKind::BoundedAway: return "BoundedAway(" + std::to_string(v.bound) + ")";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Verdict decide_verdict(const std::vector<double>& values, double eps,
                       std::optional<double> claimed_bound) {
    if (values.empty()) return {VerdictKind::Inconclusive, 0.0};
    std::size_t tail = (values.size() + 3) / 4;
    bool tail_zero = true;
    for (std::size_t i = values.size() - tail; i < values.size(); ++i)
        if (std::abs(values[i]) >= eps) tail_zero = false;
    if (tail_zero) return {VerdictKind::ConvergesToZero, 0.0};
    if (claimed_bound) {
        bool away = true;
        for (double v : values)
            if (v < *claimed_bound - eps) away = false;
        if (away) return {VerdictKind::BoundedAway, *claimed_bound};
    }
    return {VerdictKind::Inconclusive, 0.0};
}

PartialPermutation shift_permutation(Index n) {
    if (n < 1) throw std::invalid_argument("shift index must be >= 1");
    std::map<Index, Index> pairs;
    for (Index k = 1; k <= n; ++k) {
        pairs[k] = k + n;
        pairs[k + n] = k;
    }
    return PartialPermutation(std::move(pairs));
}

namespace {

// x_J with coordinates 2^{-j/2}; weights decay so distinct partial
// permutations of a small window produce well-separated functional values.
double coord_weight(Index j) { return std::exp2(-0.5 * static_cast<double>(j)); }

FinVector<double> power_vector(const std::vector<Index>& support) {
    std::map<Index, double> coords;
    for (Index j : support) coords[j] = coord_weight(j);
    return FinVector<double>(std::move(coords));
}

FinVector<double> apply_pp(const PartialPermutation& p, const FinVector<double>& x) {
    std::map<Index, double> out;
    for (const auto& [k, r] : p.pairs()) {
        double xk = x.coord(k);
        if (xk != 0.0) out[r] += xk;
    }
    return FinVector<double>(std::move(out));
}

void enumerate_rec(Index n, Index col, std::vector<char>& row_used,
                   std::map<Index, Index>& current, std::vector<PartialPermutation>& out) {
    if (col > n) {
        out.push_back(PartialPermutation(current));
        return;
    }
    enumerate_rec(n, col + 1, row_used, current, out);  // column unmapped first
    for (Index r = 1; r <= n; ++r) {
        if (row_used[r]) continue;
        row_used[r] = 1;
        current[col] = r;
        enumerate_rec(n, col + 1, row_used, current, out);
        current.erase(col);
        row_used[r] = 0;
    }
}

}  // namespace

double exposed_functional(const PartialPermutation& u, const PartialPermutation& v, Index n) {
    if (!u.within(n) || !v.within(n))
        throw std::invalid_argument("permutations must act within [1," + std::to_string(n) +
                                    "]");
    std::vector<Index> domain, domain_complement, all;
    std::vector<char> in_domain(n + 1, 0);
    for (const auto& [k, r] : u.pairs()) in_domain[k] = 1;
    for (Index j = 1; j <= n; ++j) {
        all.push_back(j);
        if (in_domain[j])
            domain.push_back(j);
        else
            domain_complement.push_back(j);
    }
    FinVector<double> x_i = power_vector(domain);
    FinVector<double> x_ic = power_vector(domain_complement);
    FinVector<double> x_all = power_vector(all);
    FinVector<double> ux_i = apply_pp(u, x_i);
    return apply_pp(v, x_i).dot(ux_i) - apply_pp(v, x_ic).dot(x_all);
}

bool exposed_verify(const PartialPermutation& u, Index n) {
    if (n > 6)
        throw BudgetExceeded("exposed-point check enumerates all partial permutations; n=" +
                             std::to_string(n) + " exceeds the n <= 6 budget");
    if (!u.within(n))
        throw std::invalid_argument("permutation must act within [1," + std::to_string(n) + "]");
    const double fu = exposed_functional(u, u, n);
    for (const auto& v : enumerate_partial_permutations(n)) {
        if (v == u) continue;
        if (exposed_functional(u, v, n) >= fu) return false;
    }
    return true;
}

std::vector<PartialPermutation> enumerate_partial_permutations(Index n) {
    std::vector<PartialPermutation> out;
    std::vector<char> row_used(n + 1, 0);
    std::map<Index, Index> current;
    enumerate_rec(n, 1, row_used, current, out);
    return out;
}

std::vector<PartialPermutation> enumerate_total_permutations(Index n) {
    std::vector<Index> image(n);
    std::iota(image.begin(), image.end(), 1);
    std::vector<PartialPermutation> out;
    do {
        std::map<Index, Index> pairs;
        for (Index k = 1; k <= n; ++k) pairs[k] = image[k - 1];
        out.push_back(PartialPermutation(std::move(pairs)));
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
}

Index commutant_dimension(Index m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (m > 8)
        throw BudgetExceeded("commutant system has m^2 unknowns; m=" + std::to_string(m) +
                             " exceeds the m <= 8 budget");

    // Generators of S_m: the transposition (1 2) and the full cycle (1..m).
    std::vector<std::vector<Index>> generators;
    if (m >= 2) {
        std::vector<Index> swap_gen(m + 1), cycle(m + 1);
        for (Index i = 1; i <= m; ++i) swap_gen[i] = i;
        swap_gen[1] = 2;
        swap_gen[2] = 1;
        for (Index i = 1; i <= m; ++i) cycle[i] = i % m + 1;
        generators.push_back(swap_gen);
        generators.push_back(cycle);
    }

    // X P = P X reads X_{i, sigma(j)} = X_{sigma^{-1}(i), j}; each (i, j)
    // yields one row of the constraint system over the m^2 unknowns X_{ij}.
    const std::size_t dim = static_cast<std::size_t>(m) * m;
    auto var = [m](Index i, Index j) { return static_cast<std::size_t>((i - 1) * m + (j - 1)); };
    RationalRowBasis basis(dim);
    for (const auto& sigma : generators) {
        std::vector<Index> sigma_inv(m + 1);
        for (Index i = 1; i <= m; ++i) sigma_inv[sigma[i]] = i;
        for (Index i = 1; i <= m; ++i)
            for (Index j = 1; j <= m; ++j) {
                std::vector<Rational> row(dim, Rational(0));
                row[var(i, sigma[j])] += 1;
                row[var(sigma_inv[i], j)] -= 1;
                basis.insert(std::move(row));
            }
    }
    return static_cast<Index>(dim - basis.rank());
}

Index span_dimension(Index n, SpanVariant variant) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (n > 6)
        throw BudgetExceeded("span enumeration for n=" + std::to_string(n) +
                             " exceeds the n <= 6 budget");
    const std::size_t dim = static_cast<std::size_t>(n) * n;
    auto vectorize = [&](const PartialPermutation& p) {
        std::vector<Rational> v(dim, Rational(0));
        for (const auto& [k, r] : p.pairs()) v[(r - 1) * n + (k - 1)] = 1;
        return v;
    };
    RationalRowBasis basis(dim);
    const auto perms = variant == SpanVariant::TailLift ? enumerate_total_permutations(n)
                                                        : enumerate_partial_permutations(n);
    for (const auto& p : perms) {
        basis.insert(vectorize(p));
        if (basis.full()) break;
    }
    return static_cast<Index>(basis.rank());
}

}  // namespace blab
