#pragma once

// Randomized and exhaustive verification suites behind `blab verify`.
// Every suite draws from a seeded stream scoped by suite name, so reports
// are byte-identical for a fixed seed and stable against new suites.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "blab/json_io.hpp"
#include "blab/rng.hpp"
#include "blab/topology_lab.hpp"

namespace blab {

struct RunConfig {
    bool exact = true;
    double eps_tol = 1e-9;
    std::uint64_t seed = 0;
    enum class Output { Json, Csv } output = Output::Json;

    // Budget caps per command.
    Index isbell_max_blocks = 40;
    std::uint64_t max_trials = 1000000;
    Index exposed_suite_max_n = 4;   // exhaustive over all partial permutations
    Index commutant_max_m = 8;
    Index span_max_n = 6;
    Index extremality_max_n = 3;
};

struct Assertion {
    std::string name;
    std::string measured;
    std::string bound;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::string claim;
    std::uint64_t seed = 0;
    ordered_json params;
    std::vector<Assertion> assertions;
    bool passed = false;
    std::optional<std::string> counterexample;
    ordered_json detail;  // suite-specific payload (e.g. seminorm sweeps)

    ordered_json to_json() const;
    std::string to_csv() const;
    std::string render(RunConfig::Output out) const;
};

/// Statistics of seeded random gap trials on one block.
struct IsbellTrialStats {
    Rational min_gap_sq;
    Rational bound;          // (n - p^2) / n
    std::uint64_t trials = 0;
    std::uint64_t resampled = 0;  // draws whose clean-column count fell short
    bool all_meet_bound = false;
};

/// Runs `trials` random p-term combinations against block n of a. Draws are
/// resampled until at least n - p^2 block columns are untouched, matching
/// the witness construction's premise; resamples are counted.
IsbellTrialStats isbell_gap_trials(const IsbellMatrix<Rational>& a, Index block, Index perms,
                                   std::uint64_t trials, std::mt19937_64& rng);

/// Exact enumeration of the vertices of the doubly substochastic polytope
/// in [0,1]^{n x n}: all basic feasible points of {x >= 0, row sums <= 1,
/// column sums <= 1}. Budget-limited to n <= 3.
std::vector<FiniteBlock<Rational>> enumerate_substochastic_vertices(Index n);

SuiteReport run_isbell_suite(const RunConfig& cfg, Index blocks, Index perms,
                             std::uint64_t trials);
SuiteReport run_topology_suite(const RunConfig& cfg);
SuiteReport run_exposed_suite(const RunConfig& cfg, Index max_n);
SuiteReport run_commutant_suite(const RunConfig& cfg, Index max_m);
SuiteReport run_span_suite(const RunConfig& cfg, Index max_n);
SuiteReport run_contraction_suite(const RunConfig& cfg, std::uint64_t trials);
SuiteReport run_extremality_suite(const RunConfig& cfg, Index max_n);

struct SuiteParams {
    std::optional<Index> blocks;
    std::optional<Index> perms;
    std::optional<std::uint64_t> trials;
    std::optional<Index> max_n;
    std::optional<Index> max_m;
};

/// Dispatches by suite name; throws ParseError for unknown names and
/// BudgetExceeded when params exceed the configured caps.
SuiteReport run_suite(const std::string& name, const RunConfig& cfg, const SuiteParams& params);

std::vector<std::string> suite_names();

}  // namespace blab
