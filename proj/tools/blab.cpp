// blab: classify finitely describable doubly (sub)stochastic matrices,
// decompose finite blocks into convex combinations of (partial) permutation
// matrices, and run the verification suites.
//
// Exit codes: 0 ok, 1 failed assertion or inconclusive verdict, 2 parse or
// parameter error, 3 I/O error, 4 stochasticity precondition violated,
// 5 budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "blab/json_io.hpp"
#include "blab/verify.hpp"

namespace {

using namespace blab;

ordered_json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid json in '") + path + "': " + e.what());
    }
}

template <class T>
int do_classify(const std::string& path) {
    CoeffMatrix<T> m = matrix_from_json<T>(load_json(path));
    MatrixClass cls = classify(m);
    ordered_json out{{"class", to_string(cls)}};
    if (cls == MatrixClass::Other) {
        auto arr = ordered_json::array();
        for (const auto& [where, value] : sum_violations(m))
            arr.push_back({{"where", where}, {"value", format_scalar<T>(value)}});
        out["violations"] = std::move(arr);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

template <class T>
int do_decompose(const std::string& path, const std::string& mode) {
    FiniteBlock<T> block = block_from_json<T>(load_json(path));
    ConvexCombination<T> comb =
        mode == "bvn" ? bvn_decompose(block) : mirsky_decompose(block);

    FiniteBlock<T> recon = reconstruct(comb, block.size());
    T residual(0);
    for (Index i = 1; i <= block.size(); ++i)
        for (Index j = 1; j <= block.size(); ++j) {
            T d = recon.at(i, j) - block.at(i, j);
            if (d < T(0)) d = -d;
            residual = std::max(residual, d);
        }
    bool round_trip = num<T>::exact ? residual == T(0) : num<T>::is_zero(residual);

    ordered_json out{{"mode", mode},
                     {"n", block.size()},
                     {"terms", combination_to_json(comb)},
                     {"residual", format_scalar<T>(residual)},
                     {"round_trip", round_trip}};
    std::cout << out.dump(2) << "\n";
    if (!round_trip) {
        std::cerr << "round trip residual " << format_scalar<T>(residual) << "\n";
        return 1;
    }
    return 0;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BLAB_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blab: a lab for doubly (sub)stochastic matrices over N x N"};
    app.require_subcommand(1);

    std::string in_path, mode = "bvn", suite, out_format = "json";
    bool use_float = false;
    double eps = 1e-9;
    std::uint64_t seed = default_seed(), trials = 0;
    Index blocks = 0, perms = 0, max_n = 0, max_m = 0;

    auto* cls = app.add_subcommand("classify", "classify a matrix json file");
    cls->add_option("file", in_path, "matrix json")->required();
    cls->add_flag("--float", use_float, "float mode with tolerance --eps");
    cls->add_option("--eps", eps, "float comparison tolerance");

    auto* dec = app.add_subcommand("decompose",
                                   "decompose a finite block into permutation matrices");
    dec->add_option("file", in_path, "block json")->required();
    dec->add_option("--mode", mode, "bvn | mirsky")
        ->check(CLI::IsMember({"bvn", "mirsky"}))
        ->required();
    bool exact_flag = false;
    dec->add_flag("--exact", exact_flag, "exact rational arithmetic (default)");
    dec->add_flag("--float", use_float, "float arithmetic with tolerance --eps");
    dec->add_option("--eps", eps, "float comparison tolerance");

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("suite", suite, "isbell | topology | exposed | commutant | span | "
                                    "contraction | extremality")
        ->required();
    ver->add_option("--blocks", blocks, "number of diagonal blocks (isbell)");
    ver->add_option("--perms", perms, "terms per combination (isbell)");
    ver->add_option("--trials", trials, "randomized trials");
    ver->add_option("--max-n", max_n, "largest n (exposed, span, extremality)");
    ver->add_option("--max-m", max_m, "largest m (commutant)");
    ver->add_option("--seed", seed, "seed (default: BLAB_SEED env or 0)");
    ver->add_option("--out", out_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    ver->add_option("--eps", eps, "float comparison tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!(eps > 0)) {
            std::cerr << "parse error: --eps must be positive\n";
            return 2;
        }
        blab::set_float_tolerance(eps);
        if (cls->parsed())
            return use_float ? do_classify<double>(in_path) : do_classify<Rational>(in_path);
        if (dec->parsed())
            return use_float ? do_decompose<double>(in_path, mode)
                             : do_decompose<Rational>(in_path, mode);

        RunConfig cfg;
        cfg.exact = !use_float;
        cfg.eps_tol = eps;
        cfg.seed = seed;
        cfg.output =
            out_format == "csv" ? RunConfig::Output::Csv : RunConfig::Output::Json;
        SuiteParams params;
        if (ver->count("--blocks")) params.blocks = blocks;
        if (ver->count("--perms")) params.perms = perms;
        if (ver->count("--trials")) params.trials = trials;
        if (ver->count("--max-n")) params.max_n = max_n;
        if (ver->count("--max-m")) params.max_m = max_m;
        SuiteReport report = run_suite(suite, cfg, params);
        std::cout << report.render(cfg.output);
        return report.passed ? 0 : 1;
    } catch (const blab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const blab::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const blab::NotDoublyStochastic& e) {
        std::cerr << "not doubly stochastic: " << e.what() << "\n";
        return 4;
    } catch (const blab::NotSubstochastic& e) {
        std::cerr << "not substochastic: " << e.what() << "\n";
        return 4;
    } catch (const blab::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 5;
    } catch (const blab::PTooLarge& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
