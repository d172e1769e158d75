#pragma once

// JSON (de)serialization for the wire formats:
//   matrix  {"tail": "zero" | {"identity_from": s}, "entries": [[m,k,value],...]}
//   vector  {"coords": [[k, value], ...]}
//   block   dense rows [[...],...] or {"rows": [[...],...]} or a zero-tail
//           sparse matrix object (optionally with "n")
//   combination  [{"weight": w, "permutation": [[k, r], ...]}, ...]
// Values are numbers or "p/q" strings; exact mode emits strings.

#include <string>

#include "json.hpp"

#include "blab/decomposition.hpp"
#include "blab/matrices.hpp"
#include "blab/topology_lab.hpp"

namespace blab {

using ordered_json = nlohmann::ordered_json;

namespace detail {

template <class T>
T scalar_from_json(const ordered_json& j);

template <>
inline Rational scalar_from_json<Rational>(const ordered_json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return Rational(j.get<double>());
    throw ParseError("expected a number or \"p/q\" string, got " + j.dump());
}

template <>
inline double scalar_from_json<double>(const ordered_json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>()).convert_to<double>();
    if (j.is_number()) return j.get<double>();
    throw ParseError("expected a number or \"p/q\" string, got " + j.dump());
}

template <class T>
ordered_json scalar_to_json(const T& v);

template <>
inline ordered_json scalar_to_json<Rational>(const Rational& v) {
    return format_rational(v);
}

template <>
inline ordered_json scalar_to_json<double>(const double& v) {
    return v;
}

}  // namespace detail

template <class T>
CoeffMatrix<T> matrix_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("tail") || !j.contains("entries"))
        throw ParseError("matrix json needs \"tail\" and \"entries\"");
    TailMode tail = TailMode::zero();
    const auto& jt = j.at("tail");
    if (jt.is_string() && jt.get<std::string>() == "zero")
        tail = TailMode::zero();
    else if (jt.is_object() && jt.contains("identity_from"))
        tail = TailMode::identity(jt.at("identity_from").get<Index>());
    else
        throw ParseError("tail must be \"zero\" or {\"identity_from\": s}");
    typename CoeffMatrix<T>::EntryMap entries;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw ParseError("entry must be [m, k, value]");
        entries[{e.at(0).get<Index>(), e.at(1).get<Index>()}] =
            detail::scalar_from_json<T>(e.at(2));
    }
    try {
        return CoeffMatrix<T>(std::move(entries), tail);
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("invalid matrix: ") + err.what());
    }
}

template <class T>
ordered_json matrix_to_json(const CoeffMatrix<T>& u) {
    ordered_json j;
    j["tail"] = u.tail().is_identity()
                    ? ordered_json{{"identity_from", u.tail().identity_from}}
                    : ordered_json("zero");
    auto entries = ordered_json::array();
    for (const auto& [pos, v] : u.entries())
        entries.push_back({pos.first, pos.second, detail::scalar_to_json<T>(v)});
    j["entries"] = std::move(entries);
    return j;
}

template <class T>
FinVector<T> vector_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("coords")) throw ParseError("vector json needs \"coords\"");
    std::map<Index, T> coords;
    for (const auto& c : j.at("coords")) {
        if (!c.is_array() || c.size() != 2) throw ParseError("coordinate must be [k, value]");
        coords[c.at(0).get<Index>()] = detail::scalar_from_json<T>(c.at(1));
    }
    try {
        return FinVector<T>(std::move(coords));
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("invalid vector: ") + err.what());
    }
}

template <class T>
ordered_json vector_to_json(const FinVector<T>& x) {
    ordered_json coords = ordered_json::array();
    for (const auto& [k, v] : x.coords()) coords.push_back({k, detail::scalar_to_json<T>(v)});
    return ordered_json{{"coords", std::move(coords)}};
}

template <class T>
FiniteBlock<T> block_from_json(const ordered_json& j) {
    const ordered_json* rows = nullptr;
    if (j.is_array())
        rows = &j;
    else if (j.is_object() && j.contains("rows"))
        rows = &j.at("rows");
    if (rows) {
        std::vector<std::vector<T>> data;
        for (const auto& row : *rows) {
            std::vector<T> r;
            for (const auto& v : row) r.push_back(detail::scalar_from_json<T>(v));
            data.push_back(std::move(r));
        }
        if (data.empty()) throw ParseError("block needs at least one row");
        try {
            return FiniteBlock<T>::from_rows(data);
        } catch (const std::invalid_argument& err) {
            throw ParseError(std::string("invalid block: ") + err.what());
        }
    }
    if (j.is_object() && j.contains("entries")) {
        CoeffMatrix<T> m = matrix_from_json<T>(j);
        if (m.tail().is_identity())
            throw ParseError("a sparse block must have a zero tail");
        Index n = m.max_explicit_index();
        if (j.contains("n")) n = std::max<Index>(n, j.at("n").get<Index>());
        if (n == 0) throw ParseError("cannot infer block size from an empty sparse block");
        FiniteBlock<T> b(n);
        for (const auto& [pos, v] : m.entries()) b.set(pos.first, pos.second, v);
        return b;
    }
    throw ParseError("block json must be dense rows or a zero-tail sparse matrix");
}

template <class T>
ordered_json block_to_json(const FiniteBlock<T>& b) {
    ordered_json rows = ordered_json::array();
    for (Index i = 1; i <= b.size(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index j = 1; j <= b.size(); ++j) row.push_back(detail::scalar_to_json<T>(b.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json permutation_to_json(const PartialPermutation& p) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [k, r] : p.pairs()) pairs.push_back({k, r});
    return pairs;
}

inline PartialPermutation permutation_from_json(const ordered_json& j) {
    std::map<Index, Index> pairs;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw ParseError("permutation pair must be [k, r]");
        pairs[e.at(0).get<Index>()] = e.at(1).get<Index>();
    }
    try {
        return PartialPermutation(std::move(pairs));
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("invalid permutation: ") + err.what());
    }
}

template <class T>
ordered_json combination_to_json(const ConvexCombination<T>& c) {
    ordered_json terms = ordered_json::array();
    for (const auto& [w, p] : c.terms)
        terms.push_back({{"weight", detail::scalar_to_json<T>(w)},
                         {"permutation", permutation_to_json(p)}});
    return terms;
}

template <class T>
ConvexCombination<T> combination_from_json(const ordered_json& j) {
    ConvexCombination<T> c;
    for (const auto& t : j)
        c.terms.push_back({detail::scalar_from_json<T>(t.at("weight")),
                           permutation_from_json(t.at("permutation"))});
    try {
        c.validate();
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("invalid combination: ") + err.what());
    }
    return c;
}

inline ordered_json report_to_json(const SeminormReport& r) {
    ordered_json samples = ordered_json::array();
    for (const auto& [n, v] : r.samples) samples.push_back({n, v});
    return ordered_json{
        {"label", r.label}, {"samples", std::move(samples)}, {"verdict", to_string(r.verdict)}};
}

inline std::string report_to_csv(const SeminormReport& r) {
    std::string out = "n,value\n";
    for (const auto& [n, v] : r.samples)
        out += std::to_string(n) + "," + ordered_json(v).dump() + "\n";
    return out;
}

}  // namespace blab
