#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "blab/errors.hpp"

namespace blab {

/// 1-based matrix/vector index.
using Index = std::uint64_t;

/// Exact rational scalar. Every double converts to it exactly, so exact
/// mode can ingest float input without rounding.
using Rational = boost::multiprecision::cpp_rational;

/// Comparison tolerance for float mode. Exact mode ignores it.
inline double& float_tolerance() {
    static double eps = 1e-9;
    return eps;
}

inline void set_float_tolerance(double eps) { float_tolerance() = eps; }

/// Arithmetic-mode traits. The library is templated on the scalar;
/// Rational gives closed exact arithmetic, double compares through the
/// configured tolerance.
template <class T>
struct num;

template <>
struct num<Rational> {
    static constexpr bool exact = true;
    static bool eq(const Rational& a, const Rational& b) { return a == b; }
    static bool is_zero(const Rational& a) { return a.sign() == 0; }
    static bool positive(const Rational& a) { return a.sign() > 0; }
    static double to_double(const Rational& a) { return a.convert_to<double>(); }
    static Rational from_int(long long v) { return Rational(v); }
    static Rational from_double(double v) { return Rational(v); }
};

template <>
struct num<double> {
    static constexpr bool exact = false;
    static bool eq(double a, double b) { return std::abs(a - b) <= float_tolerance(); }
    static bool is_zero(double a) { return std::abs(a) <= float_tolerance(); }
    static bool positive(double a) { return a > float_tolerance(); }
    static double to_double(double a) { return a; }
    static double from_int(long long v) { return static_cast<double>(v); }
    static double from_double(double v) { return v; }
};

namespace detail {
// Reads a decimal integer; leading zeros are stripped so the cpp_int
// string constructor cannot reinterpret them as an octal prefix.
inline boost::multiprecision::cpp_int parse_decimal_int(std::string s) {
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    std::size_t first = s.find_first_not_of('0');
    s = first == std::string::npos ? "0" : s.substr(first);
    boost::multiprecision::cpp_int v(s);
    return negative ? -v : v;
}
}  // namespace detail

/// Parses "p/q", "p", or a plain decimal like "-0.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Rational den(detail::parse_decimal_int(text.substr(slash + 1)));
            if (den.sign() == 0) throw ParseError("zero denominator in '" + text + "'");
            return Rational(detail::parse_decimal_int(text.substr(0, slash))) / den;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(detail::parse_decimal_int(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        if (frac_len == 0 || digits == "-" || digits == "+" || digits.empty())
            throw ParseError("bad decimal '" + text + "'");
        Rational scale = 1;
        for (std::size_t i = 0; i < frac_len; ++i) scale *= 10;
        return Rational(detail::parse_decimal_int(digits)) / scale;
    } catch (const ParseError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw ParseError("cannot parse rational '" + text + "': " + e.what());
    }
}

/// Formats a rational as "p/q", or "p" when the denominator is 1.
inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

template <class T>
std::string format_scalar(const T& v);

template <>
inline std::string format_scalar<Rational>(const Rational& v) {
    return format_rational(v);
}

template <>
inline std::string format_scalar<double>(const double& v) {
    return std::to_string(v);
}

}  // namespace blab
