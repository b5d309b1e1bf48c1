#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

#include "errors.hpp"

namespace gaussforge {

// Exact rational in lowest terms with positive denominator (GMP mpq).
// Expression templates are off so that `auto` always yields a value.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// A rational or +infinity; std::nullopt is +infinity.
using ExtRational = std::optional<Rational>;

inline const ExtRational infinity = std::nullopt;

inline bool is_infinite(const ExtRational& a) { return !a.has_value(); }

inline bool ext_less(const ExtRational& a, const ExtRational& b)
{
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}

inline bool ext_less_equal(const ExtRational& a, const ExtRational& b) { return !ext_less(b, a); }

inline ExtRational ext_min(const ExtRational& a, const ExtRational& b) { return ext_less(b, a) ? b : a; }

inline ExtRational ext_max(const ExtRational& a, const ExtRational& b) { return ext_less(a, b) ? b : a; }

inline ExtRational ext_add(const ExtRational& a, const ExtRational& b)
{
    if (!a || !b) return infinity;
    return *a + *b;
}

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rational& q) { return denominator_of(q) == 1; }

inline Rational make_rational(long num, long den = 1) { return Rational(num) / Rational(den); }

// Canonical text: "n" or "n/d".
inline std::string to_string(const Rational& q)
{
    std::string s = numerator_of(q).str();
    if (!is_integral(q)) s += "/" + denominator_of(q).str();
    return s;
}

inline std::string to_string(const ExtRational& q) { return q ? to_string(*q) : std::string("inf"); }

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& pos)
{
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

inline Integer parse_integer(std::string_view s, std::size_t& pos, bool allow_sign)
{
    std::size_t start = pos;
    if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) throw ParseError("expected integer at offset " + std::to_string(start) + " in '" + std::string(s) + "'");
    std::string text(s.substr(start, pos - start));
    if (text[0] == '+') text.erase(0, 1);
    return Integer(text);
}

// integer | integer '/' positive-integer | '(' integer '/' positive-integer ')'
inline Rational parse_rational_at(std::string_view s, std::size_t& pos)
{
    skip_ws(s, pos);
    bool paren = pos < s.size() && s[pos] == '(';
    if (paren) {
        ++pos;
        skip_ws(s, pos);
    }
    Integer num = parse_integer(s, pos, true);
    Integer den = 1;
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        skip_ws(s, pos);
        den = parse_integer(s, pos, false);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    }
    if (paren) {
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw ParseError("missing ')' in '" + std::string(s) + "'");
        ++pos;
    }
    return Rational(num) / Rational(den);
}

} // namespace detail

inline Rational parse_rational(std::string_view s)
{
    std::size_t pos = 0;
    Rational q = detail::parse_rational_at(s, pos);
    detail::skip_ws(s, pos);
    if (pos != s.size()) throw ParseError("trailing characters in rational '" + std::string(s) + "'");
    return q;
}

} // namespace gaussforge
