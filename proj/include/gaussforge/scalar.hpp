#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace gaussforge {

struct Term {
    Rational exp;
    Rational coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

inline constexpr std::size_t default_max_terms = 4096;

// Output limits applied by the truncating arithmetic. `cap` is an absolute
// t-adic precision ceiling; exceeding `max_terms` lowers the output precision
// to the first dropped exponent.
struct Truncation {
    ExtRational cap = infinity;
    std::size_t max_terms = default_max_terms;
};

// Element of the Hahn-series field Q((t^Q)) known modulo t^prec: a finite sum of
// monomials c*t^e plus an O(t^prec) error. prec = infinity means exact.
class ValuedScalar {
public:
    ValuedScalar() = default;

    explicit ValuedScalar(std::vector<Term> terms, ExtRational prec = infinity)
        : terms_(std::move(terms)), prec_(std::move(prec))
    {
        normalize();
    }

    static ValuedScalar constant(const Rational& c) { return ValuedScalar({{Rational(0), c}}); }
    static ValuedScalar monomial(const Rational& coeff, const Rational& exp, ExtRational prec = infinity)
    {
        return ValuedScalar({{exp, coeff}}, std::move(prec));
    }
    static ValuedScalar t_power(const Rational& exp) { return monomial(Rational(1), exp); }
    static ValuedScalar big_oh(const Rational& prec) { return ValuedScalar({}, prec); }

    const std::vector<Term>& terms() const { return terms_; }
    const ExtRational& prec() const { return prec_; }

    bool is_exact() const { return is_infinite(prec_); }
    bool is_exact_zero() const { return terms_.empty() && is_exact(); }
    // Empty term list at finite precision: zero as far as we can tell.
    bool is_indeterminate() const { return terms_.empty() && !is_exact(); }
    bool is_zero_at_precision() const { return terms_.empty(); }

    ExtRational valuation() const
    {
        if (is_indeterminate())
            throw IndeterminateValuation("element is O(t^" + to_string(prec_) + ")");
        if (terms_.empty()) return infinity;
        return terms_.front().exp;
    }

    // valuation when determinate, otherwise the precision (a sound lower bound).
    ExtRational valuation_lower_bound() const
    {
        if (terms_.empty()) return prec_;
        return terms_.front().exp;
    }

    const Rational& leading_coeff() const
    {
        if (terms_.empty()) throw IndeterminateValuation("no leading term");
        return terms_.front().coeff;
    }

    bool in_valuation_ring() const { return ext_less_equal(Rational(0), valuation()); }
    bool in_maximal_ideal() const { return ext_less(Rational(0), valuation()); }

    ValuedScalar with_prec(const ExtRational& p) const
    {
        return ValuedScalar(terms_, ext_min(prec_, p));
    }

    ValuedScalar truncated(const Truncation& tr) const
    {
        ValuedScalar out = with_prec(tr.cap);
        out.apply_term_cap(tr.max_terms);
        return out;
    }

    // Exactly-represented part with the error term dropped.
    ValuedScalar exact_part() const { return ValuedScalar(terms_); }

    friend bool operator==(const ValuedScalar&, const ValuedScalar&) = default;

private:
    friend ValuedScalar mul(const ValuedScalar&, const ValuedScalar&, const Truncation&);

    void normalize()
    {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& term : terms_) {
            if (!merged.empty() && merged.back().exp == term.exp)
                merged.back().coeff += term.coeff;
            else
                merged.push_back(std::move(term));
        }
        std::erase_if(merged, [this](const Term& term) {
            return term.coeff == 0 || !ext_less(term.exp, prec_);
        });
        terms_ = std::move(merged);
    }

    void apply_term_cap(std::size_t max_terms)
    {
        if (terms_.size() <= max_terms) return;
        prec_ = terms_[max_terms].exp;
        terms_.resize(max_terms);
    }

    std::vector<Term> terms_;
    ExtRational prec_ = infinity;
};

inline ValuedScalar neg(const ValuedScalar& x)
{
    std::vector<Term> terms = x.terms();
    for (auto& term : terms) term.coeff = -term.coeff;
    return ValuedScalar(std::move(terms), x.prec());
}

inline ValuedScalar add(const ValuedScalar& x, const ValuedScalar& y, const Truncation& tr = {})
{
    ExtRational prec = ext_min(ext_min(x.prec(), y.prec()), tr.cap);
    std::vector<Term> terms;
    terms.reserve(x.terms().size() + y.terms().size());
    std::merge(x.terms().begin(), x.terms().end(), y.terms().begin(), y.terms().end(), std::back_inserter(terms),
               [](const Term& a, const Term& b) { return a.exp < b.exp; });
    return ValuedScalar(std::move(terms), prec).truncated(tr);
}

inline ValuedScalar sub(const ValuedScalar& x, const ValuedScalar& y, const Truncation& tr = {})
{
    return add(x, neg(y), tr);
}

// Output precision: min(prec(x) + v(y), prec(y) + v(x)), with v replaced by its
// lower bound (the precision) for indeterminate operands.
inline ValuedScalar mul(const ValuedScalar& x, const ValuedScalar& y, const Truncation& tr)
{
    if (x.is_exact_zero() || y.is_exact_zero()) return {};
    ExtRational prec = ext_min(ext_add(x.prec(), y.valuation_lower_bound()),
                               ext_add(y.prec(), x.valuation_lower_bound()));
    prec = ext_min(prec, tr.cap);

    std::vector<Term> terms;
    const auto& xs = x.terms();
    const auto& ys = y.terms();
    if (xs.size() == 1) {
        terms.reserve(ys.size());
        for (const auto& b : ys) {
            Rational e = xs[0].exp + b.exp;
            if (!ext_less(e, prec)) break;
            terms.push_back({std::move(e), xs[0].coeff * b.coeff});
        }
    } else {
        terms.reserve(xs.size() * std::min<std::size_t>(ys.size(), 64));
        for (const auto& a : xs) {
            if (!ys.empty() && !ext_less(a.exp + ys.front().exp, prec)) break;
            for (const auto& b : ys) {
                Rational e = a.exp + b.exp;
                if (!ext_less(e, prec)) break;
                terms.push_back({std::move(e), a.coeff * b.coeff});
            }
        }
    }
    ValuedScalar out;
    out.terms_ = std::move(terms);
    out.prec_ = prec;
    out.normalize();
    out.apply_term_cap(tr.max_terms);
    return out;
}

inline ValuedScalar mul(const ValuedScalar& x, const ValuedScalar& y) { return mul(x, y, Truncation{}); }

inline ValuedScalar scale(const ValuedScalar& x, const Rational& c)
{
    if (c == 0) return {};
    std::vector<Term> terms = x.terms();
    for (auto& term : terms) term.coeff *= c;
    return ValuedScalar(std::move(terms), x.prec());
}

// Multiplication by the monomial t^e, which shifts precision by e.
inline ValuedScalar shift(const ValuedScalar& x, const Rational& e)
{
    std::vector<Term> terms = x.terms();
    for (auto& term : terms) term.exp += e;
    return ValuedScalar(std::move(terms), ext_add(x.prec(), ExtRational(e)));
}

inline ValuedScalar operator+(const ValuedScalar& x, const ValuedScalar& y) { return add(x, y); }
inline ValuedScalar operator-(const ValuedScalar& x, const ValuedScalar& y) { return sub(x, y); }
inline ValuedScalar operator-(const ValuedScalar& x) { return neg(x); }
inline ValuedScalar operator*(const ValuedScalar& x, const ValuedScalar& y) { return mul(x, y); }

// y with x*y = 1 mod t^target_prec, by Newton iteration y <- y + y(1 - xy).
// The result is known modulo t^(target_prec - v(x)); term caps may lower that.
inline ValuedScalar inv(const ValuedScalar& x, const Rational& target_prec, const Truncation& tr = {})
{
    ExtRational v_ext = x.valuation();
    if (is_infinite(v_ext)) throw IndeterminateValuation("inverse of exact zero");
    const Rational v = *v_ext;
    const Rational c0 = x.leading_coeff();
    if (x.is_exact() && x.terms().size() == 1) return ValuedScalar::monomial(1 / c0, -v);

    if (ext_less(ExtRational(x.prec()), ExtRational(target_prec + v)))
        throw InsufficientPrecision("element known mod t^" + to_string(x.prec()) + " cannot be inverted to t^" +
                                    to_string(target_prec));

    const Truncation product_tr{target_prec, tr.max_terms};
    const Truncation inverse_tr{target_prec - v, tr.max_terms};
    const ValuedScalar one = ValuedScalar::constant(Rational(1));

    ValuedScalar y = ValuedScalar::monomial(1 / c0, -v);
    ExtRational reached = Rational(0);
    for (;;) {
        ValuedScalar err = sub(one, mul(x, y, product_tr), product_tr);
        ExtRational err_val = err.valuation_lower_bound();
        if (!ext_less(err_val, ExtRational(target_prec)) || !ext_less(reached, err_val)) {
            reached = ext_min(err_val, ExtRational(target_prec));
            break;
        }
        reached = err_val;
        y = add(y, mul(y, err.exact_part(), inverse_tr), inverse_tr).exact_part();
    }
    return y.with_prec(ext_add(reached, ExtRational(-v)));
}

inline ValuedScalar pow(const ValuedScalar& x, unsigned n, const Truncation& tr = {})
{
    ValuedScalar result = ValuedScalar::constant(Rational(1));
    ValuedScalar base = x;
    while (n) {
        if (n & 1u) result = mul(result, base, tr);
        n >>= 1u;
        if (n) base = mul(base, base, tr);
    }
    return result;
}

// x and y agree at the precision of their difference.
inline bool congruent(const ValuedScalar& x, const ValuedScalar& y) { return sub(x, y).is_zero_at_precision(); }

namespace detail {

inline std::string exponent_text(const Rational& e)
{
    if (is_integral(e)) return to_string(e);
    return "(" + to_string(e) + ")";
}

inline std::string monomial_text(const Rational& abs_coeff, const Rational& exp)
{
    if (exp == 0) return to_string(abs_coeff);
    std::string t = exp == 1 ? std::string("t") : "t^" + exponent_text(exp);
    if (abs_coeff == 1) return t;
    return to_string(abs_coeff) + "*" + t;
}

} // namespace detail

// Canonical literal: sorted exponents, lowest-term rationals, e.g.
// "t^(1/2) - 2*t^(3/4) + O(t^5)".
inline std::string to_string(const ValuedScalar& x)
{
    std::string out;
    for (const auto& term : x.terms()) {
        bool negative = term.coeff < 0;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        out += detail::monomial_text(negative ? Rational(-term.coeff) : term.coeff, term.exp);
    }
    if (!x.is_exact()) {
        out += out.empty() ? "" : " + ";
        out += "O(t^" + detail::exponent_text(*x.prec()) + ")";
    }
    return out.empty() ? std::string("0") : out;
}

namespace detail {

inline Rational parse_t_exponent(std::string_view s, std::size_t& pos)
{
    // after 't': optional '^' rational
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '^') {
        ++pos;
        return parse_rational_at(s, pos);
    }
    return Rational(1);
}

inline Term parse_term(std::string_view s, std::size_t& pos)
{
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == 't') {
        ++pos;
        return {parse_t_exponent(s, pos), Rational(1)};
    }
    Rational coeff = parse_rational_at(s, pos);
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '*') {
        ++pos;
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != 't') throw ParseError("expected 't' after '*' in '" + std::string(s) + "'");
        ++pos;
        return {parse_t_exponent(s, pos), coeff};
    }
    return {Rational(0), coeff};
}

inline bool at_big_oh(std::string_view s, std::size_t pos)
{
    skip_ws(s, pos);
    return pos < s.size() && s[pos] == 'O';
}

inline Rational parse_big_oh(std::string_view s, std::size_t& pos)
{
    skip_ws(s, pos);
    if (s.substr(pos, 2) != "O(") throw ParseError("expected 'O(' in '" + std::string(s) + "'");
    pos += 2;
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != 't') throw ParseError("expected 't' in O-term of '" + std::string(s) + "'");
    ++pos;
    Rational e = parse_t_exponent(s, pos);
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != ')') throw ParseError("missing ')' in O-term of '" + std::string(s) + "'");
    ++pos;
    return e;
}

} // namespace detail

inline ValuedScalar parse_scalar(std::string_view s)
{
    std::size_t pos = 0;
    std::vector<Term> terms;
    ExtRational prec = infinity;
    detail::skip_ws(s, pos);
    if (s.empty()) throw ParseError("empty scalar literal");

    bool negate = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        negate = s[pos] == '-';
        ++pos;
    }
    if (detail::at_big_oh(s, pos)) {
        prec = detail::parse_big_oh(s, pos);
    } else {
        for (;;) {
            Term term = detail::parse_term(s, pos);
            if (negate) term.coeff = -term.coeff;
            terms.push_back(std::move(term));
            detail::skip_ws(s, pos);
            if (pos >= s.size()) break;
            if (s[pos] != '+' && s[pos] != '-') throw ParseError("unexpected character in '" + std::string(s) + "'");
            negate = s[pos] == '-';
            ++pos;
            if (detail::at_big_oh(s, pos)) {
                if (negate) throw ParseError("O-term must be added in '" + std::string(s) + "'");
                prec = detail::parse_big_oh(s, pos);
                break;
            }
        }
    }
    detail::skip_ws(s, pos);
    if (pos != s.size()) throw ParseError("trailing characters in '" + std::string(s) + "'");
    return ValuedScalar(std::move(terms), prec);
}

} // namespace gaussforge
