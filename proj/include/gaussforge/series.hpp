#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "scalar.hpp"

namespace gaussforge {

// valuation(f_i) >= beta + i*alpha for every i past the known prefix.
// beta = infinity means the coefficients past the prefix are exactly zero.
struct TailBound {
    Rational alpha{0};
    ExtRational beta = Rational(0);

    static TailBound exact_zero() { return {Rational(0), infinity}; }
    static TailBound integral() { return {Rational(0), Rational(0)}; }

    bool is_exact_zero() const { return is_infinite(beta); }
    ExtRational at(std::size_t i) const { return ext_add(beta, ExtRational(alpha * Rational(static_cast<long>(i)))); }

    friend bool operator==(const TailBound&, const TailBound&) = default;
};

struct GaussValue {
    Rational value;
    bool certified = false;

    friend bool operator==(const GaussValue&, const GaussValue&) = default;
};

// Truncated element of K[[X]]: coefficients f_0..f_{xprec-1} plus an affine
// lower bound on the valuations of the unknown tail. The admissible flag records
// the (externally established) fact that w(f) = 0 and every f_i lies in m; it
// survives exact division by polynomials with roots in m.
class PSeries {
public:
    PSeries() : tail_(TailBound::exact_zero()) {}

    PSeries(std::vector<ValuedScalar> coeffs, TailBound tail, bool admissible = false)
        : coeffs_(std::move(coeffs)), tail_(std::move(tail)), admissible_(admissible)
    {
        if (tail_.alpha < 0) throw PreconditionFailed("tail slope must be non-negative");
        if (tail_.is_exact_zero()) {
            while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
        }
    }

    static PSeries polynomial(std::vector<ValuedScalar> coeffs)
    {
        return PSeries(std::move(coeffs), TailBound::exact_zero());
    }
    static PSeries from(const Polynomial& p) { return polynomial(p.coeffs()); }

    // f_i = t^(1/(i+1)): all coefficients in m, Gauss valuation 0 (not attained).
    static PSeries canonical_witness(std::size_t xprec)
    {
        std::vector<ValuedScalar> coeffs;
        coeffs.reserve(xprec);
        for (std::size_t i = 0; i < xprec; ++i)
            coeffs.push_back(ValuedScalar::t_power(Rational(1) / Rational(static_cast<long>(i + 1))));
        return PSeries(std::move(coeffs), TailBound::integral(), true);
    }

    const std::vector<ValuedScalar>& coeffs() const { return coeffs_; }
    std::size_t xprec() const { return coeffs_.size(); }
    const TailBound& tail() const { return tail_; }
    bool is_polynomial() const { return tail_.is_exact_zero(); }
    bool admissible() const { return admissible_; }

    PSeries with_admissible(bool flag) const { return PSeries(coeffs_, tail_, flag); }

    const ValuedScalar& coeff(std::size_t i) const
    {
        static const ValuedScalar zero;
        if (i < coeffs_.size()) return coeffs_[i];
        if (is_polynomial()) return zero;
        throw PrecisionExhausted("coefficient " + std::to_string(i) + " beyond xprec " + std::to_string(xprec()));
    }

    ExtRational coeff_lower_bound(std::size_t i) const
    {
        if (i < coeffs_.size()) return coeffs_[i].valuation_lower_bound();
        return tail_.at(i);
    }

    Polynomial prefix_polynomial() const { return Polynomial(coeffs_); }

    // Keep only the first n coefficients, folding the dropped ones into the tail.
    PSeries truncated_to(std::size_t n) const;

    friend bool operator==(const PSeries&, const PSeries&) = default;

private:
    std::vector<ValuedScalar> coeffs_;
    TailBound tail_;
    bool admissible_ = false;
};

namespace detail {

// min over j >= from of (lower_bound(f_j) - j*alpha); requires alpha <= f.tail().alpha
// whenever the tail is not exactly zero.
inline ExtRational affine_minorant(const PSeries& f, const Rational& alpha, std::size_t from)
{
    ExtRational best = infinity;
    for (std::size_t j = from; j < f.xprec(); ++j) {
        ExtRational lb = f.coeffs()[j].valuation_lower_bound();
        if (!lb) continue;
        best = ext_min(best, ExtRational(*lb - alpha * Rational(static_cast<long>(j))));
    }
    if (!f.is_polynomial()) {
        std::size_t j0 = std::max(from, f.xprec());
        best = ext_min(best, ext_add(f.tail().beta, ExtRational((f.tail().alpha - alpha) * Rational(static_cast<long>(j0)))));
    }
    return best;
}

inline std::size_t effective_xprec(const PSeries& f, const PSeries& g)
{
    if (f.is_polynomial() && g.is_polynomial()) return std::max(f.xprec(), g.xprec());
    if (f.is_polynomial()) return g.xprec();
    if (g.is_polynomial()) return f.xprec();
    return std::min(f.xprec(), g.xprec());
}

inline Rational common_alpha(const PSeries& f, const PSeries& g)
{
    if (f.is_polynomial()) return g.tail().alpha;
    if (g.is_polynomial()) return f.tail().alpha;
    return std::min(f.tail().alpha, g.tail().alpha);
}

} // namespace detail

inline PSeries PSeries::truncated_to(std::size_t n) const
{
    if (n >= coeffs_.size()) return *this;
    Rational alpha = is_polynomial() ? Rational(0) : tail_.alpha;
    ExtRational beta = detail::affine_minorant(*this, alpha, n);
    // A truncated polynomial is no longer known to vanish past the prefix.
    if (is_infinite(beta)) beta = infinity;
    std::vector<ValuedScalar> head(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n));
    TailBound tail{alpha, beta};
    if (is_infinite(beta)) tail = TailBound::exact_zero();
    return PSeries(std::move(head), tail, admissible_);
}

// --- Gauss valuation ---------------------------------------------------------

// Indeterminate coefficients are tolerated when their precision already lies
// above the smallest determinate valuation.
inline GaussValue gauss_valuation(const PSeries& f)
{
    ExtRational best = infinity;
    ExtRational unknown = infinity;
    for (const auto& c : f.coeffs()) {
        if (c.is_indeterminate())
            unknown = ext_min(unknown, c.prec());
        else
            best = ext_min(best, c.valuation());
    }
    if (!best) {
        if (f.is_polynomial() && is_infinite(unknown)) throw IndeterminateValuation("Gauss valuation of the zero series");
        throw IndeterminateValuation("no determinate coefficient in the prefix");
    }
    if (ext_less(unknown, best))
        throw IndeterminateValuation("a coefficient known only mod t^" + to_string(unknown) + " may attain the minimum");
    bool certified = ext_less_equal(best, f.tail().at(f.xprec()));
    return {*best, certified};
}

// Lower bound on the Gauss valuation of f(t^s X), from the prefix and tail.
inline ExtRational radius_norm(const PSeries& f, const Rational& s)
{
    ExtRational best = infinity;
    for (std::size_t i = 0; i < f.xprec(); ++i)
        best = ext_min(best, ext_add(f.coeffs()[i].valuation_lower_bound(), ExtRational(s * Rational(static_cast<long>(i)))));
    if (!f.is_polynomial()) {
        if (f.tail().alpha + s < 0) throw PreconditionFailed("tail bound diverges at this radius");
        best = ext_min(best, ext_add(f.tail().at(f.xprec()), ExtRational(s * Rational(static_cast<long>(f.xprec())))));
    }
    return best;
}

inline ExtRational radius_norm(const Polynomial& p, const Rational& s) { return radius_norm(PSeries::from(p), s); }

// --- Ring operations ---------------------------------------------------------

inline PSeries add(const PSeries& f, const PSeries& g, const Truncation& tr = {})
{
    const std::size_t n = detail::effective_xprec(f, g);
    std::vector<ValuedScalar> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = add(f.coeff(i), g.coeff(i), tr);
    if (f.is_polynomial() && g.is_polynomial()) return PSeries::polynomial(std::move(out));
    const Rational alpha = detail::common_alpha(f, g);
    ExtRational beta = ext_min(detail::affine_minorant(f, alpha, n), detail::affine_minorant(g, alpha, n));
    return PSeries(std::move(out), {alpha, beta});
}

inline PSeries neg(const PSeries& f)
{
    std::vector<ValuedScalar> out;
    out.reserve(f.xprec());
    for (const auto& c : f.coeffs()) out.push_back(neg(c));
    return PSeries(std::move(out), f.tail());
}

inline PSeries sub(const PSeries& f, const PSeries& g, const Truncation& tr = {}) { return add(f, neg(g), tr); }

namespace detail {

// Lower bound `value` on coefficient k0 of f*g; a piece from an unknown tail
// also bounds every later index, growing at least at the tail slope.
struct TailPiece {
    std::size_t k0;
    Rational value;
};

// f's unknown tail against g's prefix
inline void tail_pieces(const PSeries& f, const PSeries& g, std::size_t n, std::vector<TailPiece>& out)
{
    if (f.is_polynomial()) return;
    for (std::size_t l = 0; l < g.xprec(); ++l) {
        const ExtRational lb = g.coeffs()[l].valuation_lower_bound();
        if (!lb) continue;
        const std::size_t k0 = std::max(n, f.xprec() + l);
        const Rational at = *f.tail().beta + f.tail().alpha * Rational(static_cast<long>(k0 - l)) + *lb;
        out.push_back({k0, at});
    }
}

// Affine tail (slope, beta) for the product truncated to n coefficients.
// Among the valid slopes <= alpha it takes the largest one whose bound at
// index n is as strong as the flat bound.
inline std::pair<Rational, ExtRational> product_tail(const PSeries& f, const PSeries& g, std::size_t n,
                                                     const Rational& alpha)
{
    std::vector<TailPiece> pieces;
    for (std::size_t j = 0; j < f.xprec(); ++j) {
        const ExtRational a = f.coeffs()[j].valuation_lower_bound();
        if (!a) continue;
        for (std::size_t l = (j >= n ? 0 : n - j); l < g.xprec(); ++l) {
            const ExtRational b = g.coeffs()[l].valuation_lower_bound();
            if (b) pieces.push_back({j + l, *a + *b});
        }
    }
    tail_pieces(f, g, n, pieces);
    tail_pieces(g, f, n, pieces);
    if (!f.is_polynomial() && !g.is_polynomial()) {
        const Rational lo = std::min(f.tail().alpha, g.tail().alpha);
        const std::size_t k0 = std::max(n, f.xprec() + g.xprec());
        const Rational at = *f.tail().beta + *g.tail().beta + lo * Rational(static_cast<long>(k0)) +
                            (f.tail().alpha - lo) * Rational(static_cast<long>(f.xprec())) +
                            (g.tail().alpha - lo) * Rational(static_cast<long>(g.xprec()));
        pieces.push_back({k0, at});
    }
    if (pieces.empty()) return {alpha, infinity};

    Rational floor = pieces.front().value;
    for (const auto& p : pieces) floor = std::min(floor, p.value);
    Rational slope = alpha;
    for (const auto& p : pieces)
        if (p.k0 > n) slope = std::min(slope, (p.value - floor) / Rational(static_cast<long>(p.k0 - n)));
    return {slope, ExtRational(floor - slope * Rational(static_cast<long>(n)))};
}

} // namespace detail

inline PSeries mul(const PSeries& f, const PSeries& g, const Truncation& tr = {})
{
    if (f.is_polynomial() && g.is_polynomial()) {
        if (f.xprec() == 0 || g.xprec() == 0) return PSeries::polynomial({});
        return PSeries::from(mul(f.prefix_polynomial(), g.prefix_polynomial(), tr));
    }
    const std::size_t n = detail::effective_xprec(f, g);
    std::vector<ValuedScalar> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        ValuedScalar acc;
        for (std::size_t j = 0; j <= k; ++j) {
            if (j >= f.xprec() && f.is_polynomial()) break;
            if (k - j >= g.xprec() && g.is_polynomial()) continue;
            const auto& a = f.coeff(j);
            const auto& b = g.coeff(k - j);
            if (a.is_exact_zero() || b.is_exact_zero()) continue;
            acc = add(acc, mul(a, b, tr), tr);
        }
        out[k] = std::move(acc);
    }
    const Rational alpha = detail::common_alpha(f, g);
    const auto [slope, beta] = detail::product_tail(f, g, n, alpha);
    if (is_infinite(beta)) return PSeries(std::move(out), {alpha, Rational(0)}).truncated_to(n);
    return PSeries(std::move(out), {slope, beta});
}

// f(aX): coefficient i picks up a^i, tail slope grows by w(a).
inline PSeries substitute_scale(const PSeries& f, const ValuedScalar& a, const Truncation& tr = {})
{
    if (!a.in_maximal_ideal()) throw NotInMaximalIdeal("scale must have positive valuation");
    std::vector<ValuedScalar> out;
    out.reserve(f.xprec());
    ValuedScalar power = ValuedScalar::constant(Rational(1));
    for (std::size_t i = 0; i < f.xprec(); ++i) {
        out.push_back(mul(f.coeffs()[i], power, tr));
        power = mul(power, a, tr);
    }
    if (f.is_polynomial()) return PSeries::polynomial(std::move(out));
    return PSeries(std::move(out), {f.tail().alpha + *a.valuation(), f.tail().beta});
}

struct Evaluation {
    ValuedScalar value;      // partial sum over the known prefix
    ExtRational error_bound; // the omitted tail has valuation >= this
};

inline Evaluation evaluate(const PSeries& f, const ValuedScalar& c, const Truncation& tr = {})
{
    if (!f.is_polynomial() && !c.in_maximal_ideal())
        throw NotInMaximalIdeal("evaluation of a series needs a point of positive valuation");
    const ExtRational v = c.is_zero_at_precision() ? ExtRational() : c.valuation();
    ValuedScalar acc;
    for (std::size_t i = f.xprec(); i-- > 0;) {
        const Truncation step = detail::shifted_cap(tr, v, i);
        acc = add(mul(acc, c, step), f.coeffs()[i], step);
    }
    ExtRational bound = infinity;
    if (!f.is_polynomial())
        bound = ext_add(f.tail().beta,
                        ExtRational((f.tail().alpha + *c.valuation()) * Rational(static_cast<long>(f.xprec()))));
    return {std::move(acc), bound};
}

inline bool vanishes(const Evaluation& e) { return e.value.with_prec(e.error_bound).is_zero_at_precision(); }

inline PSeries derivative(const PSeries& f)
{
    std::vector<ValuedScalar> out;
    for (std::size_t i = 1; i < f.xprec(); ++i) out.push_back(scale(f.coeffs()[i], Rational(static_cast<long>(i))));
    if (f.is_polynomial()) return PSeries::polynomial(std::move(out));
    return PSeries(std::move(out), {f.tail().alpha, ext_add(f.tail().beta, ExtRational(f.tail().alpha))});
}

// --- Division by X - c -------------------------------------------------------

// Quotient of f by (X - c)^n using g_i = -(f_0/c^{i+1} + f_1/c^i + ... + f_i/c),
// applied n times. Each step divides by c once per coefficient, so coefficient i
// of a single quotient loses at most (i+1)*w(c) of precision; the losses show up
// in the output precisions.
inline PSeries divide_linear(const PSeries& f, const ValuedScalar& c, unsigned n, const Truncation& tr = {})
{
    if (n == 0) return f;
    if (!c.in_maximal_ideal()) throw NotInMaximalIdeal("root must have positive valuation");

    PSeries probe = f;
    for (unsigned k = 0; k < n; ++k) {
        if (!vanishes(evaluate(probe, c, tr)))
            throw NotARoot("derivative " + std::to_string(k) + " does not vanish at c");
        probe = derivative(probe);
    }

    ValuedScalar c_inv;
    if (c.is_exact() && c.terms().size() == 1) {
        c_inv = inv(c, Rational(0));
    } else {
        if (is_infinite(tr.cap))
            throw InsufficientPrecision("a finite t-precision cap is needed to invert a non-monomial root");
        c_inv = inv(c, *tr.cap, tr);
    }

    PSeries current = f;
    for (unsigned step = 0; step < n; ++step) {
        const std::size_t len = current.is_polynomial() ? (current.xprec() ? current.xprec() - 1 : 0) : current.xprec();
        std::vector<ValuedScalar> g(len);
        ValuedScalar prev;
        for (std::size_t i = 0; i < len; ++i) {
            prev = mul(sub(prev, current.coeffs()[i], tr), c_inv, tr);
            // a zero known mod t^p, p > 0, still pins the coefficient down in D
            if (prev.is_indeterminate() && !ext_less(ExtRational(Rational(0)), ExtRational(prev.prec())))
                throw PrecisionExhausted("quotient coefficient " + std::to_string(i) + " is indeterminate");
            g[i] = prev;
        }
        if (current.is_polynomial()) {
            current = PSeries(std::move(g), TailBound::exact_zero(), current.admissible());
        } else {
            TailBound tail{current.tail().alpha, ext_add(current.tail().beta, ExtRational(current.tail().alpha))};
            current = PSeries(std::move(g), tail, current.admissible());
        }
    }
    return current;
}

// --- Division by a monic polynomial with roots in m ---------------------------

struct MonicDivision {
    PSeries quotient;
    Polynomial remainder;     // f - q*h, degree < deg q
    ExtRational residual_bound; // min valuation lower bound over the remainder coefficients
    Rational threshold;       // radius norm of f on the circle of q's smallest roots
};

// f = q*h + rem by top-down (Weierstrass) division of the known prefix. The
// unknown tail of f enters coefficient i of h with valuation at least
// beta + N*alpha + (N - n - i)*s and coefficient k of rem with at least
// beta + N*alpha + (N - k)*s, where s is the smallest root valuation of q; these
// bounds cap the output precisions. q is accepted as a divisor when the remainder
// is strictly smaller than f on the circle of radius s.
inline MonicDivision divide_monic(const PSeries& f, const MonicPoly& q, const Truncation& tr = {},
                                  const Rational& quotient_slope = Rational(0))
{
    const std::size_t n = q.degree();
    if (n == 0) throw PreconditionFailed("divisor must have positive degree");
    if (!q.roots_in_maximal_ideal()) throw PreconditionFailed("divisor coefficients must lie in m");
    const Rational s = q.min_root_valuation();

    const std::size_t N = f.xprec();
    // Quotient coefficients feed the remainder through factors of valuation
    // >= s per degree, so the schedule may not drop faster than s.
    PolyDivision division = divrem_monic(f.prefix_polynomial(), q.poly(), tr, std::min(quotient_slope, s));

    std::vector<ValuedScalar> quot = division.quotient.coeffs();
    std::vector<ValuedScalar> rem(n);
    for (std::size_t k = 0; k < n; ++k) rem[k] = division.remainder[k];

    if (!f.is_polynomial()) {
        if (N <= n) throw PrecisionExhausted("series prefix too short to divide by degree " + std::to_string(n));
        const ExtRational floor = f.tail().at(N);
        quot.resize(N - n);
        for (std::size_t i = 0; i < quot.size(); ++i)
            quot[i] = quot[i].with_prec(ext_add(floor, ExtRational(s * Rational(static_cast<long>(N - n - i)))));
        for (std::size_t k = 0; k < n; ++k)
            rem[k] = rem[k].with_prec(ext_add(floor, ExtRational(s * Rational(static_cast<long>(N - k)))));
    }

    ExtRational norm = radius_norm(f, s);
    if (is_infinite(norm)) throw PreconditionFailed("division of the zero series");
    ExtRational residual = infinity;
    ExtRational rem_norm = infinity;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = rem[k];
        ExtRational shifted = ext_add(r.valuation_lower_bound(), ExtRational(s * Rational(static_cast<long>(k))));
        if (!r.is_zero_at_precision() && ext_less_equal(shifted, norm))
            throw NotDivisible("remainder coefficient " + std::to_string(k) + " has valuation " +
                               to_string(r.valuation()) + " against threshold " + to_string(norm));
        rem_norm = ext_min(rem_norm, shifted);
        residual = ext_min(residual, r.valuation_lower_bound());
    }
    if (!ext_less(norm, rem_norm))
        throw PrecisionExhausted("remainder known only to t^" + to_string(rem_norm) + ", threshold " + to_string(norm));

    for (std::size_t i = 0; i < quot.size(); ++i) {
        const auto& h = quot[i];
        if (!h.is_zero_at_precision() && ext_less(h.valuation(), ExtRational(Rational(0))))
            throw QuotientNotIntegral("quotient coefficient " + std::to_string(i) + " has valuation " +
                                      to_string(h.valuation()));
    }

    PSeries quotient = f.is_polynomial()
                           ? PSeries(std::move(quot), TailBound::exact_zero(), f.admissible())
                           : PSeries(std::move(quot),
                                     {f.tail().alpha,
                                      ext_add(f.tail().beta, ExtRational(f.tail().alpha * Rational(static_cast<long>(n))))},
                                     f.admissible());
    return {std::move(quotient), Polynomial(std::move(rem)), residual, *norm};
}

// --- Series file format --------------------------------------------------------
//
//   xprec: <int>
//   tail: <alpha> <beta|inf>
//   tag: admissible            (optional)
//   <index>: <scalar-literal>  (one line per coefficient)

inline std::string write_series(const PSeries& f)
{
    std::ostringstream out;
    out << "xprec: " << f.xprec() << "\n";
    out << "tail: " << to_string(f.tail().alpha) << " " << to_string(f.tail().beta) << "\n";
    if (f.admissible()) out << "tag: admissible\n";
    for (std::size_t i = 0; i < f.xprec(); ++i) out << i << ": " << to_string(f.coeffs()[i]) << "\n";
    return out.str();
}

inline PSeries parse_series(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    long xprec = -1;
    TailBound tail = TailBound::integral();
    bool have_tail = false;
    bool admissible = false;
    std::vector<ValuedScalar> coeffs;
    std::vector<bool> seen;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": missing ':'");
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "xprec") {
            if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("line " + std::to_string(lineno) + ": bad xprec '" + value + "'");
            xprec = std::stol(value);
            coeffs.assign(static_cast<std::size_t>(xprec), ValuedScalar());
            seen.assign(static_cast<std::size_t>(xprec), false);
        } else if (key == "tail") {
            std::istringstream parts(value);
            std::string a, b;
            parts >> a >> b;
            if (a.empty() || b.empty()) throw ParseError("line " + std::to_string(lineno) + ": tail needs two values");
            tail.alpha = parse_rational(a);
            tail.beta = b == "inf" ? infinity : ExtRational(parse_rational(b));
            have_tail = true;
        } else if (key == "tag") {
            if (value != "admissible") throw ParseError("unknown tag '" + value + "'");
            admissible = true;
        } else {
            if (xprec < 0) throw ParseError("coefficient before xprec header");
            if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("line " + std::to_string(lineno) + ": bad key '" + key + "'");
            std::size_t idx = std::stoul(key);
            if (idx >= coeffs.size()) throw ParseError("coefficient index " + key + " >= xprec");
            if (seen[idx]) throw ParseError("duplicate coefficient index " + key);
            coeffs[idx] = parse_scalar(value);
            seen[idx] = true;
        }
    }
    if (xprec < 0) throw ParseError("missing xprec header");
    if (!have_tail) throw ParseError("missing tail header");
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw ParseError("coefficient " + std::to_string(i) + " missing");
    if (tail.alpha < 0) throw ParseError("tail slope must be non-negative");
    return PSeries(std::move(coeffs), tail, admissible);
}

inline std::string to_string(const PSeries& f)
{
    std::string out;
    for (std::size_t i = 0; i < f.xprec(); ++i) {
        if (f.coeffs()[i].is_exact_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + to_string(f.coeffs()[i]) + ")";
        if (i == 1) out += "*X";
        if (i > 1) out += "*X^" + std::to_string(i);
    }
    if (out.empty()) out = "0";
    if (!f.is_polynomial()) out += " + O(X^" + std::to_string(f.xprec()) + ")";
    return out;
}

} // namespace gaussforge
