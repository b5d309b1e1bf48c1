#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "scalar.hpp"
#include "series.hpp"

namespace gaussforge {

// Largest index attaining the Gauss valuation. Every coefficient past it, the
// unrepresented tail included, must be certified strictly larger.
inline std::size_t pseudo_degree(const PSeries& g)
{
    const GaussValue gv = gauss_valuation(g);
    const ExtRational value = gv.value;
    if (!g.is_polynomial() && !ext_less(value, g.tail().at(g.xprec())))
        throw Uncertified("tail bound t^" + to_string(g.tail().at(g.xprec())) + " does not clear the Gauss value " +
                          to_string(gv.value));
    std::size_t d = 0;
    for (std::size_t i = 0; i < g.xprec(); ++i) {
        const auto& c = g.coeffs()[i];
        if (!c.is_indeterminate() && c.valuation() == value) d = i;
    }
    for (std::size_t i = d + 1; i < g.xprec(); ++i) {
        const auto& c = g.coeffs()[i];
        if (c.is_indeterminate() && !ext_less(value, c.prec()))
            throw Uncertified("coefficient " + std::to_string(i) + " is not known past the Gauss value");
    }
    return d;
}

inline bool is_unit_criterion(const PSeries& g) { return pseudo_degree(g) == 0; }

// Number of zeros of f in the disc |X| <= |a|, counted with multiplicity.
inline std::size_t disc_degree(const PSeries& f, const ValuedScalar& a, const Truncation& tr = {})
{
    return pseudo_degree(substitute_scale(f, a, tr));
}

namespace detail {

inline PSeries shift_down(const PSeries& f, std::size_t d)
{
    if (d == 0) return f;
    std::vector<ValuedScalar> out;
    for (std::size_t i = d; i < f.xprec(); ++i) out.push_back(f.coeffs()[i]);
    if (f.is_polynomial()) return PSeries::polynomial(std::move(out));
    return PSeries(std::move(out),
                   {f.tail().alpha, ext_add(f.tail().beta, ExtRational(f.tail().alpha * Rational(static_cast<long>(d))))});
}

inline PSeries cap_precision(const PSeries& f, const ExtRational& floor)
{
    if (is_infinite(floor)) return f;
    std::vector<ValuedScalar> out;
    out.reserve(f.xprec());
    for (const auto& c : f.coeffs()) out.push_back(c.with_prec(ext_min(c.prec(), floor)));
    if (f.is_polynomial()) return PSeries(std::move(out), {Rational(0), floor}, f.admissible());
    return PSeries(std::move(out), {f.tail().alpha, ext_min(f.tail().beta, floor)}, f.admissible());
}

// Same series with a slope-0 tail bound. Under a t-precision cap the slope
// carries no information, while a flat bound grows by the contraction factor
// per round of division.
inline PSeries flatten_tail(const PSeries& f)
{
    if (f.is_polynomial() || f.tail().alpha == 0) return f;
    return PSeries(f.coeffs(), {Rational(0), f.tail().at(f.xprec())}, f.admissible());
}

inline ValuedScalar invert_to(const ValuedScalar& x, const Rational& rel, const Truncation& tr)
{
    if (x.is_exact() && x.terms().size() == 1) return inv(x, Rational(0));
    Rational want = rel;
    if (!x.is_exact()) want = std::min(want, *x.prec() - *x.valuation());
    return inv(x, want, tr);
}

} // namespace detail

// 1/u for a series whose constant term strictly dominates, to relative
// t-precision rel. The result has `length` coefficients (default: u's xprec).
inline PSeries series_inverse(const PSeries& u, const Rational& rel, const Truncation& tr = {}, std::size_t length = 0)
{
    if (pseudo_degree(u) != 0) throw PreconditionFailed("series is not a unit");
    if (length == 0) length = std::max<std::size_t>(u.xprec(), 1);
    if (!u.is_polynomial()) length = std::min(length, u.xprec());
    const Rational v0 = *u.coeff(0).valuation();
    const ValuedScalar c = detail::invert_to(u.coeff(0), rel, tr);
    if (u.is_polynomial() && u.xprec() == 1) return PSeries::polynomial({c});

    const Truncation wtr{ext_min(tr.cap, ExtRational(rel - v0)), tr.max_terms};
    std::vector<ValuedScalar> out(length);
    out[0] = c;
    for (std::size_t k = 1; k < length; ++k) {
        ValuedScalar acc;
        for (std::size_t j = 1; j <= k; ++j) {
            if (u.is_polynomial() && j >= u.xprec()) break;
            const auto& a = u.coeff(j);
            if (a.is_exact_zero() || out[k - j].is_exact_zero()) continue;
            acc = add(acc, mul(a, out[k - j], wtr), wtr);
        }
        out[k] = neg(mul(acc, c, wtr));
    }

    // With u = u_0(1 + V) and w(V_j) >= j*alpha for all j >= 1, every
    // coefficient j of 1/u has valuation >= -v0 + j*alpha.
    ExtRational alpha = u.is_polynomial() ? infinity : ExtRational(u.tail().alpha);
    for (std::size_t j = 1; j < u.xprec(); ++j) {
        ExtRational lb = u.coeffs()[j].valuation_lower_bound();
        if (!lb) continue;
        alpha = ext_min(alpha, ExtRational((*lb - v0) / Rational(static_cast<long>(j))));
    }
    if (!alpha) alpha = Rational(0);
    return PSeries(std::move(out), {*alpha, ExtRational(-v0)});
}

// --- Division by contraction ---------------------------------------------------

struct ContractionOptions {
    Rational target{4};     // t-precision to gain over the Gauss valuation of the dividend
    std::size_t length = 0; // X-length when dividend and divisor are both polynomials
};

struct WeierstrassDivision {
    PSeries quotient;
    Polynomial remainder;     // degree < pseudo-degree of the divisor
    std::size_t rounds = 0;
    ExtRational floor;        // the undivided part has Gauss valuation >= floor
};

// h = Q*g + rem with deg rem < d = pseudo_degree(g). Writing g/g_d = P + X^d*U
// with deg P < d, each round splits the current dividend as X^d*A + B, adds
// U^{-1}A to the quotient and B to the remainder, and continues with -P*U^{-1}*A.
// The head gap min w(P_i) is the contraction per round.
inline WeierstrassDivision weierstrass_divide(const PSeries& h, const PSeries& g, const ContractionOptions& opt = {},
                                              const Truncation& tr = {})
{
    const std::size_t d = pseudo_degree(g);
    const Rational v = gauss_valuation(g).value;
    const ValuedScalar gd = g.coeff(d);

    const ExtRational hnorm = radius_norm(h, Rational(0));
    if (is_infinite(hnorm)) return {PSeries::polynomial({}), Polynomial(), 0, infinity};
    const Rational goal = *hnorm + opt.target;
    const Truncation wtr{ext_min(tr.cap, ExtRational(goal)), tr.max_terms};

    const ValuedScalar y = detail::invert_to(gd, opt.target, tr);
    const bool exact_scale = y.is_exact() && y.terms().size() == 1;
    const PSeries G = mul(g, PSeries::polynomial({y}),
                          exact_scale ? tr : Truncation{ext_min(tr.cap, ExtRational(opt.target)), tr.max_terms});

    // Divisor already a polynomial of degree d: plain Euclidean division.
    if (h.is_polynomial() && G.is_polynomial() && G.xprec() == d + 1 && G.coeffs()[d] == ValuedScalar::constant(Rational(1))) {
        PolyDivision e = divrem_monic(h.prefix_polynomial(), G.prefix_polynomial(), tr);
        PSeries q = mul(PSeries::from(e.quotient), PSeries::polynomial({y}), tr);
        return {std::move(q), std::move(e.remainder), 1, infinity};
    }

    std::vector<ValuedScalar> head(G.coeffs().begin(), G.coeffs().begin() + static_cast<long>(d));
    ExtRational gap = infinity;
    for (const auto& c : head)
        if (!c.is_exact_zero()) gap = ext_min(gap, c.valuation_lower_bound());
    if (!ext_less(ExtRational(Rational(0)), gap)) throw NoContraction("head of the divisor does not dominate");
    const PSeries P = PSeries::polynomial(head);

    std::size_t max_rounds = 1;
    if (gap) {
        Rational r = opt.target / *gap;
        max_rounds = static_cast<std::size_t>(numerator_of(r) / denominator_of(r)) + 2;
    }

    std::size_t length = opt.length;
    if (length == 0) length = std::max(h.xprec(), G.xprec()) + (max_rounds + 1) * d + 1;
    const PSeries U = detail::shift_down(detail::flatten_tail(G), d);
    const PSeries Uinv = detail::flatten_tail(series_inverse(U, opt.target, tr, length));

    PSeries current = detail::flatten_tail(h);
    PSeries quotient = PSeries::polynomial({});
    std::vector<ValuedScalar> rho(d);
    std::size_t rounds = 0;
    while (rounds < max_rounds) {
        ExtRational norm = radius_norm(current, Rational(0));
        if (!ext_less(norm, ExtRational(goal))) break;
        if (!current.is_polynomial() && current.xprec() <= d) break;
        for (std::size_t i = 0; i < d; ++i) rho[i] = add(rho[i], current.is_polynomial() || i < current.xprec() ? current.coeff(i) : ValuedScalar(), wtr);
        PSeries A = detail::shift_down(current, d);
        PSeries W = mul(Uinv, A, wtr);
        quotient = add(quotient, W, wtr);
        current = neg(mul(P, W, wtr));
        ++rounds;
    }
    const ExtRational floor = radius_norm(current, Rational(0));
    for (auto& c : rho) c = c.with_prec(ext_min(c.prec(), floor));
    quotient = detail::cap_precision(mul(quotient, PSeries::polynomial({y}), wtr), ext_add(floor, ExtRational(-v)));
    return {std::move(quotient), Polynomial(std::move(rho)), rounds, floor};
}

struct Preparation {
    MonicPoly r;
    PSeries u;
    ExtRational floor; // r is correct modulo t^floor coefficientwise
    std::size_t rounds = 0;
};

// g = r * u with r distinguished of degree pseudo_degree(g) and u a unit.
// r = X^d - rem(X^d, g); u is the quotient of g by r.
inline Preparation weierstrass_prepare(const PSeries& g, const ContractionOptions& opt = {}, const Truncation& tr = {})
{
    const std::size_t d = pseudo_degree(g);
    if (d == 0)
        return {MonicPoly(Polynomial::constant(ValuedScalar::constant(Rational(1))), Irreducibility::certified_irreducible),
                g, infinity, 0};
    std::vector<ValuedScalar> xd(d + 1);
    xd[d] = ValuedScalar::constant(Rational(1));
    WeierstrassDivision div = weierstrass_divide(PSeries::polynomial(xd), g, opt, tr);

    std::vector<ValuedScalar> rc(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        rc[i] = neg(div.remainder[i]);
        if (rc[i].is_indeterminate())
            throw PrecisionExhausted("contraction reached t^" + to_string(div.floor) + " after " +
                                     std::to_string(div.rounds) + " rounds; coefficient " + std::to_string(i) +
                                     " of the distinguished factor is undetermined");
    }
    rc[d] = ValuedScalar::constant(Rational(1));
    MonicPoly r(Polynomial(std::move(rc)));

    const Rational v = gauss_valuation(g).value;
    PSeries u = detail::cap_precision(divide_monic(g, r, tr).quotient, ext_add(div.floor, ExtRational(v)));
    return {std::move(r), std::move(u), div.floor, div.rounds};
}

// --- Newton refinement -----------------------------------------------------------

struct RootRefinement {
    ValuedScalar root;     // exact approximation
    ExtRational residual;  // lower bound on w(p(root))
    unsigned iterations = 0;
};

// Newton iteration c <- c - p(c)/p'(c) until w(p(c)) >= target or progress stops.
// Working precision never exceeds target, so the root only carries the terms that
// matter at that precision.
inline RootRefinement refine_root(const Polynomial& p, ValuedScalar c, const Rational& target, const Truncation& tr = {})
{
    const Polynomial dp = derivative(p);
    const Truncation etr{ext_min(tr.cap, ExtRational(target)), tr.max_terms};
    ExtRational best = infinity;
    unsigned stalls = 0;
    for (unsigned it = 0;; ++it) {
        ValuedScalar val = evaluate(p, c, etr);
        ExtRational lb = val.valuation_lower_bound();
        if (val.is_zero_at_precision() || !ext_less(lb, ExtRational(target))) return {c, lb, it};
        if (it > 0 && !ext_less(best, lb)) {
            if (++stalls >= 2) return {c, best, it};
        } else {
            stalls = 0;
        }
        best = it == 0 ? lb : ext_max(best, lb);
        ValuedScalar dv = evaluate(dp, c, etr);
        if (dv.is_zero_at_precision()) throw NewtonStall("derivative vanishes at the approximate root");
        const Rational wd = *dv.valuation();
        const Rational wv = *val.valuation();
        const Rational rel = std::max(target - wv, Rational(1));
        const Truncation ctr{ext_min(tr.cap, ExtRational(target - wd)), tr.max_terms};
        ValuedScalar step = mul(val.exact_part(), detail::invert_to(dv, rel, tr), ctr);
        c = sub(c, step, ctr).exact_part();
        if (it > 256) throw NewtonStall("no convergence after 256 iterations");
    }
}

// --- Splitting along the Newton polygon -----------------------------------------

namespace detail {

inline Integer integer_abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline std::vector<Integer> positive_divisors(const Integer& n)
{
    std::vector<Integer> small, large;
    for (Integer k = 1; k * k <= n; ++k) {
        if (n % k == 0) {
            small.push_back(k);
            if (k * k != n) large.push_back(n / k);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

// Nonzero simple rational roots of sum_i coeffs[i] y^i; empty when the
// coefficients are too large to enumerate divisors.
inline std::vector<Rational> simple_rational_roots(std::vector<Rational> coeffs)
{
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    std::size_t low = 0;
    while (low < coeffs.size() && coeffs[low] == 0) ++low;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(low));
    if (coeffs.size() < 2) return {};
    Integer lcm = 1;
    for (const auto& c : coeffs) {
        Integer den = denominator_of(c);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    std::vector<Integer> ints;
    for (const auto& c : coeffs) ints.push_back(numerator_of(c * Rational(lcm)));
    const Integer a0 = integer_abs(ints.front());
    const Integer an = integer_abs(ints.back());
    const Integer limit("1000000000000");
    if (a0 > limit || an > limit) return {};

    auto eval = [](const std::vector<Rational>& cs, const Rational& y) {
        Rational acc = 0;
        for (std::size_t i = cs.size(); i-- > 0;) acc = acc * y + cs[i];
        return acc;
    };
    std::vector<Rational> dcs;
    for (std::size_t i = 1; i < coeffs.size(); ++i) dcs.push_back(coeffs[i] * Rational(static_cast<long>(i)));

    std::vector<Rational> roots;
    for (const auto& p : positive_divisors(a0))
        for (const auto& q : positive_divisors(an))
            for (int sign : {1, -1}) {
                Rational y = Rational(sign) * Rational(p) / Rational(q);
                if (std::find(roots.begin(), roots.end(), y) != roots.end()) continue;
                if (eval(coeffs, y) == 0 && eval(dcs, y) != 0) roots.push_back(y);
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline MonicPoly monic_from(std::vector<ValuedScalar> coeffs, Irreducibility status = Irreducibility::unverified)
{
    coeffs.back() = ValuedScalar::constant(Rational(1));
    return MonicPoly(Polynomial(std::move(coeffs)), status);
}

// q(X) = a^n p(X/a) for monic p of degree n.
inline MonicPoly rescale_monic(const MonicPoly& p, const ValuedScalar& a, const Truncation& tr,
                               Irreducibility status)
{
    const std::size_t n = p.degree();
    std::vector<ValuedScalar> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out[i] = mul(p[i], pow(a, static_cast<unsigned>(n - i), tr), tr);
    return monic_from(std::move(out), status);
}

} // namespace detail

struct SplitOptions {
    Rational target{4};  // precision gained over the circle norm when refining roots
    ContractionOptions contraction{};
};

inline std::vector<MonicPoly> split_factor(const MonicPoly& r, const SplitOptions& opt = {}, const Truncation& tr = {});

namespace detail {

// Factors of a polynomial whose Newton polygon is a single segment of slope s.
inline std::vector<MonicPoly> split_block(const MonicPoly& r, const Rational& s, const SplitOptions& opt,
                                          const Truncation& tr)
{
    const std::size_t n = r.degree();
    if (n == 1) return {MonicPoly(r.poly(), Irreducibility::certified_irreducible)};
    if (denominator_of(s) == Integer(static_cast<long>(n)))
        return {MonicPoly(r.poly(), Irreducibility::certified_irreducible)};

    const Rational w0 = *r[0].valuation();
    std::vector<Rational> residual(n + 1, Rational(0));
    for (std::size_t i = 0; i <= n; ++i) {
        const auto& c = r[i];
        if (c.is_zero_at_precision()) continue;
        if (*c.valuation() == w0 - Rational(static_cast<long>(i)) * s) residual[i] = c.leading_coeff();
    }
    for (const auto& mu : simple_rational_roots(residual)) {
        const Rational norm = *radius_norm(r.poly(), s);
        try {
            RootRefinement ref = refine_root(r.poly(), ValuedScalar::monomial(mu, s), norm + opt.target, tr);
            if (!ext_less(ExtRational(norm), ref.residual)) continue;
            MonicPoly linear(Polynomial::x_minus(ref.root), Irreducibility::certified_irreducible);
            PolyDivision rest = divrem_monic(r.poly(), linear.poly(), tr);
            std::vector<MonicPoly> out{linear};
            for (auto& f : split_factor(monic_from(rest.quotient.coeffs()), opt, tr)) out.push_back(std::move(f));
            return out;
        } catch (const NewtonStall&) {
            continue;
        } catch (const InsufficientPrecision&) {
            continue;
        }
    }
    return {r};
}

} // namespace detail

// Splits r along the slopes of its Newton polygon. Returned factors are ordered
// by increasing root valuation. A block is certified irreducible when it has
// degree 1 or when the denominator of its slope equals its degree; other blocks
// are split further only through simple rational roots of their residual
// polynomial and are otherwise returned whole as unverified.
inline std::vector<MonicPoly> split_factor(const MonicPoly& r, const SplitOptions& opt, const Truncation& tr)
{
    if (r.degree() == 0) return {};
    std::vector<ValuedScalar> coeffs = r.poly().coeffs();
    std::size_t zero_roots = 0;
    while (zero_roots < coeffs.size() - 1 && coeffs[zero_roots].is_exact_zero()) ++zero_roots;

    std::vector<MonicPoly> out;
    if (zero_roots > 0) {
        MonicPoly rest = detail::monic_from(std::vector<ValuedScalar>(coeffs.begin() + static_cast<long>(zero_roots), coeffs.end()));
        out = split_factor(rest, opt, tr);
        MonicPoly x(Polynomial({ValuedScalar(), ValuedScalar::constant(Rational(1))}), Irreducibility::certified_irreducible);
        for (std::size_t k = 0; k < zero_roots; ++k) out.push_back(x);
        return out;
    }

    const NewtonPolygon polygon = newton_polygon(r.poly());
    for (const auto& seg : polygon.segments)
        if (seg.slope <= 0) throw SlopeNotPositive("root valuation " + to_string(seg.slope) + " is not positive");
    if (polygon.segments.size() == 1) return detail::split_block(r, polygon.segments.front().slope, opt, tr);

    // Separate the roots of smallest valuation from the rest by preparing r(aX)
    // with w(a) strictly between the two smallest slopes.
    const Rational sigma = (polygon.segments[0].slope + polygon.segments[1].slope) / 2;
    const ValuedScalar a = ValuedScalar::t_power(sigma);
    const PSeries g = substitute_scale(PSeries::from(r.poly()), a, tr);
    ContractionOptions copt = opt.contraction;
    copt.target = std::max(copt.target, *radius_norm(r.poly(), polygon.segments[0].slope) + opt.target);
    Preparation prep = weierstrass_prepare(g, copt, tr);
    MonicPoly hi = detail::rescale_monic(prep.r, a, tr, Irreducibility::unverified);
    PolyDivision lo = divrem_monic(r.poly(), hi.poly(), tr);

    out = split_factor(detail::monic_from(lo.quotient.coeffs()), opt, tr);
    for (auto& f : split_factor(hi, opt, tr)) out.push_back(std::move(f));

    // Linear factors came through a contraction; polish their roots against r.
    for (auto& f : out) {
        if (f.degree() != 1 || f[0].is_exact_zero()) continue;
        const Rational s = *f[0].valuation();
        const Rational goal = *radius_norm(r.poly(), s) + opt.target;
        try {
            RootRefinement ref = refine_root(r.poly(), neg(f[0]).exact_part(), goal, tr);
            if (!ext_less(ref.residual, ExtRational(goal)))
                f = MonicPoly(Polynomial::x_minus(ref.root), Irreducibility::certified_irreducible);
        } catch (const NewtonStall&) {
        } catch (const InsufficientPrecision&) {
        }
    }
    return out;
}

} // namespace gaussforge
