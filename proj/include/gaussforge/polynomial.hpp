#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "scalar.hpp"

namespace gaussforge {

// Dense polynomial over ValuedScalar, lowest degree first. Trailing exact
// zeros are stripped; an inexact top coefficient is kept.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<ValuedScalar> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

    static Polynomial constant(ValuedScalar c) { return Polynomial({std::move(c)}); }
    static Polynomial x_minus(const ValuedScalar& c)
    {
        return Polynomial({neg(c), ValuedScalar::constant(Rational(1))});
    }

    const std::vector<ValuedScalar>& coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }
    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    const ValuedScalar& operator[](std::size_t i) const
    {
        static const ValuedScalar zero;
        return i < coeffs_.size() ? coeffs_[i] : zero;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void strip()
    {
        while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
    }

    std::vector<ValuedScalar> coeffs_;
};

inline Polynomial add(const Polynomial& p, const Polynomial& q, const Truncation& tr = {})
{
    std::vector<ValuedScalar> out(std::max(p.size(), q.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = add(p[i], q[i], tr);
    return Polynomial(std::move(out));
}

inline Polynomial neg(const Polynomial& p)
{
    std::vector<ValuedScalar> out;
    out.reserve(p.size());
    for (const auto& c : p.coeffs()) out.push_back(neg(c));
    return Polynomial(std::move(out));
}

inline Polynomial sub(const Polynomial& p, const Polynomial& q, const Truncation& tr = {})
{
    return add(p, neg(q), tr);
}

inline Polynomial mul(const Polynomial& p, const Polynomial& q, const Truncation& tr = {})
{
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<ValuedScalar> out(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] = add(out[i + j], mul(p[i], q[j], tr), tr);
    // A product of monic polynomials stays exactly monic under truncation.
    const ValuedScalar one = ValuedScalar::constant(Rational(1));
    if (p.coeffs().back() == one && q.coeffs().back() == one) out.back() = one;
    return Polynomial(std::move(out));
}

inline Polynomial scale(const Polynomial& p, const ValuedScalar& c, const Truncation& tr = {})
{
    std::vector<ValuedScalar> out;
    out.reserve(p.size());
    for (const auto& a : p.coeffs()) out.push_back(mul(a, c, tr));
    return Polynomial(std::move(out));
}

inline Polynomial pow(const Polynomial& p, unsigned n, const Truncation& tr = {})
{
    Polynomial result = Polynomial::constant(ValuedScalar::constant(Rational(1)));
    for (unsigned k = 0; k < n; ++k) result = mul(result, p, tr);
    return result;
}

namespace detail {

// Cap for a partial result that is later multiplied by x^i: with w(x) = v > 0,
// knowing it mod t^(cap - i*v) is enough to know the total mod t^cap.
inline Truncation shifted_cap(const Truncation& tr, const ExtRational& v, std::size_t i)
{
    if (is_infinite(tr.cap) || !v || *v <= 0) return tr;
    return {*tr.cap - *v * Rational(static_cast<long>(i)), tr.max_terms};
}

} // namespace detail

// Horner evaluation. Under a finite cap the partial sums are truncated by
// degree, so the result is still known mod t^cap.
inline ValuedScalar evaluate(const Polynomial& p, const ValuedScalar& x, const Truncation& tr = {})
{
    const ExtRational v = x.is_zero_at_precision() ? ExtRational() : x.valuation();
    ValuedScalar acc;
    for (std::size_t i = p.size(); i-- > 0;) {
        const Truncation step = detail::shifted_cap(tr, v, i);
        acc = add(mul(acc, x, step), p[i], step);
    }
    return acc;
}

inline Polynomial derivative(const Polynomial& p)
{
    std::vector<ValuedScalar> out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(scale(p[i], Rational(static_cast<long>(i))));
    return Polynomial(std::move(out));
}

struct PolyDivision {
    Polynomial quotient;
    Polynomial remainder;
};

// Euclidean division by a polynomial whose leading coefficient is exactly 1.
// No scalar is ever inverted, so no precision is lost. With a finite cap C and
// quotient_slope s > 0, quotient coefficient j is only kept mod t^(C - j*s),
// which is what evaluation at points of valuation >= s needs.
inline PolyDivision divrem_monic(const Polynomial& a, const Polynomial& q, const Truncation& tr = {},
                                 const Rational& quotient_slope = Rational(0))
{
    const long n = q.degree();
    if (n < 0 || !(q[static_cast<std::size_t>(n)] == ValuedScalar::constant(Rational(1))))
        throw PreconditionFailed("divisor must be monic");
    std::vector<ValuedScalar> rem = a.coeffs();
    if (a.degree() < n) return {Polynomial(), a};
    std::vector<ValuedScalar> quot(static_cast<std::size_t>(a.degree() - n + 1));
    for (long k = a.degree(); k >= n; --k) {
        ValuedScalar lead = rem[static_cast<std::size_t>(k)];
        quot[static_cast<std::size_t>(k - n)] = lead;
        if (lead.is_exact_zero()) continue;
        for (long j = 0; j < n; ++j) {
            const long i = k - n + j;
            const Truncation slot_tr = i > n ? detail::shifted_cap(tr, quotient_slope, static_cast<std::size_t>(i - n)) : tr;
            auto& slot = rem[static_cast<std::size_t>(i)];
            slot = sub(slot, mul(lead, q[static_cast<std::size_t>(j)], slot_tr), slot_tr);
        }
        rem[static_cast<std::size_t>(k)] = ValuedScalar();
    }
    rem.resize(static_cast<std::size_t>(n));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

inline std::string to_string(const Polynomial& p)
{
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_exact_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + to_string(p[i]) + ")";
        if (i == 1) out += "*X";
        if (i > 1) out += "*X^" + std::to_string(i);
    }
    return out;
}

// --- Newton polygons -------------------------------------------------------

struct PolygonSegment {
    Rational slope; // common valuation of the roots on this segment
    std::size_t length;

    friend bool operator==(const PolygonSegment&, const PolygonSegment&) = default;
};

struct PolygonVertex {
    std::size_t index;
    Rational valuation;

    friend bool operator==(const PolygonVertex&, const PolygonVertex&) = default;
};

// Lower convex hull of {(i, w(a_i))}. Vertices run left to right; segments are
// listed by strictly increasing slope (right to left along the hull). The slope
// of a segment is the valuation of the roots it accounts for.
struct NewtonPolygon {
    std::vector<PolygonVertex> vertices;
    std::vector<PolygonSegment> segments;
};

inline NewtonPolygon newton_polygon_of_points(const std::vector<PolygonVertex>& points)
{
    NewtonPolygon poly;
    auto& hull = poly.vertices;
    for (const auto& p : points) {
        // Pop while the last vertex is on or above the chord from its predecessor to p.
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            Rational lhs = (b.valuation - a.valuation) * Rational(static_cast<long>(p.index - a.index));
            Rational rhs = (p.valuation - a.valuation) * Rational(static_cast<long>(b.index - a.index));
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    for (std::size_t k = hull.size(); k-- > 1;) {
        const auto& a = hull[k - 1];
        const auto& b = hull[k];
        poly.segments.push_back({(a.valuation - b.valuation) / Rational(static_cast<long>(b.index - a.index)),
                                 b.index - a.index});
    }
    return poly;
}

inline NewtonPolygon newton_polygon(const Polynomial& p)
{
    std::vector<PolygonVertex> points;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_exact_zero()) continue;
        ExtRational v = p[i].valuation();
        points.push_back({i, *v});
    }
    return newton_polygon_of_points(points);
}

inline std::string to_string(const NewtonPolygon& poly)
{
    std::string out;
    for (const auto& v : poly.vertices) {
        if (!out.empty()) out += " ";
        out += "(" + std::to_string(v.index) + ", " + to_string(v.valuation) + ")";
    }
    return out;
}

// --- Monic polynomials -----------------------------------------------------

enum class Irreducibility { certified_irreducible, unverified };

inline std::string to_string(Irreducibility s)
{
    return s == Irreducibility::certified_irreducible ? "certified-irreducible" : "unverified";
}

// Monic polynomial in R[X]: leading coefficient the exact scalar 1, every other
// coefficient of valuation >= 0.
class MonicPoly {
public:
    MonicPoly() = default;

    explicit MonicPoly(Polynomial poly, Irreducibility status = Irreducibility::unverified)
        : poly_(std::move(poly)), status_(status)
    {
        if (poly_.degree() < 0 || !(poly_[poly_.size() - 1] == ValuedScalar::constant(Rational(1))))
            throw PreconditionFailed("leading coefficient must be exactly 1");
        for (std::size_t i = 0; i + 1 < poly_.size(); ++i) {
            const auto& c = poly_[i];
            if (!c.is_zero_at_precision() && ext_less(c.valuation(), ExtRational(Rational(0))))
                throw PreconditionFailed("coefficient " + std::to_string(i) + " lies outside R");
        }
    }

    const Polynomial& poly() const { return poly_; }
    std::size_t degree() const { return poly_.size() - 1; }
    Irreducibility irreducibility() const { return status_; }
    const ValuedScalar& operator[](std::size_t i) const { return poly_[i]; }

    ExtRational constant_term_valuation() const { return poly_[0].valuation(); }

    // Every non-leading coefficient lies in m, i.e. all roots have positive valuation.
    bool roots_in_maximal_ideal() const
    {
        for (std::size_t i = 0; i + 1 < poly_.size(); ++i) {
            const auto& c = poly_[i];
            if (c.is_exact_zero()) continue;
            if (!ext_less(ExtRational(Rational(0)), c.valuation_lower_bound())) return false;
        }
        return true;
    }

    // Smallest root valuation, read off the Newton polygon.
    Rational min_root_valuation() const
    {
        NewtonPolygon polygon = newton_polygon(poly_);
        if (polygon.segments.empty()) throw PreconditionFailed("constant polynomial has no roots");
        return polygon.segments.front().slope;
    }

    friend bool operator==(const MonicPoly& a, const MonicPoly& b) { return a.poly_ == b.poly_; }

private:
    Polynomial poly_;
    Irreducibility status_ = Irreducibility::unverified;
};

} // namespace gaussforge
