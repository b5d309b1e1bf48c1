#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "scalar.hpp"
#include "series.hpp"
#include "weierstrass.hpp"

namespace gaussforge {

struct ScaleChoice {
    ValuedScalar a;
    Rational gamma;               // w(a)
    Rational first_slope;         // root valuation of the factor to be extracted
    std::size_t witness_index = 0; // pseudo-degree of f(aX)
    ExtRational next_slope;       // next root valuation below, if any was seen
};

namespace detail {

struct Point {
    std::size_t index;
    Rational value;
    bool virtual_tail;
};

inline std::vector<Point> polygon_points(const PSeries& f)
{
    std::vector<Point> pts;
    for (std::size_t i = 0; i < f.xprec(); ++i) {
        const auto& c = f.coeffs()[i];
        if (c.is_exact_zero()) continue;
        // A coefficient known only mod t^p still bounds the polygon from below.
        if (c.is_indeterminate())
            pts.push_back({i, *c.prec(), true});
        else
            pts.push_back({i, *c.valuation(), false});
    }
    if (!f.is_polynomial() && f.tail().at(f.xprec())) pts.push_back({f.xprec(), *f.tail().at(f.xprec()), true});
    return pts;
}

} // namespace detail

// The scale puts exactly the roots of largest valuation (the first segment of
// the Newton polygon, read from the origin) inside the disc |X| <= |a|, with
// w(a) halfway between that valuation and the next one (or 0). The unknown
// tail enters as a virtual point (xprec, beta + xprec*alpha); if that point
// decides the segment the prefix is too short.
inline ScaleChoice choose_scale(const PSeries& f)
{
    if (f.xprec() == 0 || f.coeffs()[0].is_zero_at_precision())
        throw NoWitnessIndex("constant coefficient is not determined");
    const auto pts = detail::polygon_points(f);
    const Rational v0 = pts.front().value;

    ExtRational s1;
    std::size_t j1 = 0;
    std::size_t pos = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        Rational slope = (v0 - pts[k].value) / Rational(static_cast<long>(pts[k].index));
        if (!s1 || slope >= *s1) {
            s1 = slope;
            j1 = pts[k].index;
            pos = k;
        }
    }
    if (!s1 || *s1 <= 0) throw NoWitnessIndex("no coefficient below the line through the constant term");
    if (pts[pos].virtual_tail)
        throw NoWitnessIndex("the witness index is not determined within xprec " + std::to_string(f.xprec()));

    ExtRational s2;
    for (std::size_t k = pos + 1; k < pts.size(); ++k) {
        Rational slope = (pts[pos].value - pts[k].value) / Rational(static_cast<long>(pts[k].index - j1));
        if (!s2 || slope > *s2) s2 = slope;
    }
    const Rational lower = s2 && *s2 > 0 ? *s2 : Rational(0);
    const Rational gamma = (*s1 + lower) / 2;
    return {ValuedScalar::t_power(gamma), gamma, *s1, j1, s2};
}

struct MinerConfig {
    Truncation tr{Rational(12), default_max_terms}; // cap is the absolute t-precision ceiling
    Rational refine_factor{2};                      // residual target as a multiple of the threshold
    unsigned order_cap = 64;
    unsigned max_attempts = 4;                      // precision doublings for blocks of degree > 1
    Rational quotient_slope{0};                     // root valuations still to be mined are >= this
};

// Valuation of the count-th root, counted from the largest, as far as the
// prefix polygon shows it; 0 when the prefix does not reach that far.
inline Rational future_root_valuation(const PSeries& f, std::size_t count)
{
    std::vector<PolygonVertex> pts;
    for (std::size_t i = 0; i < f.xprec(); ++i) {
        const auto& c = f.coeffs()[i];
        if (c.is_zero_at_precision()) continue;
        pts.push_back({i, *c.valuation()});
    }
    const NewtonPolygon polygon = newton_polygon_of_points(pts);
    std::size_t seen = 0;
    for (auto it = polygon.segments.rbegin(); it != polygon.segments.rend(); ++it) {
        seen += it->length;
        if (it->slope <= 0) break;
        if (seen >= count) return it->slope;
    }
    return Rational(0);
}

struct Extraction {
    MonicPoly q;
    PSeries quotient;
    ScaleChoice scale;
    Rational threshold;        // circle norm of f at the root valuation of q
    ExtRational residual_bound; // remainder of f by q has valuation >= this
    Rational target;
};

namespace detail {

inline Rational residual_target(const PSeries& f, const Rational& s, const MinerConfig& cfg)
{
    const Rational threshold = *radius_norm(f, s);
    ExtRational target = threshold * cfg.refine_factor;
    if (!f.is_polynomial()) target = ext_min(target, ext_add(f.tail().at(f.xprec()), ExtRational(s * Rational(static_cast<long>(f.xprec())))));
    target = ext_min(target, cfg.tr.cap);
    if (!ext_less(ExtRational(threshold), target))
        throw PrecisionExhausted("no room above the threshold t^" + to_string(threshold) + " within t^" + to_string(target));
    return *target;
}

} // namespace detail

// One monic factor of f with roots of the largest valuation, and f divided by it.
inline Extraction extract_factor(const PSeries& f, const MinerConfig& cfg = {})
{
    const ScaleChoice sc = choose_scale(f);
    const PSeries g = substitute_scale(f, sc.a);
    const Rational s = sc.first_slope;
    const Rational target = detail::residual_target(f, s, cfg);
    const Truncation work{ext_min(cfg.tr.cap, ExtRational(target)), cfg.tr.max_terms};

    // Locate at low precision: enough to read the valuation and leading
    // coefficient of every root in the disc.
    Rational locate = Rational(static_cast<long>(sc.witness_index + 1)) * (s - sc.gamma);
    std::optional<Extraction> result;
    for (unsigned attempt = 0; attempt < cfg.max_attempts && !result; ++attempt, locate *= 2) {
        ContractionOptions copt{locate};
        Preparation prep = weierstrass_prepare(g, copt, work);
        std::vector<MonicPoly> blocks = split_factor(prep.r, {locate, copt}, work);
        if (blocks.empty()) throw GuaranteeViolated("preparation produced no factor");
        const MonicPoly& p = blocks.front();
        MonicPoly q = detail::rescale_monic(p, sc.a, work, p.irreducibility());
        if (q.degree() == 1) {
            RootRefinement ref = refine_root(f.prefix_polynomial(), neg(q[0]).exact_part(), target, work);
            q = MonicPoly(Polynomial::x_minus(ref.root), q.irreducibility());
        } else {
            std::vector<ValuedScalar> cs;
            for (const auto& c : q.poly().coeffs()) cs.push_back(c.exact_part());
            q = MonicPoly(Polynomial(std::move(cs)), q.irreducibility());
        }
        try {
            MonicDivision div = divide_monic(f, q, work, cfg.quotient_slope);
            result = Extraction{q, std::move(div.quotient), sc, div.threshold, div.residual_bound, target};
        } catch (const PrecisionExhausted&) {
            if (q.degree() == 1 || attempt + 1 == cfg.max_attempts) throw;
        } catch (const NotDivisible&) {
            if (q.degree() == 1 || attempt + 1 == cfg.max_attempts) throw;
        }
    }

    const Extraction& ex = *result;
    const ExtRational w0 = ex.q.constant_term_valuation();
    if (!ext_less(ExtRational(Rational(0)), w0))
        throw GuaranteeViolated("constant term of the factor is not in m");
    if (ext_less(w0, ExtRational(Rational(static_cast<long>(ex.q.degree())) * sc.gamma)))
        throw GuaranteeViolated("constant term valuation below deg(q)*w(a)");
    for (std::size_t i = 0; i < ex.quotient.xprec(); ++i) {
        const auto& c = ex.quotient.coeffs()[i];
        if (!c.is_zero_at_precision() && !ext_less(ExtRational(Rational(0)), c.valuation()))
            throw GuaranteeViolated("quotient coefficient " + std::to_string(i) + " is not in m");
    }
    return ex;
}

struct OrderResult {
    unsigned order = 0;
    PSeries quotient;
};

// Largest m with q^m | f, by repeated division.
inline OrderResult ord_factor(const PSeries& f, const MonicPoly& q, unsigned cap = 64, const Truncation& tr = {},
                              const Rational& quotient_slope = Rational(0))
{
    OrderResult out{0, f};
    for (;;) {
        try {
            MonicDivision div = divide_monic(out.quotient, q, tr, quotient_slope);
            out.quotient = std::move(div.quotient);
            if (++out.order >= cap) throw CapExceeded("order of the factor reached the cap " + std::to_string(cap));
        } catch (const NotDivisible&) {
            return out;
        }
    }
}

struct MinedFactor {
    MonicPoly q;
    unsigned multiplicity = 1;
    ValuedScalar scale;
    Rational root_valuation;
    Rational threshold;           // circle norm of the input series at root_valuation
    ExtRational residual_bound;   // input series mod q^multiplicity has valuation >= this
    ExtRational constant_term_valuation;
};

struct StepReport {
    std::size_t index;
    Rational root_valuation;
    Rational scale_valuation;
    Rational threshold;
    Rational target;
    ExtRational residual;
    std::size_t xprec_after;
};

struct PrecisionReport {
    std::size_t xprec = 0;
    ExtRational tprec;
    std::size_t max_terms = default_max_terms;
    std::size_t requested = 0;
    std::size_t xprec_estimate = 0;
    std::vector<StepReport> steps;
    std::string shortfall; // empty when every requested factor was mined

    std::string text() const
    {
        std::ostringstream out;
        out << "xprec: " << xprec << "\n";
        out << "tprec: " << to_string(tprec) << "\n";
        out << "max-terms: " << max_terms << "\n";
        out << "requested: " << requested << "\n";
        out << "xprec-estimate: " << xprec_estimate << "\n";
        out << "mined: " << steps.size() << "\n";
        for (const auto& s : steps) {
            out << "step " << s.index << ": root-valuation " << to_string(s.root_valuation) << " scale "
                << to_string(s.scale_valuation) << " threshold " << to_string(s.threshold) << " target "
                << to_string(s.target) << " residual " << to_string(s.residual) << " xprec-left " << s.xprec_after
                << "\n";
        }
        if (!shortfall.empty()) out << "shortfall: " << shortfall << "\n";
        return out.str();
    }
};

struct MiningResult {
    std::vector<MinedFactor> factors;
    PrecisionReport report;
};

// Raised when the budget runs out before `count` factors; carries what was mined.
class MiningExhausted : public PrecisionExhausted {
public:
    MiningExhausted(const std::string& msg, MiningResult partial) : PrecisionExhausted(msg), partial_(std::move(partial)) {}
    const MiningResult& partial() const { return partial_; }

private:
    MiningResult partial_;
};

// A series can be mined when it carries the admissible tag (w(f) = 0 with all
// coefficients in m, which no finite prefix certifies) and no known
// coefficient contradicts it.
inline void check_minable(const PSeries& f)
{
    if (!f.admissible()) throw PreconditionFailed("series is not tagged admissible (w(f) = 0, all f_i in m)");
    for (std::size_t i = 0; i < f.xprec(); ++i) {
        const auto& c = f.coeffs()[i];
        if (c.is_zero_at_precision()) continue;
        if (!ext_less(ExtRational(Rational(0)), c.valuation()))
            throw PreconditionFailed("coefficient " + std::to_string(i) + " is not in m");
    }
    if (!f.is_polynomial() && ext_less(f.tail().beta, ExtRational(Rational(0))))
        throw PreconditionFailed("tail bound allows coefficients outside R");
}

inline MiningResult mine_factors(const PSeries& f, std::size_t count, const MinerConfig& cfg = {})
{
    check_minable(f);
    MiningResult res;
    res.report.xprec = f.xprec();
    res.report.tprec = cfg.tr.cap;
    res.report.max_terms = cfg.tr.max_terms;
    res.report.requested = count;
    // Each factor uses up at least one X-coefficient, and the last one still
    // needs a constant term and a witness index.
    res.report.xprec_estimate = count + 2;
    if (f.xprec() < res.report.xprec_estimate) {
        res.report.shortfall = "xprec " + std::to_string(f.xprec()) + " below the estimate " +
                               std::to_string(res.report.xprec_estimate) + " for " + std::to_string(count) + " factors";
        throw MiningExhausted(res.report.shortfall, res);
    }

    MinerConfig step_cfg = cfg;
    step_cfg.quotient_slope = future_root_valuation(f, count);
    PSeries current = f;
    for (std::size_t k = 0; k < count; ++k) {
        try {
            Extraction ex = extract_factor(current, step_cfg);
            const Truncation work{ext_min(cfg.tr.cap, ExtRational(ex.target)), cfg.tr.max_terms};
            OrderResult extra = ord_factor(ex.quotient, ex.q, cfg.order_cap, work, step_cfg.quotient_slope);
            const unsigned m = extra.order + 1;
            current = std::move(extra.quotient);

            MonicDivision check;
            try {
                // Only the remainder matters here.
                check = divide_monic(f, MonicPoly(pow(ex.q.poly(), m, work)), work, ex.scale.first_slope);
            } catch (const NotDivisible& e) {
                throw GuaranteeViolated(std::string("mined factor does not divide the input: ") + e.what());
            }
            MinedFactor mf{ex.q, m, ex.scale.a, ex.scale.first_slope, check.threshold, check.residual_bound,
                           ex.q.constant_term_valuation()};
            res.factors.push_back(mf);
            res.report.steps.push_back({k + 1, ex.scale.first_slope, ex.scale.gamma, ex.threshold, ex.target,
                                        ex.residual_bound, current.xprec()});
        } catch (const GuaranteeViolated&) {
            throw;
        } catch (const CapExceeded&) {
            throw;
        } catch (const error& e) {
            // Everything else at this point traces back to too little precision.
            res.report.shortfall = "factor " + std::to_string(k + 1) + ": " + e.what();
            throw MiningExhausted("mined " + std::to_string(res.factors.size()) + " of " + std::to_string(count) +
                                      " factors; " + res.report.shortfall,
                                  res);
        }
    }
    return res;
}

} // namespace gaussforge
