#pragma once

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include "errors.hpp"
#include "miner.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "scalar.hpp"
#include "series.hpp"

namespace gaussforge {

// --- Digest -------------------------------------------------------------------

inline std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw error("sha256 digest failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

inline std::string series_digest(const PSeries& f) { return "sha256:" + sha256_hex(write_series(f)); }

// --- Coprimality witnesses -------------------------------------------------------

struct CoprimalityWitness {
    Polynomial r;
    Polynomial s;
    ValuedScalar d;
    ExtRational residual_bound; // r*p + s*q - d has valuation >= this coefficientwise

    friend bool operator==(const CoprimalityWitness&, const CoprimalityWitness&) = default;
};

inline ExtRational coefficient_floor(const Polynomial& p)
{
    ExtRational out = infinity;
    for (const auto& c : p.coeffs()) out = ext_min(out, c.valuation_lower_bound());
    return out;
}

// r*p + s*q = d with d a nonzero constant, by pseudo-division so that nothing
// is inverted and r, s stay in R[X]. The sign is fixed so that d has a
// positive leading coefficient.
inline CoprimalityWitness coprimality_witness(const Polynomial& p, const Polynomial& q, const Truncation& tr = {})
{
    if (p.is_zero() || q.is_zero()) throw NotCoprime("zero polynomial");
    const Polynomial one = Polynomial::constant(ValuedScalar::constant(Rational(1)));
    // Invariant: a = ra*p + sa*q, b = rb*p + sb*q.
    Polynomial a = p, ra = one, sa;
    Polynomial b = q, rb, sb = one;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        std::swap(ra, rb);
        std::swap(sa, sb);
    }
    while (b.degree() > 0) {
        // Pseudo-remainder step: a <- lc(b)*a - lc(a)*X^k*b until deg a < deg b.
        while (!a.is_zero() && a.degree() >= b.degree()) {
            const std::size_t k = static_cast<std::size_t>(a.degree() - b.degree());
            const ValuedScalar la = a[static_cast<std::size_t>(a.degree())];
            const ValuedScalar lb = b[static_cast<std::size_t>(b.degree())];
            std::vector<ValuedScalar> mono(k + 1);
            mono[k] = la;
            const Polynomial m(mono);
            a = sub(scale(a, lb, tr), mul(m, b, tr), tr);
            ra = sub(scale(ra, lb, tr), mul(m, rb, tr), tr);
            sa = sub(scale(sa, lb, tr), mul(m, sb, tr), tr);
            // The top coefficient cancels by construction, even when only up to
            // precision; the final residual accounts for it.
            std::vector<ValuedScalar> cs = a.coeffs();
            cs.resize(std::min(cs.size(), k + static_cast<std::size_t>(b.degree())));
            while (!cs.empty() && cs.back().is_zero_at_precision()) cs.pop_back();
            a = Polynomial(std::move(cs));
        }
        if (a.is_zero()) throw NotCoprime("a remainder is indistinguishable from zero");
        std::swap(a, b);
        std::swap(ra, rb);
        std::swap(sa, sb);
    }
    if (b.is_zero() || b[0].is_zero_at_precision()) throw NotCoprime("final remainder is indistinguishable from zero");
    ValuedScalar d = b[0];
    if (d.leading_coeff() < 0) {
        d = neg(d);
        rb = neg(rb);
        sb = neg(sb);
    }
    const Polynomial residual = sub(add(mul(rb, p, tr), mul(sb, q, tr), tr), Polynomial::constant(d), tr);
    return {rb, sb, d, coefficient_floor(residual)};
}

// --- Certificate -----------------------------------------------------------------

struct CertifiedFactor {
    MonicPoly q;
    unsigned multiplicity = 1;
    ValuedScalar scale;
    Rational root_valuation;
    Rational threshold;
    ExtRational residual_bound;
    ExtRational constant_term_valuation;
};

struct WitnessEntry {
    std::size_t i = 0; // 1-based factor indices, i < j
    std::size_t j = 0;
    CoprimalityWitness w;
};

struct FactorCertificate {
    std::string digest;
    std::size_t xprec = 0;
    TailBound tail;
    bool admissible = false;
    std::size_t requested = 0;
    bool complete = true;
    std::vector<CertifiedFactor> factors;
    std::vector<WitnessEntry> witnesses;
    std::vector<unsigned> orders;
    std::vector<std::pair<std::string, std::string>> precision; // report lines, in order
};

namespace detail {

inline std::vector<std::pair<std::string, std::string>> key_values(const std::string& text)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);
        out.emplace_back(line.substr(0, colon), value);
    }
    return out;
}

} // namespace detail

inline FactorCertificate build_certificate(const PSeries& f, const MiningResult& mined, const MinerConfig& cfg = {})
{
    FactorCertificate cert;
    cert.digest = series_digest(f);
    cert.xprec = f.xprec();
    cert.tail = f.tail();
    cert.admissible = f.admissible();
    cert.requested = mined.report.requested;
    cert.complete = mined.report.shortfall.empty();
    for (const auto& m : mined.factors)
        cert.factors.push_back({m.q, m.multiplicity, m.scale, m.root_valuation, m.threshold, m.residual_bound,
                                m.constant_term_valuation});
    for (std::size_t i = 0; i < cert.factors.size(); ++i)
        for (std::size_t j = i + 1; j < cert.factors.size(); ++j)
            cert.witnesses.push_back({i + 1, j + 1, coprimality_witness(cert.factors[i].q.poly(), cert.factors[j].q.poly())});
    for (const auto& cf : cert.factors) {
        const Truncation work{ext_min(cfg.tr.cap, cf.residual_bound), cfg.tr.max_terms};
        cert.orders.push_back(ord_factor(f, cf.q, cfg.order_cap, work, cf.root_valuation).order);
    }
    cert.precision = detail::key_values(mined.report.text());
    return cert;
}

// --- File format -----------------------------------------------------------------

namespace detail {

inline void write_poly_lines(std::ostringstream& out, const std::string& key, const Polynomial& p)
{
    out << key << "-degree: " << p.degree() << "\n";
    for (std::size_t i = 0; i < p.size(); ++i) out << key << " " << i << ": " << to_string(p[i]) << "\n";
}

} // namespace detail

inline std::string write_certificate(const FactorCertificate& c)
{
    std::ostringstream out;
    out << "# factor certificate\n";
    out << "[input]\n";
    out << "digest: " << c.digest << "\n";
    out << "xprec: " << c.xprec << "\n";
    out << "tail: " << to_string(c.tail.alpha) << " " << to_string(c.tail.beta) << "\n";
    out << "admissible: " << (c.admissible ? "yes" : "no") << "\n";
    out << "requested: " << c.requested << "\n";
    out << "complete: " << (c.complete ? "yes" : "no") << "\n";
    out << "factor-count: " << c.factors.size() << "\n";
    for (std::size_t k = 0; k < c.factors.size(); ++k) {
        const auto& f = c.factors[k];
        out << "\n[factor " << k + 1 << "]\n";
        detail::write_poly_lines(out, "coeff", f.q.poly());
        out << "multiplicity: " << f.multiplicity << "\n";
        out << "irreducibility: " << to_string(f.q.irreducibility()) << "\n";
        out << "scale: " << to_string(f.scale) << "\n";
        out << "root-valuation: " << to_string(f.root_valuation) << "\n";
        out << "threshold: " << to_string(f.threshold) << "\n";
        out << "residual-bound: " << to_string(f.residual_bound) << "\n";
        out << "constant-term-valuation: " << to_string(f.constant_term_valuation) << "\n";
    }
    for (const auto& w : c.witnesses) {
        out << "\n[witness " << w.i << " " << w.j << "]\n";
        detail::write_poly_lines(out, "r", w.w.r);
        detail::write_poly_lines(out, "s", w.w.s);
        out << "d: " << to_string(w.w.d) << "\n";
        out << "residual-bound: " << to_string(w.w.residual_bound) << "\n";
    }
    out << "\n[orders]\n";
    for (std::size_t k = 0; k < c.orders.size(); ++k) out << k + 1 << ": " << c.orders[k] << "\n";
    out << "\n[precision]\n";
    for (const auto& [k, v] : c.precision) out << k << ": " << v << "\n";
    return out.str();
}

namespace detail {

struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const
    {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
    const std::string& need(const std::string& key) const
    {
        const std::string* v = find(key);
        if (!v) throw IncompleteCertificate("section [" + name + "] lacks '" + key + "'");
        return *v;
    }
};

inline std::vector<Section> parse_sections(std::string_view text)
{
    std::vector<Section> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": bad section header");
            out.push_back({line.substr(1, line.size() - 2), {}});
            continue;
        }
        if (out.empty()) throw ParseError("line " + std::to_string(lineno) + ": entry outside a section");
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": missing ':'");
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);
        out.back().entries.emplace_back(line.substr(0, colon), value);
    }
    return out;
}

inline std::size_t parse_count(const std::string& s)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad count '" + s + "'");
    return std::stoul(s);
}

inline ExtRational parse_ext(const std::string& s) { return s == "inf" ? infinity : ExtRational(parse_rational(s)); }

inline bool parse_flag(const std::string& s)
{
    if (s == "yes") return true;
    if (s == "no") return false;
    throw ParseError("expected yes/no, got '" + s + "'");
}

inline Polynomial read_poly(const Section& sec, const std::string& key)
{
    const std::string& deg_text = sec.need(key + "-degree");
    long deg = deg_text == "-1" ? -1 : static_cast<long>(parse_count(deg_text));
    std::vector<ValuedScalar> cs;
    for (long i = 0; i <= deg; ++i) cs.push_back(parse_scalar(sec.need(key + " " + std::to_string(i))));
    Polynomial p(std::move(cs));
    if (p.degree() != deg) throw ParseError("section [" + sec.name + "]: " + key + " has a zero top coefficient");
    return p;
}

inline std::vector<std::string> split_words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

} // namespace detail

inline FactorCertificate parse_certificate(std::string_view text)
{
    const auto sections = detail::parse_sections(text);
    FactorCertificate c;
    bool have_input = false, have_orders = false;
    std::size_t factor_count = 0;
    for (const auto& sec : sections) {
        const auto words = detail::split_words(sec.name);
        if (words.empty()) throw ParseError("empty section name");
        if (words[0] == "input") {
            have_input = true;
            c.digest = sec.need("digest");
            c.xprec = detail::parse_count(sec.need("xprec"));
            auto tw = detail::split_words(sec.need("tail"));
            if (tw.size() != 2) throw ParseError("tail needs two values");
            c.tail = {parse_rational(tw[0]), detail::parse_ext(tw[1])};
            c.admissible = detail::parse_flag(sec.need("admissible"));
            c.requested = detail::parse_count(sec.need("requested"));
            c.complete = detail::parse_flag(sec.need("complete"));
            factor_count = detail::parse_count(sec.need("factor-count"));
        } else if (words[0] == "factor" && words.size() == 2) {
            if (detail::parse_count(words[1]) != c.factors.size() + 1) throw ParseError("factor sections out of order");
            const std::string& status = sec.need("irreducibility");
            Irreducibility irr;
            if (status == "certified-irreducible")
                irr = Irreducibility::certified_irreducible;
            else if (status == "unverified")
                irr = Irreducibility::unverified;
            else
                throw ParseError("unknown irreducibility '" + status + "'");
            CertifiedFactor f;
            f.q = MonicPoly(detail::read_poly(sec, "coeff"), irr);
            f.multiplicity = static_cast<unsigned>(detail::parse_count(sec.need("multiplicity")));
            f.scale = parse_scalar(sec.need("scale"));
            f.root_valuation = parse_rational(sec.need("root-valuation"));
            f.threshold = parse_rational(sec.need("threshold"));
            f.residual_bound = detail::parse_ext(sec.need("residual-bound"));
            f.constant_term_valuation = detail::parse_ext(sec.need("constant-term-valuation"));
            c.factors.push_back(std::move(f));
        } else if (words[0] == "witness" && words.size() == 3) {
            WitnessEntry w;
            w.i = detail::parse_count(words[1]);
            w.j = detail::parse_count(words[2]);
            w.w.r = detail::read_poly(sec, "r");
            w.w.s = detail::read_poly(sec, "s");
            w.w.d = parse_scalar(sec.need("d"));
            w.w.residual_bound = detail::parse_ext(sec.need("residual-bound"));
            c.witnesses.push_back(std::move(w));
        } else if (words[0] == "orders") {
            have_orders = true;
            for (std::size_t k = 0; k < sec.entries.size(); ++k) {
                if (detail::parse_count(sec.entries[k].first) != k + 1) throw ParseError("orders out of sequence");
                c.orders.push_back(static_cast<unsigned>(detail::parse_count(sec.entries[k].second)));
            }
        } else if (words[0] == "precision") {
            c.precision = sec.entries;
        } else {
            throw ParseError("unknown section [" + sec.name + "]");
        }
    }
    if (!have_input) throw IncompleteCertificate("missing [input] section");
    if (!have_orders) throw IncompleteCertificate("missing [orders] section");
    if (c.factors.size() != factor_count)
        throw IncompleteCertificate("factor-count says " + std::to_string(factor_count) + ", found " +
                                    std::to_string(c.factors.size()));
    return c;
}

// --- Verification ----------------------------------------------------------------

struct Obligation {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<Obligation> obligations;

    bool ok() const
    {
        for (const auto& o : obligations)
            if (!o.passed) return false;
        return !obligations.empty();
    }
    std::string text() const
    {
        std::ostringstream out;
        for (const auto& o : obligations)
            out << (o.passed ? "ok   " : "FAIL ") << o.name << (o.detail.empty() ? "" : ": " + o.detail) << "\n";
        return out.str();
    }
};

// Re-checks every claim of the certificate against f from scratch. Throws
// DigestMismatch when the certificate was made for a different series.
inline VerificationReport verify_certificate(const PSeries& f, const FactorCertificate& c, const MinerConfig& cfg = {})
{
    const std::string digest = series_digest(f);
    if (digest != c.digest) throw DigestMismatch("certificate digest " + c.digest + " does not match input " + digest);

    VerificationReport rep;
    auto record = [&](std::string name, bool ok, std::string detail = {}) {
        rep.obligations.push_back({std::move(name), ok, std::move(detail)});
    };

    record("input-shape", c.xprec == f.xprec() && c.tail == f.tail() && c.admissible == f.admissible());
    record("factor-count", !c.factors.empty(), std::to_string(c.factors.size()) + " factors");

    for (std::size_t k = 0; k < c.factors.size(); ++k) {
        const auto& cf = c.factors[k];
        const std::string tag = "factor " + std::to_string(k + 1);
        const MonicPoly& q = cf.q;

        bool integral = true;
        for (std::size_t i = 0; i + 1 < q.poly().size(); ++i)
            if (!q[i].is_zero_at_precision() && ext_less(q[i].valuation(), ExtRational(Rational(0)))) integral = false;
        record(tag + " monic-in-R", integral);

        const ExtRational w0 = q[0].is_zero_at_precision() ? ExtRational() : q[0].valuation();
        record(tag + " constant-term-in-m", ext_less(ExtRational(Rational(0)), w0) && w0 == cf.constant_term_valuation,
               "valuation " + to_string(w0));

        bool slope_ok = false;
        try {
            slope_ok = q.roots_in_maximal_ideal() && q.min_root_valuation() == cf.root_valuation;
        } catch (const error&) {
        }
        record(tag + " root-valuation", slope_ok, to_string(cf.root_valuation));

        bool divides = false;
        std::string why;
        try {
            const ExtRational threshold = radius_norm(f, cf.root_valuation);
            if (threshold != ExtRational(cf.threshold)) {
                why = "threshold recomputes to " + to_string(threshold);
            } else if (!ext_less(threshold, cf.residual_bound)) {
                why = "residual bound does not clear the threshold";
            } else {
                const Truncation work{ext_min(cfg.tr.cap, cf.residual_bound), cfg.tr.max_terms};
                const MonicPoly qm(pow(q.poly(), cf.multiplicity, work));
                MonicDivision div = divide_monic(f, qm, work, cf.root_valuation);
                divides = ext_less_equal(cf.residual_bound, div.residual_bound);
                why = "remainder >= t^" + to_string(div.residual_bound) + ", threshold " + to_string(div.threshold);
            }
        } catch (const error& e) {
            why = e.what();
        }
        record(tag + " divides", divides, why);
    }

    std::map<std::pair<std::size_t, std::size_t>, const WitnessEntry*> by_pair;
    for (const auto& w : c.witnesses) by_pair[{w.i, w.j}] = &w;
    for (std::size_t i = 1; i <= c.factors.size(); ++i) {
        for (std::size_t j = i + 1; j <= c.factors.size(); ++j) {
            const std::string tag = "witness " + std::to_string(i) + " " + std::to_string(j);
            auto it = by_pair.find({i, j});
            if (it == by_pair.end()) {
                record(tag, false, "missing");
                continue;
            }
            const CoprimalityWitness& w = it->second->w;
            const Polynomial& p = c.factors[i - 1].q.poly();
            const Polynomial& q = c.factors[j - 1].q.poly();
            bool integral = true;
            for (const auto* poly : {&w.r, &w.s})
                for (const auto& x : poly->coeffs())
                    if (!x.is_zero_at_precision() && ext_less(x.valuation(), ExtRational(Rational(0)))) integral = false;
            const bool d_ok = !w.d.is_zero_at_precision() && w.d.in_valuation_ring();
            const Polynomial residual = sub(add(mul(w.r, p), mul(w.s, q)), Polynomial::constant(w.d));
            const ExtRational floor = coefficient_floor(residual);
            const bool identity = ext_less_equal(w.residual_bound, floor) && ext_less(w.d.valuation(), w.residual_bound);
            record(tag, integral && d_ok && identity,
                   "d valuation " + to_string(w.d.is_zero_at_precision() ? ExtRational() : w.d.valuation()) +
                       ", residual >= t^" + to_string(floor));
        }
    }

    bool orders_ok = c.orders.size() == c.factors.size();
    std::string orders_detail;
    for (std::size_t k = 0; orders_ok && k < c.factors.size(); ++k) {
        const auto& cf = c.factors[k];
        try {
            const Truncation work{ext_min(cfg.tr.cap, cf.residual_bound), cfg.tr.max_terms};
            unsigned m = ord_factor(f, cf.q, cfg.order_cap, work, cf.root_valuation).order;
            if (m != c.orders[k] || m != cf.multiplicity) {
                orders_ok = false;
                orders_detail = "factor " + std::to_string(k + 1) + " has order " + std::to_string(m);
            }
        } catch (const error& e) {
            orders_ok = false;
            orders_detail = e.what();
        }
    }
    record("orders", orders_ok, orders_detail);
    return rep;
}

} // namespace gaussforge
