#include <gtest/gtest.h>

#include "gaussforge/certificate.hpp"

using namespace gaussforge;

namespace {

ValuedScalar S(const char* text) { return parse_scalar(text); }
Rational Q(long n, long d = 1) { return make_rational(n, d); }

Polynomial P(std::initializer_list<const char*> coeffs)
{
    std::vector<ValuedScalar> c;
    for (const char* x : coeffs) c.push_back(S(x));
    return Polynomial(std::move(c));
}

const Obligation* find_obligation(const VerificationReport& rep, const std::string& name)
{
    for (const auto& o : rep.obligations)
        if (o.name == name) return &o;
    return nullptr;
}

struct Mined {
    PSeries f;
    MinerConfig cfg;
    FactorCertificate cert;
};

const Mined& three_factor_mine()
{
    static const Mined m = [] {
        Mined out{PSeries::canonical_witness(16), MinerConfig{}, {}};
        out.cert = build_certificate(out.f, mine_factors(out.f, 3, out.cfg), out.cfg);
        return out;
    }();
    return m;
}

} // namespace

TEST(Digest, KnownVector)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Digest, DependsOnSeries)
{
    EXPECT_EQ(series_digest(PSeries::canonical_witness(8)), series_digest(PSeries::canonical_witness(8)));
    EXPECT_NE(series_digest(PSeries::canonical_witness(8)), series_digest(PSeries::canonical_witness(9)));
    EXPECT_EQ(series_digest(PSeries::canonical_witness(8)).rfind("sha256:", 0), 0u);
}

TEST(CoprimalityWitness, OppositeRoots)
{
    const CoprimalityWitness w = coprimality_witness(P({"-t", "1"}), P({"t", "1"}));
    EXPECT_EQ(w.r, P({"-1"}));
    EXPECT_EQ(w.s, P({"1"}));
    EXPECT_EQ(w.d, S("2*t"));
    EXPECT_TRUE(is_infinite(w.residual_bound));
}

TEST(CoprimalityWitness, DifferenceOfRootsDominates)
{
    const Polynomial p = P({"-t", "1"});
    const Polynomial q = P({"-t^(1/2)", "1"});
    const CoprimalityWitness w = coprimality_witness(p, q);
    EXPECT_EQ(w.d.valuation(), ExtRational(Q(1, 2)));
    // oracle: r p + s q - d recomputed here
    const Polynomial lhs = add(mul(w.r, p), mul(w.s, q));
    EXPECT_EQ(lhs, Polynomial::constant(w.d));
}

TEST(CoprimalityWitness, Quadratics)
{
    const Polynomial p = P({"t^3", "-t - t^2", "1"});
    const Polynomial q = P({"-t^(1/2)", "0", "1"});
    const CoprimalityWitness w = coprimality_witness(p, q);
    EXPECT_FALSE(w.d.is_zero_at_precision());
    EXPECT_EQ(add(mul(w.r, p), mul(w.s, q)), Polynomial::constant(w.d));
    EXPECT_TRUE(ext_less_equal(Q(0), coefficient_floor(w.r)));
    EXPECT_TRUE(ext_less_equal(Q(0), coefficient_floor(w.s)));
}

TEST(CoprimalityWitness, SharedFactor)
{
    EXPECT_THROW(coprimality_witness(P({"-t", "1"}), P({"-t", "1"})), NotCoprime);
    const Polynomial p = mul(P({"-t", "1"}), P({"-t^2", "1"}));
    EXPECT_THROW(coprimality_witness(p, P({"-t", "1"})), NotCoprime);
}

TEST(Certificate, TwoFactors)
{
    const PSeries f = PSeries::canonical_witness(16);
    const FactorCertificate c = build_certificate(f, mine_factors(f, 2));
    EXPECT_EQ(c.factors.size(), 2u);
    EXPECT_EQ(c.witnesses.size(), 1u);
    ASSERT_EQ(c.orders.size(), 2u);
    for (unsigned o : c.orders) EXPECT_GE(o, 1u);
    EXPECT_TRUE(c.complete);
}

TEST(Certificate, VerifiesAndRoundTrips)
{
    const Mined& m = three_factor_mine();
    EXPECT_EQ(m.cert.witnesses.size(), 3u);
    const std::string text = write_certificate(m.cert);
    const FactorCertificate back = parse_certificate(text);
    EXPECT_EQ(write_certificate(back), text);
    const VerificationReport rep = verify_certificate(m.f, back, m.cfg);
    EXPECT_TRUE(rep.ok()) << rep.text();
}

TEST(Certificate, SwappedInput)
{
    const Mined& m = three_factor_mine();
    EXPECT_THROW(verify_certificate(PSeries::canonical_witness(17), m.cert, m.cfg), DigestMismatch);
}

TEST(Certificate, LargeConstantTermFails)
{
    const Mined& m = three_factor_mine();
    FactorCertificate bad = m.cert;
    std::vector<ValuedScalar> c = bad.factors[1].q.poly().coeffs();
    c[0] = S("1 + t");
    bad.factors[1].q = MonicPoly(Polynomial(c));
    const VerificationReport rep = verify_certificate(m.f, bad, m.cfg);
    EXPECT_FALSE(rep.ok());
    const Obligation* small = find_obligation(rep, "factor 2 constant-term-in-m");
    ASSERT_NE(small, nullptr) << rep.text();
    EXPECT_FALSE(small->passed);
}

TEST(Certificate, InflatedResidualFails)
{
    const Mined& m = three_factor_mine();
    FactorCertificate bad = m.cert;
    bad.factors[0].residual_bound = Rational(100);
    EXPECT_FALSE(verify_certificate(m.f, bad, m.cfg).ok());
}

TEST(Certificate, TamperedWitnessFails)
{
    const Mined& m = three_factor_mine();
    FactorCertificate bad = m.cert;
    bad.witnesses[0].w.d = add(bad.witnesses[0].w.d, S("t^(1/7)"));
    EXPECT_FALSE(verify_certificate(m.f, bad, m.cfg).ok());
}

TEST(Certificate, WrongOrderFails)
{
    const Mined& m = three_factor_mine();
    FactorCertificate bad = m.cert;
    bad.orders[2] = 2;
    EXPECT_FALSE(verify_certificate(m.f, bad, m.cfg).ok());
}

TEST(Certificate, ParseErrors)
{
    const std::string text = write_certificate(three_factor_mine().cert);
    EXPECT_THROW(parse_certificate(""), IncompleteCertificate);
    const std::string truncated = text.substr(0, text.find("[witness"));
    EXPECT_ANY_THROW({
        const FactorCertificate c = parse_certificate(truncated);
        if (verify_certificate(three_factor_mine().f, c).ok()) throw std::runtime_error("accepted");
    });
}

TEST(Certificate, RefusesInadmissibleInput)
{
    EXPECT_THROW(build_certificate(PSeries::polynomial({S("1"), S("1")}),
                                   mine_factors(PSeries::polynomial({S("1"), S("1")}), 1)),
                 PreconditionFailed);
}
