#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "certificate.hpp"
#include "errors.hpp"
#include "miner.hpp"
#include "series.hpp"
#include "weierstrass.hpp"

namespace gaussforge::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_parse = 2,
    exit_precondition = 3,
    exit_precision = 4,
    exit_digest = 5,
    exit_verification = 6,
};

inline constexpr const char* builtin_witness = "canonical-witness";

struct RunConfig {
    std::string input = builtin_witness;
    std::string output = "certificate.txt";
    std::string certificate; // verify only
    std::size_t xprec = 32;
    std::string tprec = "12";
    std::size_t count = 3;
    unsigned order_cap = 64;
    std::size_t max_terms = default_max_terms;
    bool max_terms_given = false;
    std::vector<std::string> radii;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PSeries load_series(const RunConfig& cfg)
{
    if (cfg.input == builtin_witness) return PSeries::canonical_witness(cfg.xprec);
    return parse_series(read_file(cfg.input));
}

// Term cap: --max-terms when given, else GAUSSFORGE_MAX_TERMS, else the default.
inline std::size_t effective_max_terms(const RunConfig& cfg)
{
    if (cfg.max_terms_given) return cfg.max_terms;
    if (const char* env = std::getenv("GAUSSFORGE_MAX_TERMS")) {
        std::string s(env);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || std::stoul(s) == 0)
            throw ParseError("GAUSSFORGE_MAX_TERMS must be a positive integer");
        return std::stoul(s);
    }
    return cfg.max_terms;
}

inline MinerConfig miner_config(const RunConfig& cfg)
{
    const Rational tprec = parse_rational(cfg.tprec);
    if (tprec <= 0) throw PreconditionFailed("tprec must be positive");
    if (cfg.xprec == 0 || cfg.count == 0 || cfg.order_cap == 0)
        throw PreconditionFailed("xprec, count and order cap must be positive");
    MinerConfig m;
    m.tr = Truncation{tprec, effective_max_terms(cfg)};
    m.order_cap = cfg.order_cap;
    return m;
}

inline int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ParseError*>(&e)) return exit_parse;
    if (dynamic_cast<const DigestMismatch*>(&e)) return exit_digest;
    if (dynamic_cast<const IncompleteCertificate*>(&e)) return exit_verification;
    if (dynamic_cast<const PrecisionExhausted*>(&e)) return exit_precision;
    if (dynamic_cast<const PreconditionFailed*>(&e) || dynamic_cast<const NotInMaximalIdeal*>(&e))
        return exit_precondition;
    return exit_internal;
}

inline void print_factor_table(const std::vector<MinedFactor>& factors, std::ostream& out)
{
    out << std::left << std::setw(6) << "index" << std::setw(8) << "degree" << std::setw(16) << "root-valuation"
        << std::setw(26) << "constant-term-valuation" << std::setw(14) << "multiplicity"
        << "irreducibility\n";
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        out << std::left << std::setw(6) << k + 1 << std::setw(8) << f.q.degree() << std::setw(16)
            << to_string(f.root_valuation) << std::setw(26) << to_string(f.constant_term_valuation) << std::setw(14)
            << f.multiplicity << to_string(f.q.irreducibility()) << "\n";
    }
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionFailed("cannot write '" + path + "'");
    out << text;
}

inline int cmd_mine(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        const MinerConfig mc = miner_config(cfg);
        const PSeries f = load_series(cfg);
        MiningResult mined;
        int code = exit_ok;
        try {
            mined = mine_factors(f, cfg.count, mc);
        } catch (const MiningExhausted& e) {
            mined = e.partial();
            err << "precision exhausted: " << e.what() << "\n" << mined.report.text();
            code = exit_precision;
        }
        const FactorCertificate cert = build_certificate(f, mined, mc);
        write_file(cfg.output, write_certificate(cert));
        print_factor_table(mined.factors, out);
        out << "mined " << mined.factors.size() << " of " << cfg.count << " factors; certificate written to "
            << cfg.output << (code == exit_ok ? "" : " (partial)") << "\n";
        return code;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    MinerConfig mc;
    PSeries f;
    std::string text;
    try {
        mc = miner_config(cfg);
        if (cfg.certificate.empty()) throw ParseError("no certificate given (--cert)");
        text = read_file(cfg.certificate);
        f = load_series(cfg);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
    try {
        const FactorCertificate cert = parse_certificate(text);
        const VerificationReport rep = verify_certificate(f, cert, mc);
        out << rep.text();
        if (!cert.complete) {
            out << "FAIL completeness: certificate holds " << cert.factors.size() << " of " << cert.requested
                << " requested factors\n";
            return exit_verification;
        }
        out << (rep.ok() ? "verified\n" : "verification failed\n");
        return rep.ok() ? exit_ok : exit_verification;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return exit_parse;
    } catch (const DigestMismatch& e) {
        err << e.what() << "\n";
        return exit_digest;
    } catch (const std::exception& e) {
        // A certificate that parses but states an impossible object (say a
        // factor that is not monic) fails verification.
        err << e.what() << "\n";
        return exit_verification;
    }
}

inline int cmd_degrees(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        const PSeries f = load_series(cfg);
        if (cfg.radii.empty()) throw PreconditionFailed("no radii given (--radii)");
        std::vector<ValuedScalar> radii;
        for (const auto& r : cfg.radii) {
            ValuedScalar a = parse_scalar(r);
            if (!a.in_maximal_ideal()) throw NotInMaximalIdeal("radius " + to_string(a) + " is not in m");
            radii.push_back(std::move(a));
        }
        out << std::left << std::setw(20) << "radius" << std::setw(12) << "w(a)" << "degree\n";
        for (const auto& a : radii)
            out << std::left << std::setw(20) << to_string(a) << std::setw(12) << to_string(a.valuation())
                << disc_degree(f, a) << "\n";
        return exit_ok;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Weierstrass factor mining over truncated Hahn series"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "series file, or 'canonical-witness'");
        sub->add_option("--xprec", cfg.xprec, "X-adic length of the builtin series");
        sub->add_option("--tprec", cfg.tprec, "t-adic precision ceiling (rational)");
        sub->add_option("--order-cap", cfg.order_cap, "largest multiplicity searched");
        sub->add_option("--max-terms", cfg.max_terms, "term cap per scalar")->each([&](const std::string&) {
            cfg.max_terms_given = true;
        });
    };

    CLI::App* mine = app.add_subcommand("mine", "mine factors and write a certificate");
    common(mine);
    mine->add_option("--count", cfg.count, "number of factors");
    mine->add_option("--out", cfg.output, "certificate path");

    CLI::App* verify = app.add_subcommand("verify", "check a certificate against a series");
    common(verify);
    verify->add_option("--cert", cfg.certificate, "certificate path");
    verify->add_option("certificate", cfg.certificate, "certificate path");

    CLI::App* degrees = app.add_subcommand("degrees", "disc degrees at the given radii");
    common(degrees);
    degrees->add_option("--radii", cfg.radii, "radii as scalars, e.g. t^(1/4)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << "\n";
            return exit_ok;
        }
        err << e.what() << "\n";
        if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
        return exit_parse;
    }

    if (mine->parsed()) return cmd_mine(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    return cmd_degrees(cfg, out, err);
}

} // namespace gaussforge::cli
