#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaussforge/cli.hpp"

using namespace gaussforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "gaussforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("gaussforge-cli-" + std::to_string(::getpid()) + "-" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path(name)) << text;
    }

    std::string read(const std::string& name) const { return cli::read_file(path(name)); }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, MineThenVerify)
{
    const Outcome m = run_cli({"mine", "--input", "canonical-witness", "--count", "3", "--xprec", "32", "--tprec", "8",
                               "--out", path("cert.txt")});
    ASSERT_EQ(m.code, cli::exit_ok) << m.err;
    EXPECT_NE(m.out.find("mined 3 of 3"), std::string::npos);
    const Outcome v = run_cli({"verify", "--xprec", "32", "--tprec", "8", "--cert", path("cert.txt")});
    EXPECT_EQ(v.code, cli::exit_ok) << v.out << v.err;
    EXPECT_NE(v.out.find("verified"), std::string::npos);
    EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
    // positional certificate path
    EXPECT_EQ(run_cli({"verify", "--xprec", "32", "--tprec", "8", path("cert.txt")}).code, cli::exit_ok);
}

TEST_F(CliTest, MineIsDeterministic)
{
    ASSERT_EQ(run_cli({"mine", "--count", "2", "--xprec", "16", "--out", path("a.txt")}).code, cli::exit_ok);
    ASSERT_EQ(run_cli({"mine", "--count", "2", "--xprec", "16", "--out", path("b.txt")}).code, cli::exit_ok);
    EXPECT_EQ(read("a.txt"), read("b.txt"));
}

TEST_F(CliTest, MineRejectsUnitSeries)
{
    write("one.series", "xprec: 2\ntail: 0 inf\n0: 1\n1: 1\n");
    const Outcome m = run_cli({"mine", "--input", path("one.series"), "--out", path("cert.txt")});
    EXPECT_EQ(m.code, cli::exit_precondition) << m.err;
    write("tagged.series", "xprec: 2\ntail: 0 inf\ntag: admissible\n0: 1\n1: 1\n");
    EXPECT_EQ(run_cli({"mine", "--input", path("tagged.series"), "--out", path("cert.txt")}).code,
              cli::exit_precondition);
}

TEST_F(CliTest, StarvedMineWritesPartialCertificate)
{
    const Outcome m = run_cli({"mine", "--count", "50", "--xprec", "8", "--out", path("cert.txt")});
    EXPECT_EQ(m.code, cli::exit_precision);
    EXPECT_NE(m.err.find("xprec-estimate"), std::string::npos);
    EXPECT_NE(m.err.find("shortfall"), std::string::npos);
    const std::string cert = read("cert.txt");
    EXPECT_NE(cert.find("complete: no"), std::string::npos);
    EXPECT_EQ(run_cli({"verify", "--xprec", "8", "--cert", path("cert.txt")}).code, cli::exit_verification);
}

TEST_F(CliTest, VerifyFailures)
{
    ASSERT_EQ(run_cli({"mine", "--count", "3", "--xprec", "16", "--out", path("cert.txt")}).code, cli::exit_ok);
    const std::string good = read("cert.txt");

    // another input
    EXPECT_EQ(run_cli({"verify", "--xprec", "17", "--cert", path("cert.txt")}).code, cli::exit_digest);

    // corrupted claim
    std::string bad = good;
    const auto at = bad.find("residual-bound: ");
    ASSERT_NE(at, std::string::npos);
    bad.replace(at, bad.find('\n', at) - at, "residual-bound: 1000");
    write("bad.txt", bad);
    const Outcome v = run_cli({"verify", "--xprec", "16", "--cert", path("bad.txt")});
    EXPECT_EQ(v.code, cli::exit_verification);
    EXPECT_NE(v.out.find("FAIL"), std::string::npos);

    // malformed file
    write("garbage.txt", "[factor 1]\nthis is not a certificate\n");
    EXPECT_EQ(run_cli({"verify", "--xprec", "16", "--cert", path("garbage.txt")}).code, cli::exit_parse);

    // well-formed but with a section removed
    std::string gutted = good;
    const auto w = gutted.find("[witness 1 2]");
    ASSERT_NE(w, std::string::npos);
    gutted.erase(w, gutted.find("\n\n", w) + 2 - w);
    write("gutted.txt", gutted);
    EXPECT_EQ(run_cli({"verify", "--xprec", "16", "--cert", path("gutted.txt")}).code, cli::exit_verification);

    // missing certificate
    EXPECT_EQ(run_cli({"verify", "--xprec", "16"}).code, cli::exit_parse);
}

TEST_F(CliTest, Degrees)
{
    const Outcome d = run_cli({"degrees", "--xprec", "32", "--radii", "t^(1/4),t^(1/8),t^(1/16)"});
    ASSERT_EQ(d.code, cli::exit_ok) << d.err;
    std::istringstream lines(d.out);
    std::string header, line;
    std::getline(lines, header);
    std::vector<std::string> degrees;
    while (std::getline(lines, line)) degrees.push_back(line.substr(line.find_last_of(' ') + 1));
    EXPECT_EQ(degrees, (std::vector<std::string>{"1", "2", "3"}));
}

TEST_F(CliTest, DegreesOfConstantSeries)
{
    write("c.series", "xprec: 1\ntail: 0 inf\n0: 1\n");
    const Outcome d = run_cli({"degrees", "--input", path("c.series"), "--radii", "t^(1/4),t"});
    ASSERT_EQ(d.code, cli::exit_ok) << d.err;
    EXPECT_EQ(d.out.find(" 1\n"), std::string::npos);
}

TEST_F(CliTest, DegreesRejectsUnitRadius)
{
    EXPECT_EQ(run_cli({"degrees", "--radii", "1"}).code, cli::exit_precondition);
    EXPECT_EQ(run_cli({"degrees", "--radii", "t^(-1/2)"}).code, cli::exit_precondition);
}

TEST_F(CliTest, ParseFailures)
{
    EXPECT_EQ(run_cli({}).code, cli::exit_parse);
    EXPECT_EQ(run_cli({"mine", "--bogus"}).code, cli::exit_parse);
    EXPECT_EQ(run_cli({"mine", "--xprec", "many"}).code, cli::exit_parse);
    write("broken.series", "xprec: 2\n0: t\n");
    EXPECT_EQ(run_cli({"mine", "--input", path("broken.series"), "--out", path("c.txt")}).code, cli::exit_parse);
    EXPECT_EQ(run_cli({"degrees", "--radii", "t^("}).code, cli::exit_parse);
    EXPECT_EQ(run_cli({"mine", "--input", path("absent.series")}).code, cli::exit_parse);
}

TEST_F(CliTest, MaxTermsPrecedence)
{
    cli::RunConfig cfg;
    ::setenv("GAUSSFORGE_MAX_TERMS", "77", 1);
    EXPECT_EQ(cli::effective_max_terms(cfg), 77u);
    cfg.max_terms = 5;
    cfg.max_terms_given = true;
    EXPECT_EQ(cli::effective_max_terms(cfg), 5u);
    ::setenv("GAUSSFORGE_MAX_TERMS", "zero", 1);
    cfg.max_terms_given = false;
    EXPECT_THROW(cli::effective_max_terms(cfg), ParseError);
    ::unsetenv("GAUSSFORGE_MAX_TERMS");
    EXPECT_EQ(cli::effective_max_terms(cli::RunConfig{}), default_max_terms);
}

TEST_F(CliTest, Help)
{
    const Outcome h = run_cli({"--help"});
    EXPECT_EQ(h.code, cli::exit_ok);
    EXPECT_NE(h.out.find("mine"), std::string::npos);
}
