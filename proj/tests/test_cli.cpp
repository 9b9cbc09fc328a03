#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

using namespace mlhp::cli;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        v.push_back(line);
    return v;
}

} // namespace

TEST_CASE("internal curve")
{
    const Result r = run_cli({"internal", "--F", "4", "--Kmax", "1.0", "--grid", "400"});
    REQUIRE(r.code == exit_ok);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 401);
    CHECK(l[0] == "K,chi2,zeta2,xi2,valid");
    CHECK(l[1].rfind("0,1", 0) == 0);
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(run_cli({"internal", "--F", "4", "--grid", "400"}).out == r.out);
}

TEST_CASE("spin-1/2 internal curve is flat")
{
    const Result r = run_cli({"internal", "--F", "0.5", "--grid", "5"});
    REQUIRE(r.code == exit_ok);
    for (std::size_t i = 1; i < 6; ++i)
        CHECK(lines(r.out)[i].find(",1,1,1,1") != std::string::npos);
}

TEST_CASE("combine modes start at 0.2")
{
    for (const char* mode : {"seq1", "seq2", "simul"}) {
        const Result r = run_cli({"combine", "--mode", mode, "--grid", "3", "--kappa-tilde", "2"});
        REQUIRE(r.code == exit_ok);
        const auto l = lines(r.out);
        CHECK(l[0] == "K,chi2");
        CHECK(std::stod(l[1].substr(2)) == doctest::Approx(0.2).epsilon(1e-12));
    }
    const Result all = run_cli({"combine", "--all", "--grid", "2"});
    CHECK(lines(all.out)[0] == "K,chi0,chi1,chi2,chi3");
}

TEST_CASE("json output")
{
    const Result r = run_cli({"qnd", "--grid", "3", "--format", "json"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["columns"][1] == "chi2");
    CHECK(j["rows"][2][1].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("memory command")
{
    const Result coherent = run_cli({"memory", "--state", "coherent", "--kappa-tilde", "2"});
    CHECK(coherent.code == exit_degenerate_geometry);
    CHECK(coherent.err.find("eta2_write = 0.25") != std::string::npos);

    const Result sq = run_cli({"memory", "--state", "intelligent", "--squeeze", "0.6", "--theta", "0.2"});
    REQUIRE(sq.code == exit_ok);
    const auto j = nlohmann::json::parse(sq.out);
    for (const char* key : {"kappa", "kappa_prime", "varphi", "vartheta", "eta2_write", "eta2_read", "lower_bound",
                            "saturated"})
        CHECK(j.contains(key));
    CHECK(j["saturated"] == true);

    const Result tw = run_cli({"memory", "--state", "twisted", "--K", "0.1", "--theta", "0.5"});
    REQUIRE(tw.code == exit_ok);
    const auto jt = nlohmann::json::parse(tw.out);
    CHECK(jt["saturated"] == false);
    CHECK(jt["eta2_read"].get<double>() > jt["lower_bound"].get<double>());

    CHECK(run_cli({"memory", "--state", "amplitudes", "--F", "1", "--amplitudes", "1,0,0"}).code ==
          exit_config_error);
    const Result amp = run_cli({"memory", "--state", "amplitudes", "--F", "1", "--amplitudes", "1,0,0,0,0,0"});
    CHECK(amp.code == exit_degenerate_geometry);
}

TEST_CASE("validate")
{
    const Result ok = run_cli({"validate"});
    CHECK(ok.code == exit_ok);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    const Result small = run_cli({"validate", "--N", "3", "--F", "1"});
    CHECK(small.code == exit_ok);
    CHECK(small.out.find("oracle dims = 10") != std::string::npos);

    const Result mutated = run_cli({"validate", "--debug-ode-prefactor", "2"});
    CHECK(mutated.code == exit_validation_failure);
    CHECK(mutated.out.find("FAIL k0_consistency") != std::string::npos);
}

TEST_CASE("config errors")
{
    CHECK(run_cli({"internal", "--F", "0.3"}).code == exit_config_error);
    CHECK(run_cli({"internal", "--grid", "1"}).code == exit_config_error);
    CHECK(run_cli({"internal", "--format", "xml"}).code == exit_config_error);
    CHECK(run_cli({"nonsense"}).code == exit_config_error);
    CHECK(run_cli({}).code == exit_config_error);
    CHECK(run_cli({"internal", "--help"}).code == exit_ok);
}

TEST_CASE("config file with flag override and file output")
{
    const std::string cfg = "cli_test_config.ini";
    const std::string out = "cli_test_out.csv";
    {
        std::ofstream f(cfg);
        f << "[internal]\ngrid=4\nKmax=0.5\n";
    }
    const Result r = run_cli({"--config", cfg, "internal", "--grid", "3", "--out", out});
    REQUIRE(r.code == exit_ok);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto l = lines(ss.str());
    REQUIRE(l.size() == 4);
    CHECK(l[3].rfind("0.5,", 0) == 0);
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}
