#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "arrcoh/cli.hpp"

using namespace arrcoh;
using namespace arrcoh::cli;

namespace {

struct Outcome
{
    int status;
    std::string out;
    std::string err;
};

Outcome run_on(const std::string& input, Subcommand sub, RunConfig cfg = {})
{
    cfg.subcommand = sub;
    std::istringstream in(input);
    std::ostringstream out, err;
    const int status = run(cfg, in, out, err);
    return {status, out.str(), err.str()};
}

const char* boolean3 = "affine 3\n1 0 0 0\n0 1 0 0\n0 0 1 0\n";
const char* braid3 = "affine 3\n1 -1 0 0\n1 0 -1 0\n0 1 -1 0\n";
const char* simplex = "projective 2\n1 0 0\n0 1 0\n0 0 1\n";
const char* square = "dims\n0 0 1\n1 0 1\n0 1 1\n1 1 1\ndh 0 0\n1\ndh 0 1\n-1\ndv 0 0\n1\ndv 1 0\n1\n";

}   // namespace

TEST_CASE("betti prints the Betti numbers", "[cli]")
{
    const auto o = run_on(boolean3, Subcommand::Betti);
    CHECK(o.status == exit_ok);
    CHECK(o.out.find("betti: 1 3 3 1\n") != std::string::npos);
    CHECK(o.out.find("poincare: 1 + 3t + 3t^2 + t^3") != std::string::npos);
    CHECK(o.out.find("oracle agreement: true") != std::string::npos);
}

TEST_CASE("oracles can be skipped", "[cli]")
{
    RunConfig cfg;
    cfg.oracles = false;
    const auto o = run_on(boolean3, Subcommand::Betti, cfg);
    CHECK(o.status == exit_ok);
    CHECK(o.out.find("oracle agreement") == std::string::npos);
}

TEST_CASE("check on the braid arrangement", "[cli]")
{
    const auto o = run_on(braid3, Subcommand::Check);
    CHECK(o.status == exit_ok);
    CHECK(o.out.find("agreement: true") != std::string::npos);
    CHECK(o.out.find("check: passed") != std::string::npos);
    CHECK(o.out.find("FAIL") == std::string::npos);
}

TEST_CASE("check on projective input tries every hyperplane at infinity", "[cli]")
{
    const auto o = run_on("projective 2\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n", Subcommand::Check);
    CHECK(o.status == exit_ok);
    CHECK(o.out.find("betti: 1 3 3") != std::string::npos);
}

TEST_CASE("oracle subcommand", "[cli]")
{
    const auto o = run_on(braid3, Subcommand::Oracle);
    CHECK(o.status == exit_ok);
    CHECK(o.out.find("mobius: 1 3 2 0") != std::string::npos);
    CHECK(o.out.find("whitney: 1 3 2 0") != std::string::npos);
    CHECK(o.out.find("agreement: true") != std::string::npos);
}

TEST_CASE("poset and pages", "[cli]")
{
    const auto p = run_on("affine 2\n1 0 0\n0 1 0\n", Subcommand::Poset);
    CHECK(p.status == exit_ok);
    CHECK(p.out.find("flats: 4") != std::string::npos);

    const auto e1 = run_on("affine 2\n1 0 0\n0 1 0\n", Subcommand::E1);
    CHECK(e1.status == exit_ok);
    CHECK(e1.out.rfind("E1 page", 0) == 0);

    const auto e2 = run_on("affine 2\n1 0 0\n0 1 0\n", Subcommand::E2);
    CHECK(e2.status == exit_ok);
    CHECK(e2.out.rfind("E2 page", 0) == 0);
}

TEST_CASE("exit codes", "[cli]")
{
    SECTION("zero normal is a parse error with its line")
    {
        const auto o = run_on("affine 2\n1 0 0\n0 0 5\n", Subcommand::Betti);
        CHECK(o.status == exit_invalid);
        CHECK(o.err.find("line 3") != std::string::npos);
        CHECK(o.out.empty());
    }
    SECTION("cap exceeded")
    {
        RunConfig cfg;
        cfg.enumeration_cap = 2;
        const auto o = run_on(boolean3, Subcommand::Betti, cfg);
        CHECK(o.status == exit_cap);
        CHECK(o.err.find("cap") != std::string::npos);
    }
    SECTION("infinity on affine input")
    {
        RunConfig cfg;
        cfg.infinity_index = 0;
        CHECK(run_on(boolean3, Subcommand::Betti, cfg).status == exit_invalid);
    }
    SECTION("infinity out of range")
    {
        RunConfig cfg;
        cfg.infinity_index = 3;
        CHECK(run_on(simplex, Subcommand::Betti, cfg).status == exit_invalid);
        cfg.infinity_index = 2;
        CHECK(run_on(simplex, Subcommand::Betti, cfg).status == exit_ok);
    }
    SECTION("malformed double complex")
    {
        CHECK(run_on("dims\n0 0 1\nbogus\n", Subcommand::Ss).status == exit_invalid);
    }
}

TEST_CASE("json output", "[cli]")
{
    RunConfig cfg;
    cfg.json = true;
    const auto o = run_on(braid3, Subcommand::Betti, cfg);
    REQUIRE(o.status == exit_ok);
    const auto j = json::parse(o.out);
    for (const char* key : {"kind", "n", "r", "essential_rank", "shift", "betti", "poincare", "e1", "e2", "oracle",
                            "agreement"})
        CHECK(j.contains(key));
    CHECK(j["betti"] == json::array({1, 3, 2, 0}));
    CHECK(j["oracle"]["mobius"] == j["betti"]);
    CHECK(j["agreement"] == true);

    // byte-identical on rerun
    CHECK(run_on(braid3, Subcommand::Betti, cfg).out == o.out);

    const auto checks = run_on(braid3, Subcommand::Check, cfg);
    CHECK(json::parse(checks.out).contains("checks"));
    const auto poset = run_on(braid3, Subcommand::Poset, cfg);
    CHECK(json::parse(poset.out).contains("poset"));
}

TEST_CASE("ss on an exact square", "[cli]")
{
    const auto o = run_on(square, Subcommand::Ss);
    CHECK(o.status == exit_ok);
    CHECK_FALSE(o.out.empty());
}

TEST_CASE("verbose output", "[cli]")
{
    RunConfig cfg;
    cfg.verbose = true;
    const auto o = run_on(braid3, Subcommand::Betti, cfg);
    CHECK(o.out.find("essential rank: 2, kunneth shift: 1") != std::string::npos);
    CHECK(o.out.find("general position: no") != std::string::npos);
}
