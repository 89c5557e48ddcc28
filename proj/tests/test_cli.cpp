#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "generators.hpp"

using nlohmann::json;
using sdesym::testing::model_path;

namespace {

struct Run {
    int code = -1;
    json report;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Run r;
    r.code = sdesym::cli::run(args, out, err);
    r.err = err.str();
    if (!out.str().empty() && out.str().front() == '{') r.report = json::parse(out.str());
    return r;
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("sdesym_test_" + name)).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check verifies the exponential model")
{
    const auto r = run({"check", model_path("expnoise.sde")});
    CHECK(r.code == 0);
    CHECK(r.report["verdicts"]["xi"] == true);
    CHECK(r.report["candidates"][0]["residuals"]["drift"][0] == "0");
    CHECK(r.report["candidates"][0]["cross_check"]["agrees"] == true);
    CHECK(r.report["numeric"]["xi"]["max_residual"].get<double>() <= 1e-9);
    CHECK(r.report["model"]["hash"].get<std::string>().size() == 16);
    CHECK(r.report["command"]["line"].get<std::string>().rfind("sdesym check ", 0) == 0);
    CHECK(r.report.contains("wall_time_seconds"));
}

TEST_CASE("check reports the compatibility failure without failing the symmetry")
{
    const auto r = run({"check", model_path("quadrature.sde")});
    CHECK(r.code == 0);
    CHECK(r.report["candidates"][0]["verified"] == true);
    CHECK(r.report["candidates"][0]["bcomp"]["verdict"] == false);
}

TEST_CASE("check exit codes")
{
    CHECK(run({"check", model_path("gbm_family_unscaled.sde")}).code == 1);
    CHECK(run({"check", model_path("drifted.sde")}).code == 1);
    CHECK(run({"check", "/nonexistent.sde"}).code == 2);
    CHECK(run({"check", model_path("expnoise.sde"), "--candidate", "nope"}).code == 2);
    CHECK(run({"frobnicate", model_path("expnoise.sde")}).code == 2);
    CHECK(run({"check"}).code == 2);

    const auto path = temp_path("empty.sde");
    std::ofstream(path) << "[system]\nstates = x\nnoises = w\ndrift.1 = 0\ndiffusion.1.1 = 1\n";
    const auto empty = run({"check", path});
    CHECK(empty.code == 0);
    CHECK(empty.report["candidates"].empty());

    std::ofstream(path) << "[system]\nstates = x\nnoises = w\ndrift.1 = w\n";
    const auto bad = run({"check", path});
    CHECK(bad.code == 2);
    CHECK(bad.report["error"]["type"] == "model");
    std::filesystem::remove(path);
}

TEST_CASE("general candidates report the time condition")
{
    const auto path = temp_path("general.sde");
    std::ofstream(path) << "[system]\nstates = x\nnoises = w\ndrift.1 = 0\ndiffusion.1.1 = 1\n"
                           "[candidate g]\nxi.1 = x/2\ntau = t\n";
    const auto r = run({"check", path});
    CHECK(r.code == 1);
    CHECK(r.report["candidates"][0]["unal"]["satisfied"] == true);
    std::filesystem::remove(path);
}

TEST_CASE("reduce prints the straightened equation")
{
    const auto r = run({"reduce", model_path("expnoise.sde")});
    CHECK(r.code == 0);
    CHECK(r.report["reduction"]["transformed"]["equations"][0] == "dx = dt + dw");
    CHECK(r.report["reduction"]["classification"] == "IntegrableIto");
    CHECK(r.report["reduction"]["map"]["Phi"] == "exp(y)");

    const auto q = run({"reduce", model_path("quadrature.sde")});
    CHECK(q.code == 0);
    CHECK(q.report["reduction"]["classification"] == "IntegrableQuadrature");

    const auto u = run({"reduce", model_path("gbm_family.sde"), "--candidate", "identity", "--beta", "b=0,c=1"});
    CHECK(u.code == 0);
    CHECK(u.report["reduction"]["transformed"]["equations"][0] == "dx = dw");
    const auto f = run({"reduce", model_path("gbm_family.sde"), "--candidate", "identity", "--beta", "free"});
    CHECK(f.report["reduction"]["transformed"]["equations"][0] == "dx = b'(t) dt + c dw");
    CHECK(run({"reduce", model_path("gbm_family.sde"), "--candidate", "identity", "--beta", "q=1"}).code == 2);
    CHECK(run({"reduce", model_path("gbm_family.sde")}).code == 2);
}

TEST_CASE("reduce with a map runs the necessity check")
{
    const auto r = run({"reduce", model_path("expnoise.sde"), "--phi", "exp(y)", "--candidate", "xi"});
    CHECK(r.code == 0);
    CHECK(r.report["necessity"]["field"]["xi"][0] == "exp(-y)");
    CHECK(r.report["verdicts"]["matches_candidate"] == true);
    const auto named = run({"reduce", model_path("expnoise.sde"), "--phi", "straight"});
    CHECK(named.code == 0);
    CHECK(run({"reduce", model_path("expnoise.sde"), "--phi", "exp(("}).code == 2);
}

TEST_CASE("reduce systems")
{
    const auto r = run({"reduce", model_path("linear2d.sde"), "--candidate", "t1,t2", "--coords", "identity"});
    CHECK(r.code == 0);
    CHECK(r.report["reduction"]["equations"][0]["equation"] == "dz1 = dw1");
    CHECK(r.report["reduction"]["equations"][1]["reconstruction"] == true);
    const auto bad = run({"reduce", model_path("linear2d.sde"), "--candidate", "s1,s2"});
    CHECK(bad.code == 1);
    CHECK(bad.report["error"]["hypothesis"] == "regular orbits");
}

TEST_CASE("convert emits the associated model")
{
    const auto r = run({"convert", model_path("expnoise.sde"), "--to", "stratonovich"});
    CHECK(r.code == 0);
    CHECK(r.report["system"]["drift"][0] == "exp(-y)");
    CHECK(r.report["verdicts"]["round_trip"] == true);
    const auto text = r.report["model_text"].get<std::string>();
    const auto reloaded = sdesym::load_model(text);
    CHECK(reloaded.system.interpretation == sdesym::Interpretation::Stratonovich);

    const auto out = temp_path("converted.sde");
    CHECK(run({"convert", model_path("expnoise_stratonovich.sde"), "--to", "ito", "--out", out}).code == 0);
    CHECK(sdesym::load_model_file(out).system.interpretation == sdesym::Interpretation::Ito);
    std::filesystem::remove(out);
    CHECK(run({"convert", model_path("expnoise.sde")}).code == 2);
    CHECK(run({"convert", model_path("expnoise.sde"), "--to", "other"}).code == 2);
}

TEST_CASE("simulate writes CSV")
{
    const auto out = temp_path("paths.csv");
    const auto r = run({"simulate", model_path("expnoise.sde"), "--paths", "3", "--h", "0.01", "--out", out});
    CHECK(r.code == 0);
    CHECK(r.report["config"]["paths"] == 3);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,path,x1,w1");
    std::filesystem::remove(out);
    CHECK(run({"simulate", model_path("expnoise.sde"), "--h", "0.3"}).code == 2);
    CHECK(run({"simulate", model_path("expnoise.sde"), "--scheme", "rk4"}).code == 2);
    CHECK(run({"simulate", model_path("expnoise.sde"), "--x0", "1,2"}).code == 2);
}

TEST_CASE("verify is reproducible")
{
    const auto a = run({"verify", model_path("expnoise.sde"), "--seed", "17"});
    const auto b = run({"verify", model_path("expnoise.sde"), "--seed", "17"});
    CHECK(a.code == 0);
    CHECK(a.report["numeric"].dump() == b.report["numeric"].dump());
    CHECK(a.report["config"]["seed"] == 17);
    CHECK(a.report["numeric"]["scaling"]["exponent"].get<double>() >= 1.7);
    const auto c = run({"verify", model_path("expnoise.sde"), "--seed", "18"});
    CHECK(a.report["numeric"]["pathwise"].dump() != c.report["numeric"]["pathwise"].dump());
}

TEST_CASE("verify flags the non-symmetry control")
{
    const auto r = run({"verify", model_path("drifted.sde")});
    CHECK(r.code == 1);
    CHECK(r.report["verdicts"]["scaling"] == false);
    CHECK(r.report["numeric"]["scaling"]["exponent"].get<double>() <= 1.3);
}

TEST_CASE("verify passes the quadrature-form example")
{
    const auto r = run({"verify", model_path("quadrature.sde")});
    CHECK(r.code == 0);
    CHECK(r.report["verdicts"]["pathwise"] == true);
}

TEST_CASE("seed from the environment and report files")
{
    const auto path = temp_path("report.json");
    setenv("SDESYM_SEED", "99", 1);
    std::ostringstream out, err;
    const int code = sdesym::cli::run({"simulate", model_path("brownian.sde"), "--report", path}, out, err);
    unsetenv("SDESYM_SEED");
    CHECK(code == 0);
    CHECK(out.str().empty());
    std::ifstream in(path);
    const auto report = json::parse(in);
    CHECK(report["config"]["seed"] == 99);
    CHECK(report["command"]["seed"]["source"] == "env");
    std::filesystem::remove(path);
}

TEST_CASE("helpers")
{
    CHECK(sdesym::cli::fnv1a64("") == "cbf29ce484222325");
    CHECK(sdesym::cli::fnv1a64("a") == "af63dc4c8601ec8c");
    using sdesym::Expr;
    CHECK(sdesym::cli::format_equation("x", Expr(0), {Expr(0)}, {"w"}) == "dx = 0");
    CHECK(sdesym::cli::format_equation("x", Expr(2), {Expr(1), Expr(3)}, {"w1", "w2"}) == "dx = 2 dt + dw1 + 3 dw2");
}

}
