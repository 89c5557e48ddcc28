#include <doctest.h>

#include "generators.hpp"
#include "sdesym/error.hpp"
#include "sdesym/model.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

namespace {

const char* kScalar = R"(
[system]
interpretation = ito
states = y
noises = w
drift.1 = exp(-y) - 0.5*exp(-2*y)
diffusion.1.1 = exp(-y)
)";

std::string with(const std::string& extra)
{
    return std::string(kScalar) + extra;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("scalar system loads with default boxes")
{
    const auto mf = load_model(kScalar);
    const auto& s = mf.system;
    CHECK(s.interpretation == Interpretation::Ito);
    CHECK(s.n() == 1);
    CHECK(s.m() == 1);
    CHECK(s.scalar());
    CHECK(s.S() == parse("exp(-y)"));
    const auto d = s.sampling_domain();
    CHECK(d.of("y").lo == 0.5);
    CHECK(d.of("t").hi == 1.0);
    CHECK(d.of("w").lo == -1.0);
}

TEST_CASE("every fixture prints and reloads to the same model")
{
    for (const auto& name : testing::fixture_names()) {
        CAPTURE(name);
        const auto a = testing::load_fixture(name);
        const std::string text = print_model(a);
        const auto b = load_model(text);
        CHECK(print_model(b) == text);
        CHECK(a.system.drift == b.system.drift);
        CHECK(a.system.diffusion == b.system.diffusion);
        CHECK(a.candidates.size() == b.candidates.size());
        CHECK(a.notes == b.notes);
        for (std::size_t i = 0; i < a.candidates.size(); ++i) {
            CHECK(a.candidates[i].field.xi == b.candidates[i].field.xi);
        }
    }
}

TEST_CASE("sections and lookups")
{
    const auto mf = testing::load_fixture("gbm_family.sde");
    CHECK(mf.system.functions.count("eta") == 1);
    REQUIRE(mf.find_candidate("family"));
    CHECK_FALSE(mf.find_candidate("missing"));
    REQUIRE(mf.find_ansatz("free"));
    CHECK(mf.find_ansatz("unit")->c == Expr(1));
    CHECK(mf.notes.size() == 2);
    CHECK(mf.simulation.paths == std::size_t{100});
    const auto lin = testing::load_fixture("linear2d.sde");
    REQUIRE(lin.find_coordinates("identity"));
    CHECK(lin.system.diffusion[0][1].is_zero());
    CHECK(lin.simulation.x0 == std::vector<double>{0.0, 0.0});
}

TEST_CASE("classification of candidate fields")
{
    const auto mf = testing::load_fixture("quadrature.sde");
    const auto c = classify(mf.candidates[0].field, mf.system);
    CHECK(c.simple);
    CHECK_FALSE(c.deterministic);
    CHECK(c.label() == "simple random");
    const auto e1 = testing::load_fixture("expnoise.sde");
    CHECK(classify(e1.candidates[0].field, e1.system).label() == "simple deterministic");
    VectorField general{{parse("1")}, parse("t^2")};
    CHECK_FALSE(classify(general, e1.system).simple);
}

TEST_CASE("malformed models are rejected")
{
    CHECK_THROWS_AS(load_model(with("[candidate a]\nxi.1 = w*y\ntau = y\n")), ModelError);
    CHECK_THROWS_AS(load_model(with("[candidate a]\nxi.2 = 1\n")), Error);
    CHECK_THROWS_AS(load_model(with("[candidate a]\nxi.1 = z\n")), ModelError);
    CHECK_THROWS_AS(load_model("[system]\nstates = x\nnoises = w\ndrift.1 = w\n"), ModelError);
    CHECK_THROWS_AS(load_model("[system]\nstates = x\nnoises = w\n"), ModelError);
    CHECK_THROWS_AS(load_model("[system]\nstates = x\nnoises = w\ndrift.1 = 1\ndiffusion.1.2 = 1\n"), ModelError);
    CHECK_THROWS_AS(load_model("[system]\nstates = x, x\nnoises = w\ndrift.1 = 1\ndrift.2 = 1\n"), ModelError);
    CHECK_THROWS_AS(load_model(with("domain.y = 2, 1\n")), Error);
    try {
        load_model(with("bogus = 1\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 8);
    }
    try {
        load_model(with("[candidate a]\nxi.1 = (y\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 9);
    }
    CHECK_THROWS_AS(load_model(with("[mystery]\n")), ParseError);
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.sde"), ModelError);
}

}
