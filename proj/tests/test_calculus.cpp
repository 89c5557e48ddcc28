#include <doctest.h>

#include "generators.hpp"
#include "sdesym/calculus.hpp"
#include "sdesym/equivalence.hpp"
#include "sdesym/error.hpp"
#include "sdesym/parse.hpp"
#include "sdesym/symmetry.hpp"

using namespace sdesym;

namespace {

bool same_coefficients(const SdeSystem& a, const SdeSystem& b)
{
    const auto d = a.sampling_domain();
    for (std::size_t i = 0; i < a.n(); ++i) {
        if (!equivalent(a.drift[i], b.drift[i], d)) return false;
        for (std::size_t k = 0; k < a.m(); ++k) {
            if (!equivalent(a.diffusion[i][k], b.diffusion[i][k], d)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("drift correction and conversion for the exponential model")
{
    const auto sys = testing::load_fixture("expnoise.sde").system;
    const auto d = sys.sampling_domain();
    const auto rho = drift_correction(sys);
    REQUIRE(rho.size() == 1);
    CHECK(equivalent(rho[0], parse("-exp(-2*y)/2"), d));
    const auto strat = ito_to_stratonovich(sys);
    CHECK(strat.interpretation == Interpretation::Stratonovich);
    CHECK(equivalent(strat.drift[0], parse("exp(-y)"), d));
    CHECK_THROWS_AS(stratonovich_to_ito(sys), PreconditionError);
    CHECK_THROWS_AS(ito_to_stratonovich(strat), PreconditionError);
}

TEST_CASE("constant diffusion leaves the drift unchanged")
{
    const auto sys = testing::load_fixture("shear2d.sde").system;
    const auto strat = ito_to_stratonovich(sys);
    CHECK(strat.drift == sys.drift);
}

TEST_CASE("conversion round trip on fixtures")
{
    for (const auto& name : testing::fixture_names()) {
        CAPTURE(name);
        const auto sys = testing::load_fixture(name).system;
        const auto back = sys.interpretation == Interpretation::Ito ? stratonovich_to_ito(ito_to_stratonovich(sys))
                                                                    : ito_to_stratonovich(stratonovich_to_ito(sys));
        CHECK(same_coefficients(sys, back));
    }
}

TEST_CASE("conversion round trip on 50 random polynomial systems")
{
    std::mt19937_64 rng(707);
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 1 + rng() % 3;
        const std::size_t m = 1 + rng() % 2;
        const auto sys = testing::random_polynomial_system(rng, n, m);
        if (!same_coefficients(sys, stratonovich_to_ito(ito_to_stratonovich(sys)))) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("Ito Laplacian")
{
    const auto sys = testing::load_fixture("expnoise.sde").system;
    const auto d = sys.sampling_domain();
    CHECK(equivalent(ito_laplacian(parse("y^2"), sys), parse("2*exp(-2*y)"), d));
    CHECK(equivalent(ito_laplacian(parse("w^2"), sys), parse("2"), d));
    CHECK(equivalent(ito_laplacian(parse("y*w"), sys), parse("2*exp(-y)"), d));
    CHECK(ito_laplacian(parse("t^3"), sys).is_zero());

    std::mt19937_64 rng(808);
    const auto lin = testing::load_fixture("ou_partial.sde").system;
    const auto ld = lin.sampling_domain();
    const std::vector<std::string> vars{"x1", "x2", "t", "w1", "w2"};
    for (int i = 0; i < 30; ++i) {
        const Expr f = testing::random_expr(rng, vars, 3);
        const Expr g = testing::random_expr(rng, vars, 3);
        const Expr a = Expr(static_cast<int>(rng() % 5) - 2);
        CHECK(equivalent(ito_laplacian(a * f + g, lin), a * ito_laplacian(f, lin) + ito_laplacian(g, lin), ld));
    }
}

TEST_CASE("Ito change of variables")
{
    const auto sys = testing::load_fixture("expnoise.sde").system;
    const auto t = ito_change_of_variables(sys, parse("exp(y)"));
    CHECK(t.states == std::vector<std::string>{"x"});
    CHECK(t.scalar_drift() == Expr(1));
    CHECK(t.scalar_noise() == Expr(1));
    CHECK(t.ito_form);

    const auto e3 = testing::load_fixture("quadrature.sde").system;
    const auto q = ito_change_of_variables(e3, parse("y*exp(t/2 - w)"));
    CHECK(equivalent(q.scalar_drift(), parse("exp(t/2 - w)"), e3.sampling_domain()));
    CHECK(q.scalar_noise().is_zero());
    CHECK(q.state_free);
    CHECK_FALSE(q.noise_free);
    CHECK_FALSE(q.ito_form);

    const auto lin = testing::load_fixture("shear2d.sde").system;
    const auto v = ito_change_of_variables(lin, {parse("x1 - t*x2"), parse("x2")}, {"z1", "z2"});
    CHECK(v.drift[0].is_zero());
    CHECK(v.noise[0][0] == Expr(1));
    CHECK(v.noise[0][1] == parse("-t"));
    CHECK(v.ito_form);
}

TEST_CASE("infinitesimal residual matches the determining equations")
{
    for (const auto& name : testing::fixture_names()) {
        const auto mf = testing::load_fixture(name);
        if (mf.system.interpretation != Interpretation::Ito) continue;
        const auto d = mf.system.sampling_domain();
        for (const auto& c : mf.candidates) {
            if (!c.field.tau.is_zero()) continue;
            CAPTURE(name);
            CAPTURE(c.name);
            const auto inf = infinitesimal_symbolic_residual(mf.system, c.field);
            const auto rep = residual_ito(mf.system, c.field);
            for (std::size_t i = 0; i < mf.system.n(); ++i) {
                CHECK(equivalent(inf.drift[i], rep.drift_residuals[i], d));
                for (std::size_t k = 0; k < mf.system.m(); ++k) {
                    CHECK(equivalent(inf.noise[i][k], rep.diffusion_residuals[i][k], d));
                }
            }
        }
    }
}

TEST_CASE("infinitesimal residual agrees with the determining equations on 50 random pairs")
{
    std::mt19937_64 rng(909);
    int disagreements = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 1 + rng() % 2;
        const std::size_t m = 1 + rng() % 2;
        const auto sys = testing::random_polynomial_system(rng, n, m);
        std::vector<std::string> vars = sys.states;
        vars.push_back(sys.time);
        vars.insert(vars.end(), sys.noises.begin(), sys.noises.end());
        VectorField v;
        v.tau = Expr(0);
        for (std::size_t a = 0; a < n; ++a) v.xi.push_back(testing::random_expr(rng, vars, 2));
        const auto d = sys.sampling_domain();
        const auto inf = infinitesimal_symbolic_residual(sys, v);
        const auto rep = residual_ito(sys, v);
        for (std::size_t a = 0; a < n; ++a) {
            if (!equivalent(inf.drift[a], rep.drift_residuals[a], d)) ++disagreements;
            for (std::size_t k = 0; k < m; ++k) {
                if (!equivalent(inf.noise[a][k], rep.diffusion_residuals[a][k], d)) ++disagreements;
            }
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("a translation of dx = x dt + dw leaves drift residual -1")
{
    SdeSystem sys;
    sys.states = {"x"};
    sys.noises = {"w"};
    sys.drift = {parse("x")};
    sys.diffusion = {{Expr(1)}};
    const VectorField v{{Expr(1)}, Expr(0)};
    const auto inf = infinitesimal_symbolic_residual(sys, v);
    CHECK(inf.drift[0] == Expr(-1));
    CHECK(inf.noise[0][0].is_zero());
    CHECK(residual_ito(sys, v).drift_residuals[0] == Expr(-1));
}

}
