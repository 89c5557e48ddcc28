#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "generators.hpp"
#include "sdesym/error.hpp"
#include "sdesym/kozlov.hpp"
#include "sdesym/oracles.hpp"
#include "sdesym/parse.hpp"
#include "sdesym/rng.hpp"

using namespace sdesym;

TEST_SUITE("numeric") {

TEST_CASE("normal stream is keyed and reproducible")
{
    const NormalStream a(1, 2, 3);
    const NormalStream b(1, 2, 3);
    const NormalStream c(1, 2, 4);
    const NormalStream e(1, 3, 3);
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(a.normal(i) == b.normal(i));
        CHECK(a.normal(i) != c.normal(i));
        CHECK(a.normal(i) != e.normal(i));
    }
    double sum = 0.0;
    double sq = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        const double z = a.normal(static_cast<std::uint64_t>(i));
        sum += z;
        sq += z * z;
    }
    CHECK(std::fabs(sum / N) < 5.0 / std::sqrt(N));
    CHECK(sq / N == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("simulation is deterministic given the seed")
{
    const auto mf = testing::load_fixture("expnoise.sde");
    auto cfg = config_from(mf);
    cfg.paths = 20;
    const auto a = simulate(mf.system, cfg);
    const auto b = simulate(mf.system, cfg);
    CHECK(a.states == b.states);
    CHECK(a.increments == b.increments);
    cfg.threads = 1;
    const auto serial = simulate(mf.system, cfg);
    CHECK(serial.states == a.states);
    cfg.seed += 1;
    const auto c = simulate(mf.system, cfg);
    CHECK(c.states != a.states);
}

TEST_CASE("nested increments sum exactly to the coarse increments")
{
    const double h = 1e-2;
    const auto coarse = wiener_increments(42, 3, 0, 25, h, 4);
    const auto fine = wiener_increments(42, 3, 0, 100, h / 4.0, 1);
    for (std::size_t s = 0; s < coarse.size(); ++s) {
        double acc = 0.0;
        for (std::size_t r = 0; r < 4; ++r) acc += fine[s * 4 + r];
        CHECK(acc == coarse[s]);
    }
}

TEST_CASE("moments of drifted Brownian motion")
{
    const auto mf = testing::load_fixture("drifted_brownian.sde");
    const auto cfg = config_from(mf);
    REQUIRE(cfg.paths == 10000);
    const auto ps = simulate(mf.system, cfg);
    std::vector<double> end;
    for (std::size_t p = 0; p < ps.paths(); ++p) end.push_back(ps.x(p, ps.steps(), 0));
    const double mean = std::accumulate(end.begin(), end.end(), 0.0) / static_cast<double>(end.size());
    double var = 0.0;
    for (double v : end) var += (v - mean) * (v - mean);
    var /= static_cast<double>(end.size() - 1);
    // Mean 1, variance 1; the bounds are about four standard errors.
    CHECK(std::fabs(mean - 1.0) < 0.04);
    CHECK(std::fabs(var - 1.0) < 0.06);
    CHECK(increment_sanity(ps).ok());
    CHECK_FALSE(increment_sanity(ps).gated);
}

TEST_CASE("Euler on exponential growth")
{
    const auto mf = testing::load_fixture("growth.sde");
    const auto ps = simulate(mf.system, config_from(mf));
    CHECK(std::fabs(ps.x(0, ps.steps(), 0) - std::exp(1.0)) < 2e-4);
}

TEST_CASE("Heun integrates the Stratonovich form")
{
    const auto mf = testing::load_fixture("expnoise_stratonovich.sde");
    auto cfg = config_from(mf);
    CHECK(cfg.scheme == Scheme::StratonovichHeun);
    cfg.paths = 20;
    cfg.h = 1e-3;
    const auto ps = simulate(mf.system, cfg);
    // exp(y) = exp(y0) + t + w under the Stratonovich reading as well.
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        const double w = ps.w(p, ps.steps())[0];
        CHECK(std::exp(ps.x(p, ps.steps(), 0)) == doctest::Approx(std::exp(1.0) + 1.0 + w).epsilon(0.02));
    }
    cfg.scheme = Scheme::EulerMaruyama;
    CHECK_THROWS_AS(simulate(mf.system, cfg), PreconditionError);
}

TEST_CASE("configuration errors")
{
    const auto mf = testing::load_fixture("expnoise.sde");
    auto cfg = config_from(mf);
    cfg.h = 0.0003;
    CHECK_THROWS_AS(cfg.validate(), PreconditionError);
    cfg.h = -1.0;
    CHECK_THROWS_AS(cfg.validate(), PreconditionError);
    cfg = config_from(mf);
    cfg.t1 = cfg.t0;
    CHECK_THROWS_AS(cfg.validate(), PreconditionError);
    cfg = config_from(mf);
    cfg.x0 = {1.0, 2.0};
    CHECK_THROWS_AS(simulate(mf.system, cfg), PreconditionError);
    CHECK(parse_scheme("em") == Scheme::EulerMaruyama);
    CHECK_THROWS_AS(parse_scheme("rk4"), PreconditionError);
    const auto e2 = testing::load_fixture("gbm_family.sde");
    CHECK(simulate(e2.system, config_from(e2)).paths() == 100);
    auto family = e2.system;
    family.drift[0] = parse("eta(y)", family.parse_options());
    CHECK_THROWS_AS(simulate(family, config_from(e2)), PreconditionError);
}

TEST_CASE("paths leaving the bounds are excluded and counted")
{
    const auto mf = testing::load_fixture("brownian.sde");
    auto cfg = config_from(mf);
    cfg.bounds["x"] = Interval{-1.5, 1.5};
    const auto ps = simulate(mf.system, cfg);
    CHECK(ps.excluded_count > 0);
    CHECK(ps.excluded_count < ps.paths());
    std::size_t flagged = 0;
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        if (!ps.excluded[p]) continue;
        ++flagged;
        CHECK(std::isnan(ps.x(p, ps.steps(), 0)));
    }
    CHECK(flagged == ps.excluded_count);
}

TEST_CASE("CSV export")
{
    const auto mf = testing::load_fixture("linear2d.sde");
    auto cfg = config_from(mf);
    cfg.paths = 2;
    cfg.h = 0.5;
    const auto ps = simulate(mf.system, cfg);
    std::ostringstream os;
    write_csv(os, ps);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,path,x1,x2,w1,w2");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * 3);
    CHECK(os.str().find("\n0,0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("pathwise error of the straightened exponential model shrinks with h")
{
    const auto mf = testing::load_fixture("expnoise.sde");
    const auto r = reduce_deterministic(mf.system, mf.candidates[0].field);
    auto cfg = config_from(mf);
    double previous = INFINITY;
    for (double h : {1e-2, 1e-3, 1e-4}) {
        cfg.h = h;
        const auto pw = pathwise_check(mf.system, r.transformed, r.map.Phi, cfg);
        CAPTURE(h);
        CHECK(pw.median_sup_error < previous);
        previous = pw.median_sup_error;
    }
    cfg.h = 1e-3;
    const auto pw = pathwise_check(mf.system, r.transformed, r.map.Phi, cfg);
    CHECK(pw.median_sup_error <= 0.05);
    CHECK(pw.excluded == 0);
    const auto ord = strong_order_estimate(mf.system, r.transformed, r.map.Phi, cfg);
    CHECK(ord.order >= 0.4);
    CHECK(ord.order <= 1.2);
}

TEST_CASE("strong order of Euler on a deterministic equation is one")
{
    const auto mf = testing::load_fixture("growth.sde");
    const auto r = reduce_deterministic(mf.system, mf.candidates[0].field);
    auto cfg = config_from(mf);
    cfg.h = 1e-2;
    const auto ord = strong_order_estimate(mf.system, r.transformed, r.map.Phi, cfg);
    CHECK(ord.order == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("an exact reduction has no pathwise error")
{
    const auto mf = testing::load_fixture("drifted_brownian.sde");
    const auto r = reduce_with_map(mf.system, mf.maps[0].phi);
    auto cfg = config_from(mf);
    cfg.paths = 10;
    const auto pw = pathwise_check(mf.system, r.transformed, r.map.Phi, cfg);
    CHECK(pw.median_sup_error < 1e-12);
    CHECK(strong_order_estimate(mf.system, r.transformed, r.map.Phi, cfg).skipped);
}

TEST_CASE("epsilon scaling separates symmetries from non-symmetries")
{
    const auto e1 = testing::load_fixture("expnoise.sde");
    const auto s1 = epsilon_symmetry_scaling(e1.system, e1.candidates[0].field, config_from(e1));
    REQUIRE(s1.exponent);
    CHECK(*s1.exponent >= 1.7);
    CHECK(s1.symmetric());
    CHECK(s1.points <= 2000);

    const auto dr = testing::load_fixture("drifted.sde");
    const auto s2 = epsilon_symmetry_scaling(dr.system, dr.candidates[0].field, config_from(dr));
    REQUIRE(s2.exponent);
    CHECK(*s2.exponent <= 1.3);
    CHECK_FALSE(s2.symmetric());

    const auto st = testing::load_fixture("expnoise_stratonovich.sde");
    auto cfg = config_from(e1);
    cfg.paths = 20;
    const auto s3 = epsilon_symmetry_scaling(st.system, st.candidates[0].field, cfg);
    CHECK(s3.symmetric());

    const auto lin = testing::load_fixture("shear2d.sde");
    auto lcfg = config_from(lin);
    lcfg.x0 = {0.0, 0.0};
    const auto s4 = epsilon_symmetry_scaling(lin.system, lin.candidates[1].field, lcfg);
    CHECK(s4.symmetric());
}

TEST_CASE("central differences")
{
    EvalPoint p;
    p.values = {{"x", 1.3}};
    CHECK(finite_difference(parse("x^3"), "x", p) == doctest::Approx(3 * 1.3 * 1.3).epsilon(1e-8));
    CHECK_THROWS_AS(finite_difference(parse("x"), "y", p), Error);
}

}
