#include <doctest.h>

#include "generators.hpp"
#include "sdesym/antiderivative.hpp"
#include "sdesym/equivalence.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

namespace {

Domain unit_box()
{
    Domain d;
    d.set("y", Interval{0.5, 2.0});
    d.set("t", Interval{0.0, 1.0});
    d.set("w", Interval{-1.0, 1.0});
    return d;
}

}  // namespace

TEST_SUITE("antiderivative") {

TEST_CASE("table forms differentiate back to the integrand")
{
    const ParseOptions opts{{"eta"}};
    const char* integrands[] = {
        "3",
        "y",
        "y^5",
        "1/y",
        "1/(2*y + 1)",
        "(3*y - 1)^-2",
        "sqrt(y)",
        "exp(y)",
        "exp(-y)",
        "exp(w - t/2)",
        "exp(2*y + t)",
        "sin(3*y)",
        "cos(y - w)",
        "log(y)",
        "y*exp(w)",
        "eta'(2*y + 1)",
        "2*y*exp(y^2)",
        "cos(y)*exp(sin(y))",
        "1/(y*(exp(-t) + t/2 - w + log(y)))",
        "y^2 + 4*y - exp(-y)/3",
    };
    const auto d = unit_box();
    for (const char* text : integrands) {
        CAPTURE(text);
        const Expr e = parse(text, opts);
        const auto F = antiderivative(e, "y");
        REQUIRE(F);
        CHECK(equivalent(differentiate(*F, "y"), e, d));
    }
}

TEST_CASE("straightening integrands")
{
    const auto F = antiderivative(parse("exp(y)"), "y");
    REQUIRE(F);
    CHECK(*F == parse("exp(y)"));
    const auto G = antiderivative(parse("exp(t/2 - w)"), "y");
    REQUIRE(G);
    CHECK(*G == parse("y*exp(t/2 - w)"));
}

TEST_CASE("non-elementary integrands are rejected")
{
    CHECK_FALSE(antiderivative(parse("exp(y^2)"), "y"));
    CHECK_FALSE(antiderivative(parse("sin(y)/y"), "y"));
    CHECK_FALSE(antiderivative(parse("1/log(y)"), "y"));
}

TEST_CASE("every returned antiderivative is sound")
{
    std::mt19937_64 rng(505);
    const std::vector<std::string> symbols{"y", "t"};
    const auto d = unit_box();
    int found = 0;
    for (int i = 0; i < 300; ++i) {
        const Expr e = testing::random_expr(rng, symbols, 2);
        const auto F = antiderivative(e, "y");
        if (!F) continue;
        ++found;
        CAPTURE(to_string(e));
        CHECK(equivalent(differentiate(*F, "y"), e, d));
    }
    CHECK(found > 50);
}

TEST_CASE("derivatives of random expressions integrate back")
{
    std::mt19937_64 rng(606);
    const std::vector<std::string> symbols{"y", "t"};
    const auto d = unit_box();
    int found = 0;
    for (int i = 0; i < 200; ++i) {
        const Expr G = testing::random_polynomial(rng, symbols, 3, 3) + exp(Expr::symbol("t") * Expr::symbol("y"));
        const Expr g = differentiate(G, "y");
        const auto F = antiderivative(g, "y");
        if (!F) continue;
        ++found;
        CHECK(equivalent(differentiate(*F, "y"), g, d));
    }
    CHECK(found == 200);
}

}
