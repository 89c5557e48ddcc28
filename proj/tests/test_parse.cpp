#include <doctest.h>

#include "generators.hpp"
#include "sdesym/error.hpp"
#include "sdesym/eval.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

TEST_SUITE("parse") {

TEST_CASE("precedence and associativity")
{
    const Expr x = Expr::symbol("x");
    CHECK(parse("-x^2") == -pow(x, Expr(2)));
    CHECK(parse("2^-1") == Expr::rational(1, 2));
    CHECK(parse("1 - x - x") == Expr(1) - Expr(2) * x);
    CHECK(parse("x / 2 / 2") == x / Expr(4));
    CHECK(expand(parse("(1 + x)*2")) == Expr(2) + Expr(2) * x);
    CHECK(parse("exp(-y) - 0.5*exp(-2*y)") ==
          exp(-Expr::symbol("y")) - Expr::rational(1, 2) * exp(Expr(-2) * Expr::symbol("y")));
    CHECK(parse("sqrt(x)") == pow(x, Expr::rational(1, 2)));
    CHECK(parse("neg(x)") == -x);
}

TEST_CASE("decimal literals are exact unless written with an exponent")
{
    const Expr a = parse("0.001");
    REQUIRE(a.is_number());
    CHECK(a.number().exact());
    CHECK(a == Expr::rational(1, 1000));
    const Expr b = parse("1e-3");
    REQUIRE(b.is_number());
    CHECK_FALSE(b.number().exact());
    CHECK(b.number().value() == 1e-3);
}

TEST_CASE("opaque functions need a declaration")
{
    CHECK_THROWS_AS(parse("eta(x)"), ParseError);
    const ParseOptions opts{{"eta"}};
    const Expr e = parse("eta''(x + 1)", opts);
    REQUIRE(e.kind() == Kind::Opaque);
    CHECK(e.name() == "eta");
    CHECK(e.order() == 2);
    CHECK(to_string(e) == "eta''(1 + x)");
    CHECK_THROWS_AS(parse("x'(1)", opts), ParseError);
    CHECK_THROWS_AS(parse("exp'(1)", opts), ParseError);
}

TEST_CASE("syntax errors carry positions")
{
    const char* bad[] = {"", "x +", "(x", "x)", "2 ** x", "exp x", "1.2.3"};
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse(text), ParseError);
    }
    try {
        parse("x + * y");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("printing round-trips through the parser")
{
    std::mt19937_64 rng(404);
    const std::vector<std::string> symbols{"x", "t", "w"};
    for (int i = 0; i < 300; ++i) {
        const Expr e = testing::random_expr(rng, symbols, 4);
        CAPTURE(to_string(e));
        CHECK(parse(to_string(e)) == e);
    }
    const ParseOptions opts{{"eta"}};
    const Expr o = parse("y*eta'(exp(-t) + t/2 - w + log(y))", opts);
    CHECK(parse(to_string(o), opts) == o);
}

TEST_CASE("evaluation binds symbols and test functions")
{
    const ParseOptions opts{{"eta"}};
    EvalPoint p;
    p.values = {{"x", 2.0}};
    p.functions["eta"] = TestFunction({1.0, 0.0, 3.0});
    CHECK(evaluate(parse("eta(x)", opts), p) == doctest::Approx(13.0));
    CHECK(evaluate(parse("eta'(x)", opts), p) == doctest::Approx(12.0));
    CHECK(evaluate(parse("x^3 - log(x)", opts), p) == doctest::Approx(8.0 - std::log(2.0)));
    CHECK_THROWS_AS(evaluate(parse("y"), p), Error);
    CHECK_FALSE(evaluate_guarded(parse("log(x - 2)"), p));
    CHECK_FALSE(evaluate_guarded(parse("1/(x - 2)"), p));
    const CompiledExpr c(parse("x^2*eta(x) + 1", opts), {"x"}, p.functions);
    const double slot[] = {2.0};
    CHECK(c(slot) == doctest::Approx(53.0));
}

}
