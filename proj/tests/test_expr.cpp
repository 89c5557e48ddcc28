#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "generators.hpp"
#include "sdesym/equivalence.hpp"
#include "sdesym/expr.hpp"
#include "sdesym/oracles.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

TEST_SUITE("expr") {

TEST_CASE("rational arithmetic reduces and detects overflow")
{
    Rational a(6, -8);
    CHECK(a.num() == -3);
    CHECK(a.den() == 4);
    auto s = a + Rational(1, 4);
    REQUIRE(s);
    CHECK(*s == Rational(-1, 2));
    auto p = Rational(2, 3).pow(-2);
    REQUIRE(p);
    CHECK(*p == Rational(9, 4));
    CHECK(Rational(9, 4).root(2) == Rational(3, 2));
    CHECK_FALSE(Rational(2).root(2));
    const auto big = Rational(std::numeric_limits<std::int64_t>::max());
    CHECK_FALSE(big * Rational(2));
    CHECK_FALSE(Rational(0).inverse());
    CHECK(Rational::from_decimal("0.125") == Rational(1, 8));
}

TEST_CASE("overflowing exact arithmetic falls back to doubles")
{
    const Expr big = Expr(std::numeric_limits<std::int64_t>::max());
    const Expr sum = big + big;
    REQUIRE(sum.is_number());
    CHECK_FALSE(sum.number().exact());
    CHECK(sum.number().value() == doctest::Approx(2.0 * 9.223372036854775807e18));
}

TEST_CASE("constructors canonicalize")
{
    const Expr x = Expr::symbol("x");
    const Expr y = Expr::symbol("y");
    CHECK(x + x == Expr(2) * x);
    CHECK(x * x == pow(x, Expr(2)));
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + x == Expr(2) * x + y);
    CHECK((Expr(0) * x).is_zero());
    CHECK((x - x).is_zero());
    CHECK((x / x).is_one());
    CHECK(exp(log(x)) == x);
    CHECK(exp(Expr(0)).is_one());
    CHECK(pow(pow(x, Expr(2)), Expr(3)) == pow(x, Expr(6)));
    CHECK(Expr::rational(2, 4) == Expr::rational(1, 2));
}

TEST_CASE("derivatives of primitives")
{
    const Expr x = Expr::symbol("x");
    CHECK(differentiate(pow(x, Expr(3)), "x") == Expr(3) * pow(x, Expr(2)));
    CHECK(differentiate(exp(Expr(2) * x), "x") == Expr(2) * exp(Expr(2) * x));
    CHECK(differentiate(log(x), "x") == pow(x, Expr(-1)));
    CHECK(differentiate(sin(x), "x") == cos(x));
    CHECK(differentiate(cos(x), "x") == -sin(x));
    CHECK(differentiate(x, "y").is_zero());
    const Expr f = opaque("eta", 0, x * x);
    CHECK(differentiate(f, "x") == Expr(2) * x * opaque("eta", 1, x * x));
}

TEST_CASE("derivative agrees with central differences on 500 random triples")
{
    std::mt19937_64 rng(101);
    const std::vector<std::string> symbols{"x", "y", "t"};
    Domain d;
    for (const auto& s : symbols) d.set(s, Interval{0.5, 2.0});
    int checked = 0;
    int mismatches = 0;
    while (checked < 500) {
        const Expr e = testing::random_expr(rng, symbols, 3);
        const std::string& s = symbols[rng() % symbols.size()];
        const auto point = testing::random_point(rng, d, symbols);
        const Expr de = differentiate(e, s);
        const double exact = evaluate(de, point);
        const double fd = finite_difference(e, s, point, 1e-5);
        if (!std::isfinite(exact) || !std::isfinite(fd)) continue;
        ++checked;
        const double scale = 1.0 + std::fabs(exact) + std::fabs(evaluate(e, point));
        if (std::fabs(exact - fd) > 1e-6 * scale) {
            ++mismatches;
            MESSAGE(to_string(e) << " d/d" << s << ": " << exact << " vs " << fd);
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("differentiation is linear and obeys the product rule")
{
    std::mt19937_64 rng(202);
    const std::vector<std::string> symbols{"x", "t"};
    Domain d;
    d.set("x", Interval{0.5, 2.0});
    d.set("t", Interval{0.0, 1.0});
    for (int i = 0; i < 50; ++i) {
        const Expr f = testing::random_expr(rng, symbols, 3);
        const Expr g = testing::random_expr(rng, symbols, 3);
        const Expr a = Expr(static_cast<int>(rng() % 7) - 3);
        const Expr lhs = differentiate(a * f + g, "x");
        const Expr rhs = a * differentiate(f, "x") + differentiate(g, "x");
        CHECK(equivalent(lhs, rhs, d));
        CHECK(equivalent(differentiate(f * g, "x"), differentiate(f, "x") * g + f * differentiate(g, "x"), d));
    }
}

TEST_CASE("simplify is idempotent and expand preserves values")
{
    std::mt19937_64 rng(303);
    const std::vector<std::string> symbols{"x", "w"};
    Domain d;
    for (int i = 0; i < 100; ++i) {
        const Expr e = testing::random_expr(rng, symbols, 4);
        const Expr s = simplify(e);
        CHECK(simplify(s) == s);
        CHECK(s == e);
        CHECK(equivalent(expand(e), e, d));
        CHECK(expand(expand(e)) == expand(e));
    }
}

TEST_CASE("expand multiplies out sums")
{
    const Expr x = Expr::symbol("x");
    const Expr y = Expr::symbol("y");
    CHECK(expand(pow(x + y, Expr(2))) == x * x + Expr(2) * x * y + y * y);
    CHECK(expand((x + Expr(1)) * (x - Expr(1))) == x * x - Expr(1));
    CHECK(expand(pow(x + y, Expr(2)) - x * x - Expr(2) * x * y - y * y).is_zero());
}

TEST_CASE("substitution is simultaneous")
{
    const Expr x = Expr::symbol("x");
    const Expr y = Expr::symbol("y");
    const Expr e = x + Expr(2) * y;
    CHECK(substitute(e, {{"x", y}, {"y", x}}) == y + Expr(2) * x);
    CHECK(substitute(exp(x), {{"x", log(y)}}) == y);
    CHECK(replace(sin(x) + sin(x) * y, sin(x), y) == y + y * y);
}

TEST_CASE("symbol queries")
{
    const Expr e = parse("x*exp(t) + eta(w)", ParseOptions{{"eta"}});
    CHECK(depends_on(e, "x"));
    CHECK_FALSE(depends_on(e, "y"));
    CHECK(free_symbols(e) == std::set<std::string, std::less<>>{"t", "w", "x"});
    CHECK(opaque_names(e) == std::set<std::string, std::less<>>{"eta"});
    CHECK(tree_size(Expr::symbol("x")) == 1);
}

}
