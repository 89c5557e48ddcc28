#include <doctest.h>

#include "sdesym/equivalence.hpp"
#include "sdesym/error.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

TEST_SUITE("equivalence") {

TEST_CASE("identities hold on the domain")
{
    Domain d;
    d.set("x", Interval{0.5, 2.0});
    CHECK(equivalent(parse("sin(x)^2 + cos(x)^2"), parse("1"), d));
    CHECK(equivalent(parse("exp(2*log(x))"), parse("x^2"), d));
    CHECK(equivalent(parse("(x + 1)^3"), parse("x^3 + 3*x^2 + 3*x + 1"), d));
    CHECK_FALSE(equivalent(parse("x"), parse("x + 1e-6"), d));
    CHECK_FALSE(equivalent_to_zero(parse("x - 1"), d));
}

TEST_CASE("opaque functions are instantiated consistently")
{
    const ParseOptions opts{{"eta"}};
    Domain d;
    CHECK(equivalent(parse("eta(x) + eta(x)", opts), parse("2*eta(x)", opts), d));
    CHECK(equivalent_to_zero(differentiate(parse("eta(2*x)", opts), "x") - parse("2*eta'(2*x)", opts), d));
    CHECK_FALSE(equivalent(parse("eta(x)", opts), parse("eta'(x)", opts), d));
    CHECK_FALSE(equivalent(parse("eta(x)", opts), parse("x", opts), d));
}

TEST_CASE("independence")
{
    Domain d;
    d.set("y", Interval{0.5, 2.0});
    CHECK(independent_of(parse("t + 1"), "y", d));
    CHECK(independent_of(parse("exp(log(y) - log(y))"), "y", d));
    CHECK(independent_of(parse("sin(y)^2 + cos(y)^2 + t"), "y", d));
    CHECK_FALSE(independent_of(parse("y*t"), "y", d));
}

TEST_CASE("a domain without admissible points raises a sampling error")
{
    Domain d;
    d.set("y", Interval{-2.0, -1.0});
    CHECK_THROWS_AS(equivalent_to_zero(parse("log(y)"), d), SamplingError);
}

TEST_CASE("sampled maxima")
{
    Domain d;
    d.set("x", Interval{0.0, 2.0});
    const double m = max_abs_sampled(parse("x^2"), d, 200);
    CHECK(m <= 4.0);
    CHECK(m > 3.5);
    CHECK(max_abs_sampled(parse("0"), d, 10) == 0.0);
}

}
