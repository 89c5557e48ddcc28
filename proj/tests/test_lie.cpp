#include <doctest.h>

#include "generators.hpp"
#include "sdesym/equivalence.hpp"
#include "sdesym/error.hpp"
#include "sdesym/lie.hpp"
#include "sdesym/parse.hpp"

using namespace sdesym;

namespace {

VectorField field(std::initializer_list<const char*> xi)
{
    VectorField v;
    for (const char* s : xi) v.xi.push_back(parse(s));
    v.tau = Expr(0);
    return v;
}

bool same_field(const VectorField& a, const VectorField& b, const Domain& d)
{
    for (std::size_t i = 0; i < a.xi.size(); ++i) {
        if (!equivalent(a.xi[i], b.xi[i], d)) return false;
    }
    return true;
}

VectorField sum(const VectorField& a, const VectorField& b, const VectorField& c)
{
    VectorField out;
    out.tau = Expr(0);
    for (std::size_t i = 0; i < a.xi.size(); ++i) out.xi.push_back(a.xi[i] + b.xi[i] + c.xi[i]);
    return out;
}

}  // namespace

TEST_SUITE("lie") {

TEST_CASE("commutators of coordinate fields")
{
    const auto sys = testing::load_fixture("growth.sde").system;
    const auto b = commutator(field({"1"}), field({"x"}), sys);
    CHECK(b.xi[0] == Expr(1));
    const auto c = commutator(field({"x"}), field({"x^2"}), sys);
    CHECK(c.xi[0] == parse("x^2"));
    VectorField general{{parse("1")}, parse("t")};
    CHECK_THROWS_AS(commutator(general, field({"x"}), sys), PreconditionError);
}

TEST_CASE("antisymmetry and the Jacobi identity on random fields")
{
    const auto sys = testing::load_fixture("ou_partial.sde").system;
    const auto d = sys.sampling_domain();
    std::mt19937_64 rng(1001);
    const std::vector<std::string> vars{"x1", "x2", "t", "w1"};
    auto random_field = [&] {
        VectorField v;
        v.tau = Expr(0);
        for (int i = 0; i < 2; ++i) v.xi.push_back(testing::random_expr(rng, vars, 2));
        return v;
    };
    for (int i = 0; i < 20; ++i) {
        const auto a = random_field();
        const auto b = random_field();
        const auto c = random_field();
        const auto ab = commutator(a, b, sys);
        auto ba = commutator(b, a, sys);
        for (auto& e : ba.xi) e = -e;
        CHECK(same_field(ab, ba, d));
        const auto jac = sum(commutator(a, commutator(b, c, sys), sys), commutator(b, commutator(c, a, sys), sys),
                             commutator(c, commutator(a, b, sys), sys));
        for (const auto& e : jac.xi) CHECK(equivalent_to_zero(e, d));
    }
}

TEST_CASE("solvability of small algebras")
{
    const auto lin = testing::load_fixture("linear2d.sde");
    const auto abelian = solvable_check({lin.candidates[0].field, lin.candidates[1].field}, lin.system);
    CHECK(abelian.closed);
    CHECK(abelian.solvable);
    CHECK(abelian.derived_dimensions == std::vector<std::size_t>{2, 0});

    const auto g = testing::load_fixture("growth.sde").system;
    const auto affine = solvable_check({field({"1"}), field({"x"})}, g);
    CHECK(affine.closed);
    CHECK(affine.solvable);
    CHECK(affine.derived_dimensions == std::vector<std::size_t>{2, 1, 0});

    const auto sl2 = solvable_check({field({"1"}), field({"x"}), field({"x^2"})}, g);
    CHECK(sl2.closed);
    CHECK_FALSE(sl2.solvable);

    const auto open = solvable_check({field({"1"}), field({"x^2"})}, g);
    CHECK_FALSE(open.closed);
}

TEST_CASE("orbit ranks")
{
    const auto lin = testing::load_fixture("linear2d.sde");
    const std::vector<VectorField> translations{lin.candidates[0].field, lin.candidates[1].field};
    const auto ranks = sampled_orbit_ranks(translations, lin.system);
    CHECK(ranks.size() == 20);
    for (auto r : ranks) CHECK(r == 2);
    const std::vector<VectorField> degenerate{lin.candidates[2].field, lin.candidates[3].field};
    for (auto r : sampled_orbit_ranks(degenerate, lin.system)) CHECK(r == 1);
    CHECK(span_dimension(degenerate, lin.system) == 1);
    CHECK(span_dimension(translations, lin.system) == 2);
}

TEST_CASE("numeric rank")
{
    CHECK(numeric_rank({1, 0, 0, 1}, 2, 2, 1e-8) == 2);
    CHECK(numeric_rank({1, 2, 2, 4}, 2, 2, 1e-8) == 1);
    CHECK(numeric_rank({1, 2, 2, 4 + 1e-12}, 2, 2, 1e-8) == 1);
    CHECK(numeric_rank({0, 0, 0, 0}, 2, 2, 1e-8) == 0);
    CHECK(numeric_rank({1, 0, 0, 0, 1, 1}, 3, 2, 1e-8) == 2);
}

}
