#ifndef SDESYM_TESTS_GENERATORS_HPP
#define SDESYM_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "sdesym/eval.hpp"
#include "sdesym/model.hpp"

namespace sdesym::testing {

/// Smooth random expression over `symbols`, finite on [0.5, 2]^k: sums,
/// products, small powers, exp of bounded arguments, log(u^2 + 1),
/// 1/(u^2 + 1) and sin/cos.
Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& symbols, int depth = 3);

/// Sum of `terms` monomials with small integer coefficients and degree <= max_degree.
Expr random_polynomial(std::mt19937_64& rng, const std::vector<std::string>& symbols, int max_degree = 2,
                       int terms = 3);

/// Ito system with polynomial coefficients in the states and t.
SdeSystem random_polynomial_system(std::mt19937_64& rng, std::size_t n, std::size_t m);

struct SystemAndField {
    SdeSystem system;
    VectorField field;
};

/// Ito system with constant diffusion and a deterministic simple field.
/// Even `index`: linear drift with field exp(c t) or 0, a true symmetry;
/// odd `index`: random polynomial drift and field.
SystemAndField random_constant_diffusion_case(std::mt19937_64& rng, int index);

/// Point drawn from the default boxes of `domain` for `symbols`.
EvalPoint random_point(std::mt19937_64& rng, const Domain& domain, const std::vector<std::string>& symbols);

std::string model_path(const std::string& name);
/// Every .sde file of the models directory, sorted.
std::vector<std::string> fixture_names();
ModelFile load_fixture(const std::string& name);

}  // namespace sdesym::testing

#endif  // SDESYM_TESTS_GENERATORS_HPP
