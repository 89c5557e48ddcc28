#ifndef SDESYM_CALCULUS_HPP
#define SDESYM_CALCULUS_HPP

#include <string>
#include <vector>

#include "sdesym/equivalence.hpp"
#include "sdesym/expr.hpp"
#include "sdesym/model.hpp"

namespace sdesym {

/// rho^i = 1/2 sum_{k,j} (d sigma^i_j / d x^k) sigma^k_j, so that f = b + rho.
std::vector<Expr> drift_correction(const SdeSystem& sys);

/// Ito Laplacian of u(x, t, w):
///   sum_{j,k} (sigma sigma^T)^{jk} u_{x^j x^k} + 2 sum_{j,k} sigma^j_k u_{x^j w^k} + sum_k u_{w^k w^k}.
Expr ito_laplacian(const Expr& u, const SdeSystem& sys);

/// Flip the interpretation, shifting the drift by rho. Throws
/// PreconditionError when the input has the other interpretation.
SdeSystem ito_to_stratonovich(const SdeSystem& sys);
SdeSystem stratonovich_to_ito(const SdeSystem& sys);

/// Coefficients of the equation satisfied by new variables x^a = G^a(x, t, w).
struct TransformedSde {
    std::vector<std::string> states;           ///< names of the new variables
    std::vector<Expr> drift;                   ///< in the old (x, t, w)
    std::vector<std::vector<Expr>> noise;      ///< [a][k]
    bool state_free = false;                   ///< no coefficient depends on an old state
    bool noise_free = false;                   ///< no coefficient depends on w
    bool ito_form = false;                     ///< state_free && noise_free

    const Expr& scalar_drift() const { return drift.at(0); }
    const Expr& scalar_noise() const { return noise.at(0).at(0); }
};

/// Ito formula applied to G (any number of components). Coefficients are
/// expanded; the freeness flags use equivalence of partial derivatives to 0
/// on the system's sampling domain.
TransformedSde ito_change_of_variables(const SdeSystem& sys, const std::vector<Expr>& maps,
                                       const std::vector<std::string>& new_states,
                                       const EquivalenceOptions& options = {});
/// Scalar form: x = phi(y, t, w).
TransformedSde ito_change_of_variables(const SdeSystem& sys, const Expr& phi, const std::string& new_state = "x",
                                       const EquivalenceOptions& options = {});

/// First-order coefficients in eps of the equation satisfied by x + eps xi
/// minus the original coefficients evaluated at x + eps xi. Computed by
/// composing the Ito (or Stratonovich chain-rule) map with substitution and
/// differentiating in eps, independently of the determining equations.
struct InfinitesimalResidual {
    std::vector<Expr> drift;                ///< n
    std::vector<std::vector<Expr>> noise;   ///< n x m
};
InfinitesimalResidual infinitesimal_symbolic_residual(const SdeSystem& sys, const VectorField& v);

}  // namespace sdesym

#endif  // SDESYM_CALCULUS_HPP
