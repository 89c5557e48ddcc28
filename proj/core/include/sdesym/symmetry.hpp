#ifndef SDESYM_SYMMETRY_HPP
#define SDESYM_SYMMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdesym/equivalence.hpp"
#include "sdesym/expr.hpp"
#include "sdesym/model.hpp"

namespace sdesym {

struct CheckOptions {
    EquivalenceOptions equivalence{};
    int numeric_samples = 200;            ///< points for the max-residual estimate
    std::uint64_t numeric_seed = 0x77e1a5u;
};

enum class ResidualKind { Ito, Stratonovich, DetStra };
std::string_view to_string(ResidualKind k);

struct SymmetryReport {
    ResidualKind kind = ResidualKind::Ito;
    Classification classification;
    std::vector<Expr> drift_residuals;                 ///< R1^i
    std::vector<std::vector<Expr>> diffusion_residuals; ///< R2^i_k
    std::vector<bool> drift_zero;
    std::vector<std::vector<bool>> diffusion_zero;
    double max_numeric_residual = 0.0;

    bool drift_verified() const;
    bool diffusion_verified() const;
    bool verified() const { return drift_verified() && diffusion_verified(); }
};

/// R1^i = xi^i_t + f^j xi^i_j - xi^j f^i_j + 1/2 Delta xi^i,
/// R2^i_k = xi^i_{w_k} + sigma^j_k xi^i_j - xi^j sigma^i_{k,j}.
/// Throws PreconditionError for tau != 0 or a Stratonovich system.
SymmetryReport residual_ito(const SdeSystem& sys, const VectorField& v, const CheckOptions& options = {});
/// Same with b in place of f and no Laplacian term.
SymmetryReport residual_stratonovich(const SdeSystem& sys, const VectorField& v, const CheckOptions& options = {});
/// Ito system, drift residual built from f and the correction rho:
/// xi_t + f^j xi_j - xi^j f_j - (rho^j xi_j - xi^j rho_j).
SymmetryReport residual_detstra(const SdeSystem& sys, const VectorField& v, const CheckOptions& options = {});
/// Picks residual_ito or residual_stratonovich from the interpretation.
SymmetryReport check_symmetry(const SdeSystem& sys, const VectorField& v, const CheckOptions& options = {});

struct CompatibilityData {
    Expr gamma;      ///< d/dw (1/phi)
    Expr residual;   ///< S gamma_t + S_t gamma - F gamma_w - 1/2 (S gamma_ww + S^2 gamma_yw)
    bool verdict = false;
    double max_numeric_residual = 0.0;
};

/// Scalar Ito systems only. Throws PreconditionError when phi changes sign
/// or vanishes on the sampled domain.
CompatibilityData bcomp_check(const SdeSystem& sys, const Expr& phi, const CheckOptions& options = {});

/// residual^i = sum_k (sigma sigma^T)^{ki} d_k (tau_t + f^j tau_j + 1/2 sigma^m_q sigma^j_q tau_mj).
std::vector<Expr> unal_tau_condition(const SdeSystem& sys, const Expr& tau);

}  // namespace sdesym

#endif  // SDESYM_SYMMETRY_HPP
