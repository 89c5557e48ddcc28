#ifndef SDESYM_KOZLOV_HPP
#define SDESYM_KOZLOV_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdesym/calculus.hpp"
#include "sdesym/lie.hpp"
#include "sdesym/model.hpp"
#include "sdesym/symmetry.hpp"

namespace sdesym {

struct StraighteningMap {
    Expr Phi;                    ///< x = Phi(y, t, w)
    std::string source;          ///< candidate or map name, may be empty
    std::optional<Expr> inverse; ///< y = inverse(x, t, w); nullopt means implicit
    std::string new_state = "x";
};

/// Phi = antiderivative of 1/phi in the state of the scalar system, checked
/// against phi Phi_y == 1. Throws NotElementary or PreconditionError.
StraighteningMap straighten(const SdeSystem& sys, const Expr& phi, const CheckOptions& options = {});

/// Symbolic inverse of x = e(y, ...) in y for chains of affine maps, powers,
/// exp and log; nullopt otherwise.
std::optional<Expr> invert_map(const Expr& e, std::string_view y, const Expr& x);

enum class Integrability { IntegrableIto, IntegrableQuadrature, NotIntegrableForm };
std::string_view to_string(Integrability c);
Integrability classify_transformed(const TransformedSde& t);

struct ConditionCheck {
    std::string name;
    std::vector<Expr> residuals;
    bool satisfied = false;
};

/// One equation of a system reduction in adapted coordinates.
struct ReducedEquation {
    std::string variable;       ///< y1.. for reduced, z1.. for reconstruction
    Expr coordinate;            ///< as a function of the original variables
    Expr drift;                 ///< in the original variables
    std::vector<Expr> noise;
    Expr drift_new;             ///< in the new variables when the inverse is known, else drift
    std::vector<Expr> noise_new;
    bool reconstruction = false;
};

struct ReductionResult {
    StraighteningMap map;
    TransformedSde transformed;
    Integrability classification = Integrability::NotIntegrableForm;
    std::optional<FreeFunctionAnsatz> ansatz;
    std::vector<ConditionCheck> conditions;
    // System reductions only.
    std::size_t orbit_dimension = 0;
    std::vector<ReducedEquation> equations;
    std::vector<std::size_t> derived_dimensions;
};

/// Deterministic simple symmetry of a scalar Ito system: straighten, change
/// variables, classify. Throws PreconditionError for an unverified or
/// random candidate.
ReductionResult reduce_deterministic(const SdeSystem& sys, const VectorField& v, const CheckOptions& options = {});

struct RandomReductionOptions {
    CheckOptions check{};
    /// Throw HypothesisError when the result is not in Ito form instead of
    /// reporting the failing conditions.
    bool require_ito_form = false;
};

/// Random simple symmetry: Phi = Phi0 + b(t) + c w with Phi0 the integral
/// of dy/phi. The conditions (ww, tw parts and bcomp) are evaluated and
/// reported.
ReductionResult reduce_random(const SdeSystem& sys, const VectorField& v, const FreeFunctionAnsatz& ansatz,
                              const RandomReductionOptions& options = {});

/// Change of variables by a given map, with classification and the
/// straightening check against the field 1/Phi_y.
ReductionResult reduce_with_map(const SdeSystem& sys, const Expr& Phi, const CheckOptions& options = {});

struct NecessityResult {
    VectorField field;           ///< (1/Phi_y) d_y
    SymmetryReport symmetry;
    CompatibilityData compatibility;
    bool passed() const { return symmetry.verified() && compatibility.verdict; }
};

NecessityResult necessity_roundtrip(const SdeSystem& sys, const Expr& Phi, const CheckOptions& options = {});

struct SystemReductionOptions {
    CheckOptions check{};
    LieOptions lie{};
};

/// Reduction by r simple deterministic symmetry generators with regular
/// r-dimensional orbits. `coordinates` lists the reduced coordinates first
/// and the r reconstruction coordinates last; when absent they are derived
/// for generators acting on one coordinate each. Throws HypothesisError
/// naming the failed hypothesis.
ReductionResult reduce_system_solvable(const SdeSystem& sys, const std::vector<VectorField>& generators,
                                       const std::optional<NamedCoordinates>& coordinates = std::nullopt,
                                       const SystemReductionOptions& options = {});

}  // namespace sdesym

#endif  // SDESYM_KOZLOV_HPP
