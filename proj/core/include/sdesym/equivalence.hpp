#ifndef SDESYM_EQUIVALENCE_HPP
#define SDESYM_EQUIVALENCE_HPP

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdesym/domain.hpp"
#include "sdesym/eval.hpp"
#include "sdesym/expr.hpp"

namespace sdesym {

struct EquivalenceOptions {
    int points = 64;           ///< sampled points per instantiation batch
    int instantiations = 3;    ///< independent opaque-function draws
    double tolerance = 1e-9;   ///< relative: |a-b| <= tol (1 + |a| + |b|)
    std::uint64_t seed = 0x5de5e9a1u;
    int max_attempts_per_point = 200;
    EvalGuard guard{};
};

/// Draws evaluation points uniformly from a domain box, binding every symbol
/// and opaque function of the expressions it was built for.
class PointSampler {
public:
    PointSampler(const Domain& domain, std::set<std::string, std::less<>> symbols,
                 std::set<std::string, std::less<>> functions, std::uint64_t seed);

    /// Redraws the opaque test functions.
    void reinstantiate();
    EvalPoint next();

private:
    Domain domain_;
    std::set<std::string, std::less<>> symbols_;
    std::set<std::string, std::less<>> functions_;
    std::mt19937_64 rng_;
    std::map<std::string, TestFunction, std::less<>> current_;
};

/// Randomized equivalence on the domain. One-sided: `false` is returned only
/// when a sampled point shows a genuine difference. Throws SamplingError
/// when no admissible points can be found.
bool equivalent(const Expr& a, const Expr& b, const Domain& domain, const EquivalenceOptions& options = {});
bool equivalent_to_zero(const Expr& e, const Domain& domain, const EquivalenceOptions& options = {});
/// True when e does not depend on `symbol`: either syntactically or because
/// its partial derivative is equivalent to zero.
bool independent_of(const Expr& e, std::string_view symbol, const Domain& domain,
                    const EquivalenceOptions& options = {});

/// Largest |e| over `points` admissible samples (opaque functions redrawn
/// every points/instantiations samples).
double max_abs_sampled(const Expr& e, const Domain& domain, int points, std::uint64_t seed = 0x9a3c11u,
                       int instantiations = 3, const EvalGuard& guard = {});

}  // namespace sdesym

#endif  // SDESYM_EQUIVALENCE_HPP
