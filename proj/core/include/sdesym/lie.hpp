#ifndef SDESYM_LIE_HPP
#define SDESYM_LIE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdesym/equivalence.hpp"
#include "sdesym/model.hpp"

namespace sdesym {

/// [a, b]^i = a^j d_j b^i - b^j d_j a^i over the states of `sys`.
/// Throws PreconditionError unless both fields are simple.
VectorField commutator(const VectorField& a, const VectorField& b, const SdeSystem& sys);

struct LieOptions {
    int sample_points = 20;
    double rank_threshold = 1e-8;  ///< singular values below threshold * max(1, s_max) count as zero
    std::uint64_t seed = 0x11e5eedu;
};

/// Dimension over the reals of span{fields}, from the numeric rank of their
/// values stacked over sampled points.
std::size_t span_dimension(const std::vector<VectorField>& fields, const SdeSystem& sys, const LieOptions& options = {});

struct SolvabilityResult {
    bool closed = false;    ///< brackets of generators stay in their span
    bool solvable = false;  ///< derived series reaches {0}
    std::vector<std::size_t> derived_dimensions;  ///< dim g, dim g', dim g'', ... ending in 0 when solvable
};

SolvabilityResult solvable_check(const std::vector<VectorField>& generators, const SdeSystem& sys,
                                 const LieOptions& options = {});

/// Numeric rank of the n x r matrix xi^i_a at `point` (opaque functions in
/// the fields are not supported here).
std::size_t orbit_rank(const std::vector<VectorField>& generators, const SdeSystem& sys, const EvalPoint& point,
                       double threshold = 1e-8);

/// Orbit rank at `options.sample_points` points drawn from the sampling
/// domain, in draw order.
std::vector<std::size_t> sampled_orbit_ranks(const std::vector<VectorField>& generators, const SdeSystem& sys,
                                             const LieOptions& options = {});

/// Numeric rank of a dense row-major matrix.
std::size_t numeric_rank(const std::vector<double>& values, std::size_t rows, std::size_t cols, double threshold);

}  // namespace sdesym

#endif  // SDESYM_LIE_HPP
