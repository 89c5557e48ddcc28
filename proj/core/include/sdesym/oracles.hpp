#ifndef SDESYM_ORACLES_HPP
#define SDESYM_ORACLES_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "sdesym/calculus.hpp"
#include "sdesym/eval.hpp"
#include "sdesym/simulate.hpp"

namespace sdesym {

/// Central difference (e(s + step) - e(s - step)) / (2 step) at `point`.
double finite_difference(const Expr& e, std::string_view symbol, const EvalPoint& point, double step = 1e-5);

struct PathwiseResult {
    double median_sup_error = 0.0;
    std::vector<double> sup_errors;  ///< per retained path
    std::size_t excluded = 0;
};

/// Simulates `original`, integrates the reduced scalar equation left-point
/// on the same increments from Phi(y0, t0, 0), and compares Phi(y, t, w)
/// with the reduced solution along the grid.
PathwiseResult pathwise_check(const SdeSystem& original, const TransformedSde& reduced, const Expr& Phi,
                              const SimulationConfig& cfg);

struct OrderEstimate {
    double error_coarse = 0.0;  ///< at h, increments summed from h / 4
    double error_fine = 0.0;    ///< at h / 4
    double order = 0.0;         ///< log4(error_coarse / error_fine)
    bool skipped = false;       ///< both errors at rounding level
};

OrderEstimate strong_order_estimate(const SdeSystem& original, const TransformedSde& reduced, const Expr& Phi,
                                    const SimulationConfig& cfg);

struct ScalingOptions {
    std::vector<double> eps{1e-2, 1e-3, 1e-4};
    double probe_step = 1e-7;      ///< delta of the one-step probe
    std::size_t max_points = 2000; ///< path points used, evenly strided
    double floor = 1e-5;           ///< defect / eps below this: no first-order term
};

struct ScalingResult {
    std::vector<double> eps;
    std::vector<double> defects;       ///< RMS one-step defect per eps
    std::optional<double> exponent;    ///< log-log slope; nullopt when all defects are 0
    bool below_floor = false;          ///< max defect / eps <= floor
    std::size_t points = 0;
    /// Second-order defect, or no measurable first-order term.
    bool symmetric(double threshold = 1.7) const { return below_floor || (exponent && *exponent >= threshold); }
};

/// Maps simulated paths x -> x + eps xi(x, t, w) and measures, at each path
/// point, the one-step defect of the mapped process against the original
/// coefficients evaluated on it. A probe step of size delta with two-point
/// noise +-sqrt(delta) estimates the drift and diffusion of the mapped
/// process.
ScalingResult epsilon_symmetry_scaling(const SdeSystem& sys, const VectorField& v, const SimulationConfig& cfg,
                                       const ScalingOptions& options = {});

}  // namespace sdesym

#endif  // SDESYM_ORACLES_HPP
