#ifndef SDESYM_SIMULATE_HPP
#define SDESYM_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sdesym/domain.hpp"
#include "sdesym/model.hpp"

namespace sdesym {

enum class Scheme { EulerMaruyama, StratonovichHeun };
std::string_view to_string(Scheme s);
/// Accepts "euler-maruyama"/"em" and "heun"/"stratonovich-heun".
Scheme parse_scheme(std::string_view text);
Scheme default_scheme(Interpretation i);

struct SimulationConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double h = 1e-3;
    std::vector<double> x0;
    std::size_t paths = 100;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::EulerMaruyama;
    /// Paths leaving these boxes (per state) are excluded.
    std::map<std::string, Interval, std::less<>> bounds;
    /// Increments are drawn on the grid h / refinement and summed, so runs
    /// at h and h / refinement share their Brownian paths.
    std::size_t refinement = 1;
    unsigned threads = 0;  ///< 0: hardware concurrency

    std::size_t steps() const;
    /// Throws PreconditionError for h <= 0, t1 <= t0, a non-integer step
    /// count, or zero paths.
    void validate() const;
};

/// Builds a config from model defaults, falling back to the scheme
/// matching the interpretation and to x0 = 1 for every state.
SimulationConfig config_from(const ModelFile& model);

struct PathSet {
    std::vector<double> times;
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    /// Per path: (steps + 1) x n row-major; NaN after exclusion.
    std::vector<std::vector<double>> states;
    /// Per path: steps x m row-major Wiener increments.
    std::vector<std::vector<double>> increments;
    std::vector<bool> excluded;
    std::size_t excluded_count = 0;

    std::size_t paths() const { return states.size(); }
    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
    double x(std::size_t path, std::size_t step, std::size_t i) const { return states[path][step * n + i]; }
    double dw(std::size_t path, std::size_t step, std::size_t k) const { return increments[path][step * m + k]; }
    /// Cumulative noise w^k at grid point `step` (w = 0 at t0).
    std::vector<double> w(std::size_t path, std::size_t step) const;
};

/// Wiener increments of one path and noise on the config grid (nested:
/// each is the sum of `refinement` fine increments).
std::vector<double> wiener_increments(std::uint64_t seed, std::size_t path, std::size_t noise, std::size_t steps,
                                      double h, std::size_t refinement);

/// Euler-Maruyama for Ito systems, Heun predictor-corrector for
/// Stratonovich. Throws PreconditionError when scheme and interpretation
/// disagree or coefficients reference opaque functions.
PathSet simulate(const SdeSystem& sys, const SimulationConfig& cfg);

/// CSV with header t,path,x1..xn,w1..wm (cumulative w), one row per grid
/// point per path; excluded paths are written up to their exit.
void write_csv(std::ostream& os, const PathSet& paths);

struct IncrementSanity {
    double mean = 0.0;
    double variance = 0.0;
    double h = 0.0;
    bool mean_ok = false;
    bool variance_ok = false;
    bool gated = false;  ///< fewer than 1000 increments: informative only
    bool ok() const { return gated || (mean_ok && variance_ok); }
};

IncrementSanity increment_sanity(const PathSet& paths);

}  // namespace sdesym

#endif  // SDESYM_SIMULATE_HPP
