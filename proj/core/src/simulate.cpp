#include "sdesym/simulate.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "parallel.hpp"
#include "sdesym/error.hpp"
#include "sdesym/eval.hpp"
#include "sdesym/rng.hpp"

namespace sdesym {

std::string_view to_string(Scheme s)
{
    return s == Scheme::EulerMaruyama ? "euler-maruyama" : "heun";
}

Scheme parse_scheme(std::string_view text)
{
    if (text == "euler-maruyama" || text == "em" || text == "euler") return Scheme::EulerMaruyama;
    if (text == "heun" || text == "stratonovich-heun") return Scheme::StratonovichHeun;
    throw PreconditionError("unknown scheme '" + std::string(text) + "'");
}

Scheme default_scheme(Interpretation i)
{
    return i == Interpretation::Ito ? Scheme::EulerMaruyama : Scheme::StratonovichHeun;
}

std::size_t SimulationConfig::steps() const
{
    return static_cast<std::size_t>(std::llround((t1 - t0) / h));
}

void SimulationConfig::validate() const
{
    if (!(h > 0.0)) throw PreconditionError("step size h must be positive");
    if (!(t1 > t0)) throw PreconditionError("t1 must exceed t0");
    const double ratio = (t1 - t0) / h;
    if (std::fabs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio)) {
        throw PreconditionError("(t1 - t0) / h must be an integer");
    }
    if (paths == 0) throw PreconditionError("at least one path is required");
    if (refinement == 0) throw PreconditionError("refinement must be at least 1");
}

SimulationConfig config_from(const ModelFile& model)
{
    const auto& d = model.simulation;
    SimulationConfig cfg;
    if (d.t0) cfg.t0 = *d.t0;
    if (d.t1) cfg.t1 = *d.t1;
    if (d.h) cfg.h = *d.h;
    cfg.x0 = d.x0 ? *d.x0 : std::vector<double>(model.system.n(), 1.0);
    if (d.paths) cfg.paths = *d.paths;
    if (d.seed) cfg.seed = *d.seed;
    cfg.scheme = d.scheme ? parse_scheme(*d.scheme) : default_scheme(model.system.interpretation);
    cfg.bounds = d.bounds;
    return cfg;
}

std::vector<double> PathSet::w(std::size_t path, std::size_t step) const
{
    std::vector<double> out(m, 0.0);
    for (std::size_t s = 0; s < step; ++s) {
        for (std::size_t k = 0; k < m; ++k) out[k] += dw(path, s, k);
    }
    return out;
}

std::vector<double> wiener_increments(std::uint64_t seed, std::size_t path, std::size_t noise, std::size_t steps,
                                      double h, std::size_t refinement)
{
    NormalStream stream(seed, path, noise);
    const double fine_scale = std::sqrt(h / static_cast<double>(refinement));
    std::vector<double> out(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        double acc = 0.0;
        for (std::size_t r = 0; r < refinement; ++r) acc += fine_scale * stream.normal(s * refinement + r);
        out[s] = acc;
    }
    return out;
}

namespace {

struct Coefficients {
    std::vector<std::string> slots;
    std::vector<CompiledExpr> drift;
    std::vector<CompiledExpr> diffusion;  // n x m row-major

    explicit Coefficients(const SdeSystem& sys)
    {
        slots = sys.states;
        slots.push_back(sys.time);
        slots.insert(slots.end(), sys.noises.begin(), sys.noises.end());
        for (const auto& f : sys.drift) {
            if (!opaque_names(f).empty()) throw PreconditionError("cannot simulate coefficients with opaque functions");
            drift.emplace_back(f, slots);
        }
        for (const auto& row : sys.diffusion) {
            for (const auto& s : row) {
                if (!opaque_names(s).empty()) throw PreconditionError("cannot simulate coefficients with opaque functions");
                diffusion.emplace_back(s, slots);
            }
        }
    }
};

}  // namespace

PathSet simulate(const SdeSystem& sys, const SimulationConfig& cfg)
{
    cfg.validate();
    if (cfg.scheme != default_scheme(sys.interpretation)) {
        throw PreconditionError("scheme " + std::string(to_string(cfg.scheme)) + " does not match the " +
                                std::string(to_string(sys.interpretation)) + " interpretation");
    }
    const std::size_t n = sys.n();
    const std::size_t m = sys.m();
    if (cfg.x0.size() != n) throw PreconditionError("x0 has the wrong dimension");
    const Coefficients coeffs(sys);
    std::vector<std::pair<std::size_t, Interval>> bounds;
    for (const auto& [name, iv] : cfg.bounds) {
        for (std::size_t i = 0; i < n; ++i) {
            if (sys.states[i] == name) bounds.emplace_back(i, iv);
        }
    }
    const std::size_t steps = cfg.steps();

    PathSet ps;
    ps.n = n;
    ps.m = m;
    ps.seed = cfg.seed;
    ps.times.resize(steps + 1);
    for (std::size_t s = 0; s <= steps; ++s) ps.times[s] = cfg.t0 + static_cast<double>(s) * cfg.h;
    ps.states.assign(cfg.paths, {});
    ps.increments.assign(cfg.paths, {});
    ps.excluded.assign(cfg.paths, false);
    std::vector<char> excluded(cfg.paths, 0);

    detail::parallel_for(cfg.paths, cfg.threads, [&](std::size_t p) {
        auto& inc = ps.increments[p];
        inc.resize(steps * m);
        for (std::size_t k = 0; k < m; ++k) {
            auto col = wiener_increments(cfg.seed, p, k, steps, cfg.h, cfg.refinement);
            for (std::size_t s = 0; s < steps; ++s) inc[s * m + k] = col[s];
        }
        auto& xs = ps.states[p];
        xs.assign((steps + 1) * n, std::numeric_limits<double>::quiet_NaN());
        std::copy(cfg.x0.begin(), cfg.x0.end(), xs.begin());
        std::vector<double> slot(n + 1 + m, 0.0);
        std::vector<double> pred_slot(n + 1 + m, 0.0);
        std::vector<double> a(n), b(n * m);
        for (std::size_t s = 0; s < steps; ++s) {
            const double* x = &xs[s * n];
            double* next = &xs[(s + 1) * n];
            std::copy(x, x + n, slot.begin());
            slot[n] = ps.times[s];
            for (std::size_t i = 0; i < n; ++i) a[i] = coeffs.drift[i](slot);
            for (std::size_t j = 0; j < n * m; ++j) b[j] = coeffs.diffusion[j](slot);
            for (std::size_t i = 0; i < n; ++i) {
                double v = x[i] + a[i] * cfg.h;
                for (std::size_t k = 0; k < m; ++k) v += b[i * m + k] * inc[s * m + k];
                next[i] = v;
            }
            if (cfg.scheme == Scheme::StratonovichHeun) {
                std::copy(slot.begin(), slot.end(), pred_slot.begin());
                std::copy(next, next + n, pred_slot.begin());
                pred_slot[n] = ps.times[s + 1];
                for (std::size_t k = 0; k < m; ++k) pred_slot[n + 1 + k] += inc[s * m + k];
                for (std::size_t i = 0; i < n; ++i) {
                    double v = x[i] + 0.5 * (a[i] + coeffs.drift[i](pred_slot)) * cfg.h;
                    for (std::size_t k = 0; k < m; ++k) {
                        v += 0.5 * (b[i * m + k] + coeffs.diffusion[i * m + k](pred_slot)) * inc[s * m + k];
                    }
                    next[i] = v;
                }
            }
            bool bad = false;
            for (std::size_t i = 0; i < n; ++i) bad = bad || !std::isfinite(next[i]);
            for (const auto& [i, iv] : bounds) bad = bad || !iv.contains(next[i]);
            if (bad) {
                std::fill(next, next + n, std::numeric_limits<double>::quiet_NaN());
                excluded[p] = 1;
                break;
            }
            // Cumulative w for the next step.
            for (std::size_t k = 0; k < m; ++k) slot[n + 1 + k] += inc[s * m + k];
        }
    });
    for (std::size_t p = 0; p < cfg.paths; ++p) {
        ps.excluded[p] = excluded[p] != 0;
        ps.excluded_count += excluded[p];
    }
    return ps;
}

void write_csv(std::ostream& os, const PathSet& ps)
{
    os << "t,path";
    for (std::size_t i = 0; i < ps.n; ++i) os << ",x" << i + 1;
    for (std::size_t k = 0; k < ps.m; ++k) os << ",w" << k + 1;
    os << "\n";
    const auto old_precision = os.precision(17);
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        std::vector<double> w(ps.m, 0.0);
        for (std::size_t s = 0; s <= ps.steps(); ++s) {
            if (s > 0) {
                for (std::size_t k = 0; k < ps.m; ++k) w[k] += ps.dw(p, s - 1, k);
            }
            if (std::isnan(ps.x(p, s, 0))) break;
            os << ps.times[s] << "," << p;
            for (std::size_t i = 0; i < ps.n; ++i) os << "," << ps.x(p, s, i);
            for (std::size_t k = 0; k < ps.m; ++k) os << "," << w[k];
            os << "\n";
        }
    }
    os.precision(old_precision);
}

IncrementSanity increment_sanity(const PathSet& ps)
{
    IncrementSanity out;
    out.h = ps.times.size() > 1 ? ps.times[1] - ps.times[0] : 0.0;
    double sum = 0.0;
    double sq = 0.0;
    std::size_t count = 0;
    for (const auto& inc : ps.increments) {
        for (double v : inc) {
            sum += v;
            sq += v * v;
            ++count;
        }
    }
    if (count == 0) {
        out.gated = true;
        return out;
    }
    const double N = static_cast<double>(count);
    out.mean = sum / N;
    out.variance = sq / N - out.mean * out.mean;
    out.mean_ok = std::fabs(out.mean) <= 5.0 * std::sqrt(out.h / N);
    out.variance_ok = std::fabs(out.variance - out.h) <= 0.1 * out.h;
    out.gated = count < 1000;
    return out;
}

}  // namespace sdesym
