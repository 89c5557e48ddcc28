#include "sdesym/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "sdesym/error.hpp"

namespace sdesym {

double finite_difference(const Expr& e, std::string_view symbol, const EvalPoint& point, double step)
{
    EvalPoint p = point;
    auto it = p.values.find(std::string(symbol));
    if (it == p.values.end()) throw Error("finite_difference: symbol '" + std::string(symbol) + "' is unbound");
    const double s0 = it->second;
    it->second = s0 + step;
    const double up = evaluate(e, p);
    it->second = s0 - step;
    const double down = evaluate(e, p);
    return (up - down) / (2.0 * step);
}

namespace {

std::vector<std::string> slot_names(const SdeSystem& sys)
{
    std::vector<std::string> slots = sys.states;
    slots.push_back(sys.time);
    slots.insert(slots.end(), sys.noises.begin(), sys.noises.end());
    return slots;
}

double median(std::vector<double> v)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

PathwiseResult pathwise_check(const SdeSystem& original, const TransformedSde& reduced, const Expr& Phi,
                              const SimulationConfig& cfg)
{
    if (original.n() != 1 || reduced.drift.size() != 1) throw PreconditionError("pathwise_check is scalar");
    const auto ps = simulate(original, cfg);
    const auto slots = slot_names(original);
    const CompiledExpr phi(Phi, slots);
    const CompiledExpr drift(reduced.scalar_drift(), slots);
    std::vector<CompiledExpr> noise;
    for (const auto& s : reduced.noise.front()) noise.emplace_back(s, slots);
    const std::size_t m = original.m();

    std::vector<double> sup(ps.paths(), std::numeric_limits<double>::quiet_NaN());
    detail::parallel_for(ps.paths(), cfg.threads, [&](std::size_t p) {
        if (ps.excluded[p]) return;
        std::vector<double> slot(2 + m, 0.0);
        slot[0] = ps.x(p, 0, 0);
        slot[1] = ps.times[0];
        double x = phi(slot);
        double worst = 0.0;
        for (std::size_t s = 0; s < ps.steps(); ++s) {
            double next = x + drift(slot) * cfg.h;
            for (std::size_t k = 0; k < m; ++k) next += noise[k](slot) * ps.dw(p, s, k);
            x = next;
            slot[0] = ps.x(p, s + 1, 0);
            slot[1] = ps.times[s + 1];
            for (std::size_t k = 0; k < m; ++k) slot[2 + k] += ps.dw(p, s, k);
            worst = std::max(worst, std::fabs(phi(slot) - x));
        }
        sup[p] = worst;
    });
    PathwiseResult out;
    out.excluded = ps.excluded_count;
    for (double v : sup) {
        if (!std::isnan(v)) out.sup_errors.push_back(v);
    }
    out.median_sup_error = median(out.sup_errors);
    return out;
}

OrderEstimate strong_order_estimate(const SdeSystem& original, const TransformedSde& reduced, const Expr& Phi,
                                    const SimulationConfig& cfg)
{
    SimulationConfig coarse = cfg;
    coarse.refinement = 4 * cfg.refinement;
    SimulationConfig fine = cfg;
    fine.h = cfg.h / 4.0;
    OrderEstimate out;
    out.error_coarse = pathwise_check(original, reduced, Phi, coarse).median_sup_error;
    out.error_fine = pathwise_check(original, reduced, Phi, fine).median_sup_error;
    if (out.error_coarse < 1e-12 && out.error_fine < 1e-12) {
        out.skipped = true;
        return out;
    }
    out.order = std::log(out.error_coarse / out.error_fine) / std::log(4.0);
    return out;
}

ScalingResult epsilon_symmetry_scaling(const SdeSystem& sys_in, const VectorField& v, const SimulationConfig& cfg,
                                       const ScalingOptions& options)
{
    if (!v.tau.is_zero()) throw PreconditionError("epsilon scaling needs a simple field");
    // Symmetry is a property of the solution process; work in Ito form.
    const SdeSystem sys = sys_in.interpretation == Interpretation::Ito ? sys_in : stratonovich_to_ito(sys_in);
    SimulationConfig run = cfg;
    run.scheme = Scheme::EulerMaruyama;
    const auto ps = simulate(sys, run);
    const std::size_t n = sys.n();
    const std::size_t m = sys.m();
    const auto slots = slot_names(sys);
    std::vector<CompiledExpr> f, sigma, xi;
    for (const auto& e : sys.drift) f.emplace_back(e, slots);
    for (const auto& row : sys.diffusion) {
        for (const auto& e : row) sigma.emplace_back(e, slots);
    }
    for (const auto& e : v.xi) xi.emplace_back(e, slots);

    // Collect (path, step) points, evenly strided.
    std::vector<std::pair<std::size_t, std::size_t>> points;
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        for (std::size_t s = 0; s < ps.steps(); ++s) {
            if (!std::isnan(ps.x(p, s, 0))) points.emplace_back(p, s);
        }
    }
    if (points.empty()) throw SamplingError("no path points available for the scaling check");
    const std::size_t stride = std::max<std::size_t>(1, points.size() / std::max<std::size_t>(1, options.max_points));
    std::vector<std::vector<double>> slot_values;
    for (std::size_t i = 0; i < points.size(); i += stride) {
        auto [p, s] = points[i];
        std::vector<double> slot(n + 1 + m);
        for (std::size_t j = 0; j < n; ++j) slot[j] = ps.x(p, s, j);
        slot[n] = ps.times[s];
        auto w = ps.w(p, s);
        std::copy(w.begin(), w.end(), slot.begin() + static_cast<std::ptrdiff_t>(n + 1));
        slot_values.push_back(std::move(slot));
    }

    const double delta = options.probe_step;
    const double rd = std::sqrt(delta);
    const std::size_t combos = std::size_t{1} << m;
    ScalingResult out;
    out.eps = options.eps;
    out.points = slot_values.size();
    double worst_ratio = 0.0;
    for (double eps : options.eps) {
        std::vector<double> sq(slot_values.size(), 0.0);
        detail::parallel_for(slot_values.size(), cfg.threads, [&](std::size_t idx) {
            const auto& base = slot_values[idx];
            std::vector<double> fx(n), sx(n * m), xix(n);
            for (std::size_t i = 0; i < n; ++i) fx[i] = f[i](base);
            for (std::size_t j = 0; j < n * m; ++j) sx[j] = sigma[j](base);
            for (std::size_t i = 0; i < n; ++i) xix[i] = xi[i](base);
            // Probe step x + f delta + sigma dW, t + delta, w + dW with dW in {+-sqrt(delta)}^m.
            auto probe = [&](const std::vector<double>& dW) {
                std::vector<double> slot = base;
                for (std::size_t i = 0; i < n; ++i) {
                    slot[i] += fx[i] * delta;
                    for (std::size_t k = 0; k < m; ++k) slot[i] += sx[i * m + k] * dW[k];
                }
                slot[n] += delta;
                for (std::size_t k = 0; k < m; ++k) slot[n + 1 + k] += dW[k];
                std::vector<double> r(n);
                for (std::size_t i = 0; i < n; ++i) r[i] = xi[i](slot);
                return r;
            };
            std::vector<double> mean_next(n, 0.0);
            for (std::size_t c = 0; c < combos; ++c) {
                std::vector<double> dW(m);
                for (std::size_t k = 0; k < m; ++k) dW[k] = (c >> k & 1u) ? rd : -rd;
                auto r = probe(dW);
                for (std::size_t i = 0; i < n; ++i) mean_next[i] += r[i] / static_cast<double>(combos);
            }
            std::vector<double> mapped = base;
            for (std::size_t i = 0; i < n; ++i) mapped[i] += eps * xix[i];
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double drift_mapped = fx[i] + eps * (mean_next[i] - xix[i]) / delta;
                const double d = drift_mapped - f[i](mapped);
                acc += d * d;
            }
            for (std::size_t k = 0; k < m; ++k) {
                std::vector<double> up(m, 0.0), down(m, 0.0);
                up[k] = rd;
                down[k] = -rd;
                auto ru = probe(up);
                auto rdn = probe(down);
                for (std::size_t i = 0; i < n; ++i) {
                    const double diff_mapped = sx[i * m + k] + eps * (ru[i] - rdn[i]) / (2.0 * rd);
                    const double d = diff_mapped - sigma[i * m + k](mapped);
                    acc += d * d;
                }
            }
            sq[idx] = acc;
        });
        double total = 0.0;
        for (double v2 : sq) total += v2;
        const double rms = std::sqrt(total / static_cast<double>(sq.size()));
        out.defects.push_back(rms);
        worst_ratio = std::max(worst_ratio, rms / eps);
    }
    out.below_floor = worst_ratio <= options.floor;
    // Least-squares slope of log(defect) against log(eps) over positive defects.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < out.eps.size(); ++i) {
        if (!(out.defects[i] > 0.0)) continue;
        const double lx = std::log(out.eps[i]);
        const double ly = std::log(out.defects[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt >= 2) {
        const double c = static_cast<double>(cnt);
        out.exponent = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    }
    return out;
}

}  // namespace sdesym
