#include "sdesym/kozlov.hpp"

#include <algorithm>
#include <cmath>

#include "sdesym/antiderivative.hpp"
#include "sdesym/error.hpp"
#include "sdesym/parse.hpp"

namespace sdesym {

std::string_view to_string(Integrability c)
{
    switch (c) {
    case Integrability::IntegrableIto: return "IntegrableIto";
    case Integrability::IntegrableQuadrature: return "IntegrableQuadrature";
    case Integrability::NotIntegrableForm: return "NotIntegrableForm";
    }
    return "?";
}

Integrability classify_transformed(const TransformedSde& t)
{
    if (t.state_free && t.noise_free) return Integrability::IntegrableIto;
    if (t.state_free) return Integrability::IntegrableQuadrature;
    return Integrability::NotIntegrableForm;
}

std::optional<Expr> invert_map(const Expr& e, std::string_view y, const Expr& x)
{
    if (e.kind() == Kind::Symbol && e.name() == y) return x;
    if (!depends_on(e, y)) return std::nullopt;
    auto split = [&](auto combine) -> std::optional<Expr> {
        std::vector<Expr> dep;
        std::vector<Expr> rest;
        for (const auto& a : e.args()) (depends_on(a, y) ? dep : rest).push_back(a);
        if (dep.size() != 1) return std::nullopt;
        return invert_map(dep.front(), y, combine(std::move(rest)));
    };
    switch (e.kind()) {
    case Kind::Add: return split([&](std::vector<Expr> rest) { return x - add(std::move(rest)); });
    case Kind::Mul: return split([&](std::vector<Expr> rest) { return x / mul(std::move(rest)); });
    case Kind::Pow:
        if (!depends_on(e.exponent(), y)) return invert_map(e.base(), y, pow(x, pow(e.exponent(), Expr(-1))));
        if (!depends_on(e.base(), y)) return invert_map(e.exponent(), y, log(x) / log(e.base()));
        return std::nullopt;
    case Kind::Function:
        if (e.primitive() == Primitive::Exp) return invert_map(e.arg(), y, log(x));
        if (e.primitive() == Primitive::Log) return invert_map(e.arg(), y, exp(x));
        return std::nullopt;
    default: return std::nullopt;
    }
}

namespace {

void require_scalar_ito(const SdeSystem& sys, const char* what)
{
    if (!sys.scalar()) throw PreconditionError(std::string(what) + " needs a scalar system");
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError(std::string(what) + " needs an Ito system");
}

/// Throws unless e keeps one sign, bounded away from zero, on sampled points.
void require_nonvanishing(const Expr& e, const SdeSystem& sys, const CheckOptions& options, const std::string& what)
{
    if (e.is_zero()) throw PreconditionError(what + " vanishes identically");
    if (!opaque_names(e).empty()) return;
    PointSampler sampler(sys.sampling_domain(), free_symbols(e), {}, options.numeric_seed);
    int sign = 0;
    for (int i = 0; i < options.numeric_samples; ++i) {
        double v = evaluate(e, sampler.next());
        if (!std::isfinite(v) || std::fabs(v) < 1e-12) throw PreconditionError(what + " vanishes on the domain");
        int s = v > 0 ? 1 : -1;
        if (sign != 0 && s != sign) throw PreconditionError(what + " changes sign on the domain");
        sign = s;
    }
}

std::optional<Expr> checked_inverse(const Expr& Phi, const SdeSystem& sys, const std::string& new_state,
                                    const CheckOptions& options)
{
    auto inv = invert_map(Phi, sys.state(), Expr::symbol(new_state));
    if (!inv) return std::nullopt;
    Expr back = substitute(*inv, Bindings{{new_state, Phi}});
    try {
        if (equivalent(back, Expr::symbol(sys.state()), sys.sampling_domain(), options.equivalence)) return inv;
    } catch (const SamplingError&) {
    }
    return std::nullopt;
}

ConditionCheck condition(std::string name, std::vector<Expr> residuals, const Domain& domain,
                         const CheckOptions& options)
{
    ConditionCheck c;
    c.name = std::move(name);
    c.satisfied = true;
    for (auto& r : residuals) {
        r = expand(r);
        if (!equivalent_to_zero(r, domain, options.equivalence)) c.satisfied = false;
    }
    c.residuals = std::move(residuals);
    return c;
}

std::string failing(const std::vector<ConditionCheck>& conditions)
{
    std::string out;
    for (const auto& c : conditions) {
        if (c.satisfied) continue;
        out += (out.empty() ? "" : "; ") + c.name + " residual " + to_string(c.residuals.front());
    }
    return out;
}

ConditionCheck symmetry_condition(const SymmetryReport& r)
{
    ConditionCheck c;
    c.name = "symmetry";
    c.residuals = r.drift_residuals;
    for (const auto& row : r.diffusion_residuals) c.residuals.insert(c.residuals.end(), row.begin(), row.end());
    c.satisfied = r.verified();
    return c;
}

ConditionCheck bcomp_condition(const CompatibilityData& d)
{
    return ConditionCheck{"bcomp", {d.residual}, d.verdict};
}

}  // namespace

StraighteningMap straighten(const SdeSystem& sys, const Expr& phi, const CheckOptions& options)
{
    if (sys.n() != 1) throw PreconditionError("straighten needs a scalar system");
    require_nonvanishing(phi, sys, options, "phi");
    const std::string& y = sys.state();
    auto P = antiderivative(pow(phi, Expr(-1)), y);
    if (!P) throw NotElementary("no antiderivative rule applies to 1/(" + to_string(phi) + "); supply the map explicitly");
    StraighteningMap m;
    m.Phi = *P;
    if (!equivalent(phi * differentiate(m.Phi, y), Expr(1), sys.sampling_domain(), options.equivalence)) {
        throw Error("straightening identity phi*Phi_y == 1 failed for " + to_string(m.Phi));
    }
    m.inverse = checked_inverse(m.Phi, sys, m.new_state, options);
    return m;
}

ReductionResult reduce_deterministic(const SdeSystem& sys, const VectorField& v, const CheckOptions& options)
{
    require_scalar_ito(sys, "reduce_deterministic");
    const auto cls = classify(v, sys);
    if (!cls.simple || !cls.deterministic) {
        throw PreconditionError("reduce_deterministic needs a simple deterministic field, got " + cls.label());
    }
    auto report = residual_ito(sys, v, options);
    if (!report.verified()) {
        throw PreconditionError("candidate is not a verified symmetry (drift residual " +
                                to_string(report.drift_residuals.front()) + ", diffusion residual " +
                                to_string(report.diffusion_residuals.front().front()) + ")");
    }
    ReductionResult out;
    out.map = straighten(sys, v.xi.front(), options);
    out.transformed = ito_change_of_variables(sys, out.map.Phi, out.map.new_state, options.equivalence);
    out.classification = classify_transformed(out.transformed);
    const Domain domain = sys.sampling_domain();
    out.conditions.push_back(symmetry_condition(report));
    // The image of phi d_y under the map is (phi Phi_y) d_x.
    out.conditions.push_back(
        condition("pushforward", {v.xi.front() * differentiate(out.map.Phi, sys.state()) - Expr(1)}, domain, options));
    return out;
}

ReductionResult reduce_random(const SdeSystem& sys, const VectorField& v, const FreeFunctionAnsatz& ansatz,
                              const RandomReductionOptions& options)
{
    require_scalar_ito(sys, "reduce_random");
    const auto& copt = options.check;
    if (!v.tau.is_zero()) throw PreconditionError("reduce_random needs a simple field");
    for (const Expr* e : {&ansatz.b, &ansatz.c}) {
        if (depends_on(*e, sys.state()) || depends_on(*e, sys.noise())) {
            throw PreconditionError("ansatz b(t) + c w may not involve the state or the noise");
        }
    }
    if (depends_on(ansatz.c, sys.time)) throw PreconditionError("ansatz c must be constant");
    auto report = residual_ito(sys, v, copt);
    if (!report.verified()) {
        throw PreconditionError("candidate is not a verified symmetry (drift residual " +
                                to_string(report.drift_residuals.front()) + ", diffusion residual " +
                                to_string(report.diffusion_residuals.front().front()) + ")");
    }
    const std::string& y = sys.state();
    const std::string& w = sys.noise();
    const std::string& t = sys.time;
    const Expr& phi = v.xi.front();

    ReductionResult out;
    out.ansatz = ansatz;
    auto base = straighten(sys, phi, copt);
    out.map.Phi = base.Phi + ansatz.b + ansatz.c * Expr::symbol(w);
    out.map.inverse = checked_inverse(out.map.Phi, sys, out.map.new_state, copt);

    const Expr& Phi = out.map.Phi;
    const Expr Phi_yw = differentiate(differentiate(Phi, y), w);
    const Domain domain = sys.sampling_domain();
    out.conditions.push_back(symmetry_condition(report));
    out.conditions.push_back(
        condition("dsfw0.ww", {differentiate(differentiate(Phi, w), w) + sys.S() * Phi_yw}, domain, copt));
    out.conditions.push_back(condition("dsfw0.tw",
                                       {differentiate(differentiate(Phi, t), w) + sys.F() * Phi_yw +
                                        Expr::rational(1, 2) * differentiate(ito_laplacian(Phi, sys), w)},
                                       domain, copt));
    out.conditions.push_back(bcomp_condition(bcomp_check(sys, phi, copt)));

    out.transformed = ito_change_of_variables(sys, Phi, out.map.new_state, copt.equivalence);
    out.classification = classify_transformed(out.transformed);
    if (options.require_ito_form && out.classification != Integrability::IntegrableIto) {
        throw HypothesisError("ito form", "transformed equation is " + std::string(to_string(out.classification)) +
                                              "; failing conditions: " + failing(out.conditions));
    }
    return out;
}

ReductionResult reduce_with_map(const SdeSystem& sys, const Expr& Phi, const CheckOptions& options)
{
    require_scalar_ito(sys, "reduce_with_map");
    ReductionResult out;
    out.map.Phi = Phi;
    out.map.inverse = checked_inverse(Phi, sys, out.map.new_state, options);
    out.transformed = ito_change_of_variables(sys, Phi, out.map.new_state, options.equivalence);
    out.classification = classify_transformed(out.transformed);
    auto nec = necessity_roundtrip(sys, Phi, options);
    out.conditions.push_back(symmetry_condition(nec.symmetry));
    out.conditions.push_back(bcomp_condition(nec.compatibility));
    return out;
}

NecessityResult necessity_roundtrip(const SdeSystem& sys, const Expr& Phi, const CheckOptions& options)
{
    require_scalar_ito(sys, "necessity_roundtrip");
    const Expr Phi_y = differentiate(Phi, sys.state());
    require_nonvanishing(Phi_y, sys, options, "Phi_y");
    NecessityResult out;
    out.field.xi = {expand(pow(Phi_y, Expr(-1)))};
    out.field.tau = Expr(0);
    out.symmetry = residual_ito(sys, out.field, options);
    out.compatibility = bcomp_check(sys, out.field.xi.front(), options);
    return out;
}

namespace {

std::string new_name(bool reconstruction, std::size_t index)
{
    return (reconstruction ? "z" : "y") + std::to_string(index + 1);
}

/// X(c) = xi^j d_j c.
Expr apply_field(const VectorField& v, const Expr& c, const SdeSystem& sys)
{
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < sys.n(); ++j) terms.push_back(v.xi[j] * differentiate(c, sys.states[j]));
    return expand(add(std::move(terms)));
}

/// Generators acting on one coordinate each: X_a has a pivot component
/// depending only on its own state and t, and no component outside the
/// pivot set. Reduced coordinates are the untouched states.
NamedCoordinates derive_coordinates(const SdeSystem& sys, const std::vector<VectorField>& gens)
{
    const std::size_t n = sys.n();
    std::vector<std::size_t> pivots;
    for (const auto& g : gens) {
        std::optional<std::size_t> pivot;
        for (std::size_t j = 0; j < n && !pivot; ++j) {
            if (g.xi[j].is_zero() || std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
            bool own = true;
            for (const auto& s : free_symbols(g.xi[j])) {
                if (s != sys.states[j] && s != sys.time) own = false;
            }
            if (own) pivot = j;
        }
        if (!pivot) throw HypothesisError("adapted coordinates", "cannot derive them automatically; supply a [coords] block");
        pivots.push_back(*pivot);
    }
    NamedCoordinates nc;
    nc.name = "derived";
    std::vector<Expr> inverse(n);
    std::size_t reduced = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
        nc.coords.push_back(Expr::symbol(sys.states[j]));
        inverse[j] = Expr::symbol(new_name(false, reduced++));
    }
    bool invertible = true;
    for (std::size_t a = 0; a < gens.size(); ++a) {
        const std::size_t j = pivots[a];
        auto z = antiderivative(pow(gens[a].xi[j], Expr(-1)), sys.states[j]);
        if (!z) throw HypothesisError("adapted coordinates", "no antiderivative for generator " + std::to_string(a + 1));
        nc.coords.push_back(*z);
        auto inv = invert_map(*z, sys.states[j], Expr::symbol(new_name(true, a)));
        if (inv) inverse[j] = *inv;
        else invertible = false;
    }
    if (invertible) nc.inverse = std::move(inverse);
    return nc;
}

}  // namespace

ReductionResult reduce_system_solvable(const SdeSystem& sys, const std::vector<VectorField>& generators,
                                       const std::optional<NamedCoordinates>& coordinates,
                                       const SystemReductionOptions& options)
{
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("system reduction needs an Ito system");
    const std::size_t n = sys.n();
    const std::size_t r = generators.size();
    const auto& copt = options.check;
    const Domain domain = sys.sampling_domain();
    ReductionResult out;
    out.orbit_dimension = r;

    if (r > n) throw HypothesisError("regular orbits", "more generators than states");
    for (std::size_t a = 0; a < r; ++a) {
        const auto& g = generators[a];
        if (g.xi.size() != n) throw PreconditionError("generator dimension mismatch");
        auto cls = classify(g, sys);
        if (!cls.simple || !cls.deterministic) {
            throw HypothesisError("simple deterministic", "generator " + std::to_string(a + 1) + " is " + cls.label());
        }
    }
    if (r > 0) {
        auto sol = solvable_check(generators, sys, options.lie);
        out.derived_dimensions = sol.derived_dimensions;
        if (!sol.closed) throw HypothesisError("Lie algebra", "brackets of the generators leave their span");
        if (!sol.solvable) throw HypothesisError("solvable", "derived series does not terminate");
        auto ranks = sampled_orbit_ranks(generators, sys, options.lie);
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            if (ranks[i] != r) {
                throw HypothesisError("regular orbits", "orbit rank " + std::to_string(ranks[i]) + " at sample " +
                                                            std::to_string(i + 1) + ", expected " + std::to_string(r));
            }
        }
        for (std::size_t a = 0; a < r; ++a) {
            if (!residual_ito(sys, generators[a], copt).verified()) {
                throw HypothesisError("symmetry", "generator " + std::to_string(a + 1) + " is not a verified symmetry");
            }
        }
    } else {
        out.derived_dimensions = {0};
    }

    NamedCoordinates coords;
    if (coordinates) {
        coords = *coordinates;
        if (coords.coords.size() != n) throw PreconditionError("adapted coordinates need one entry per state");
    } else if (r == 0) {
        coords.name = "identity";
        for (std::size_t j = 0; j < n; ++j) {
            coords.coords.push_back(Expr::symbol(sys.states[j]));
            coords.inverse.push_back(Expr::symbol(new_name(false, j)));
        }
    } else {
        coords = derive_coordinates(sys, generators);
    }
    const std::size_t m_red = n - r;

    // Pushforward: reduced coordinates are invariants, reconstruction
    // coordinates are transverse (X_a(z^b) nonsingular).
    std::vector<Expr> invariance;
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t i = 0; i < m_red; ++i) invariance.push_back(apply_field(generators[a], coords.coords[i], sys));
    }
    auto push = condition("pushforward", invariance, domain, copt);
    if (!push.satisfied) throw HypothesisError("adapted coordinates", "a reduced coordinate is not invariant");
    out.conditions.push_back(push);
    if (r > 0) {
        std::vector<VectorField> rows(r);
        for (std::size_t a = 0; a < r; ++a) {
            rows[a].tau = Expr(0);
            for (std::size_t b = 0; b < r; ++b) rows[a].xi.push_back(apply_field(generators[a], coords.coords[m_red + b], sys));
        }
        SdeSystem square;
        for (std::size_t b = 0; b < r; ++b) square.states.push_back(sys.states[b % n]);
        square.time = sys.time;
        square.noises = sys.noises;
        square.domain = domain;
        // Reuse the orbit-rank routine on the r x r matrix X_a(z^b).
        for (auto k : sampled_orbit_ranks(rows, square, options.lie)) {
            if (k != r) throw HypothesisError("adapted coordinates", "matrix X_a(z^b) is singular");
        }
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(new_name(i >= m_red, i >= m_red ? i - m_red : i));
    out.transformed = ito_change_of_variables(sys, coords.coords, names, copt.equivalence);
    out.classification = classify_transformed(out.transformed);

    Bindings back;
    if (!coords.inverse.empty()) {
        for (std::size_t j = 0; j < n; ++j) back[sys.states[j]] = coords.inverse[j];
    }
    std::vector<Expr> closure;
    for (std::size_t i = 0; i < n; ++i) {
        ReducedEquation eq;
        eq.variable = names[i];
        eq.coordinate = coords.coords[i];
        eq.reconstruction = i >= m_red;
        eq.drift = out.transformed.drift[i];
        eq.noise = out.transformed.noise[i];
        auto to_new = [&](const Expr& e) { return back.empty() ? e : expand(substitute(e, back)); };
        eq.drift_new = to_new(eq.drift);
        for (const auto& s : eq.noise) eq.noise_new.push_back(to_new(s));
        // Coefficients must be orbit invariants: functions of y and t only.
        std::vector<Expr> coeffs{eq.drift};
        coeffs.insert(coeffs.end(), eq.noise.begin(), eq.noise.end());
        for (const auto& g : generators) {
            for (const auto& c : coeffs) closure.push_back(apply_field(g, c, sys));
        }
        out.equations.push_back(std::move(eq));
    }
    auto close = condition("closure", closure, domain, copt);
    if (!close.satisfied) {
        throw HypothesisError("closure", "transformed coefficients depend on reconstructed variables");
    }
    out.conditions.push_back(close);
    out.map.source = coords.name;
    return out;
}

}  // namespace sdesym
