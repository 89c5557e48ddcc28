#include "sdesym/calculus.hpp"

#include "sdesym/error.hpp"

namespace sdesym {

std::vector<Expr> drift_correction(const SdeSystem& sys)
{
    std::vector<Expr> rho(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) {
        std::vector<Expr> terms;
        for (std::size_t k = 0; k < sys.n(); ++k) {
            for (std::size_t j = 0; j < sys.m(); ++j) {
                terms.push_back(differentiate(sys.diffusion[i][j], sys.states[k]) * sys.diffusion[k][j]);
            }
        }
        rho[i] = expand(Expr::rational(1, 2) * add(std::move(terms)));
    }
    return rho;
}

Expr ito_laplacian(const Expr& u, const SdeSystem& sys)
{
    const auto n = sys.n();
    const auto m = sys.m();
    std::vector<Expr> terms;
    std::vector<Expr> ux(n);
    for (std::size_t j = 0; j < n; ++j) ux[j] = differentiate(u, sys.states[j]);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Expr> a;
            for (std::size_t q = 0; q < m; ++q) a.push_back(sys.diffusion[j][q] * sys.diffusion[k][q]);
            Expr ajk = add(std::move(a));
            if (ajk.is_zero()) continue;
            terms.push_back(ajk * differentiate(ux[j], sys.states[k]));
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (sys.diffusion[j][k].is_zero()) continue;
            terms.push_back(Expr(2) * sys.diffusion[j][k] * differentiate(ux[j], sys.noises[k]));
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        terms.push_back(differentiate(differentiate(u, sys.noises[k]), sys.noises[k]));
    }
    return add(std::move(terms));
}

namespace {

SdeSystem shift_drift(const SdeSystem& sys, int sign, Interpretation to)
{
    SdeSystem out = sys;
    auto rho = drift_correction(sys);
    for (std::size_t i = 0; i < sys.n(); ++i) out.drift[i] = expand(sys.drift[i] + Expr(sign) * rho[i]);
    out.interpretation = to;
    return out;
}

bool free_of_all(const Expr& e, const std::vector<std::string>& symbols, const Domain& domain,
                 const EquivalenceOptions& options)
{
    for (const auto& s : symbols) {
        if (!independent_of(e, s, domain, options)) return false;
    }
    return true;
}

}  // namespace

SdeSystem ito_to_stratonovich(const SdeSystem& sys)
{
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("ito_to_stratonovich needs an Ito system");
    return shift_drift(sys, -1, Interpretation::Stratonovich);
}

SdeSystem stratonovich_to_ito(const SdeSystem& sys)
{
    if (sys.interpretation != Interpretation::Stratonovich) {
        throw PreconditionError("stratonovich_to_ito needs a Stratonovich system");
    }
    return shift_drift(sys, 1, Interpretation::Ito);
}

TransformedSde ito_change_of_variables(const SdeSystem& sys, const std::vector<Expr>& maps,
                                       const std::vector<std::string>& new_states, const EquivalenceOptions& options)
{
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("change of variables needs an Ito system");
    if (maps.size() != new_states.size()) throw PreconditionError("one name per new variable required");
    TransformedSde out;
    out.states = new_states;
    for (const auto& g : maps) {
        std::vector<Expr> d{differentiate(g, sys.time), Expr::rational(1, 2) * ito_laplacian(g, sys)};
        std::vector<Expr> noise(sys.m());
        std::vector<std::vector<Expr>> noise_terms(sys.m());
        for (std::size_t j = 0; j < sys.n(); ++j) {
            Expr gj = differentiate(g, sys.states[j]);
            d.push_back(sys.drift[j] * gj);
            for (std::size_t k = 0; k < sys.m(); ++k) noise_terms[k].push_back(sys.diffusion[j][k] * gj);
        }
        for (std::size_t k = 0; k < sys.m(); ++k) {
            noise_terms[k].push_back(differentiate(g, sys.noises[k]));
            noise[k] = expand(add(std::move(noise_terms[k])));
        }
        out.drift.push_back(expand(add(std::move(d))));
        out.noise.push_back(std::move(noise));
    }
    const Domain domain = sys.sampling_domain();
    out.state_free = true;
    out.noise_free = true;
    for (std::size_t a = 0; a < maps.size(); ++a) {
        std::vector<Expr> coeffs{out.drift[a]};
        coeffs.insert(coeffs.end(), out.noise[a].begin(), out.noise[a].end());
        for (const auto& c : coeffs) {
            if (out.state_free && !free_of_all(c, sys.states, domain, options)) out.state_free = false;
            if (out.noise_free && !free_of_all(c, sys.noises, domain, options)) out.noise_free = false;
        }
    }
    out.ito_form = out.state_free && out.noise_free;
    return out;
}

TransformedSde ito_change_of_variables(const SdeSystem& sys, const Expr& phi, const std::string& new_state,
                                       const EquivalenceOptions& options)
{
    if (sys.n() != 1) throw PreconditionError("scalar change of variables needs a scalar system");
    return ito_change_of_variables(sys, std::vector<Expr>{phi}, std::vector<std::string>{new_state}, options);
}

InfinitesimalResidual infinitesimal_symbolic_residual(const SdeSystem& sys, const VectorField& v)
{
    if (!v.tau.is_zero()) throw PreconditionError("infinitesimal residual needs a simple field (tau = 0)");
    if (v.xi.size() != sys.n()) throw PreconditionError("field dimension does not match the system");
    const auto n = sys.n();
    const auto m = sys.m();
    const Expr eps = Expr::symbol("__eps");
    const Expr h = Expr::symbol("__h");
    std::vector<Expr> dw(m);
    for (std::size_t k = 0; k < m; ++k) dw[k] = Expr::symbol("__dw" + std::to_string(k));

    // One step of the equation: x -> x + f h + sigma dw, t -> t + h, w -> w + dw.
    Bindings step;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Expr> inc{Expr::symbol(sys.states[j]), sys.drift[j] * h};
        for (std::size_t k = 0; k < m; ++k) inc.push_back(sys.diffusion[j][k] * dw[k]);
        step[sys.states[j]] = add(std::move(inc));
    }
    step[sys.time] = Expr::symbol(sys.time) + h;
    for (std::size_t k = 0; k < m; ++k) step[sys.noises[k]] = Expr::symbol(sys.noises[k]) + dw[k];
    Bindings at_origin;
    at_origin["__h"] = Expr(0);
    for (std::size_t k = 0; k < m; ++k) at_origin["__dw" + std::to_string(k)] = Expr(0);

    // Mapped point x + eps xi.
    Bindings mapped;
    for (std::size_t j = 0; j < n; ++j) mapped[sys.states[j]] = Expr::symbol(sys.states[j]) + eps * v.xi[j];
    const bool ito = sys.interpretation == Interpretation::Ito;

    InfinitesimalResidual out;
    out.noise.assign(n, std::vector<Expr>(m));
    for (std::size_t i = 0; i < n; ++i) {
        const Expr g = Expr::symbol(sys.states[i]) + eps * v.xi[i];
        const Expr g_step = substitute(g, step);
        // Drift: d/dh, plus 1/2 sum_k d^2/d(dw_k)^2 for Ito (dw_k dw_l -> delta_kl h).
        std::vector<Expr> drift_terms{differentiate(g_step, "__h")};
        if (ito) {
            for (std::size_t k = 0; k < m; ++k) {
                const std::string name = "__dw" + std::to_string(k);
                drift_terms.push_back(Expr::rational(1, 2) * differentiate(differentiate(g_step, name), name));
            }
        }
        Expr drift_mapped = substitute(add(std::move(drift_terms)), at_origin);
        Expr drift_defect = drift_mapped - substitute(sys.drift[i], mapped);
        Bindings eps0{{"__eps", Expr(0)}};
        out.drift.push_back(expand(substitute(differentiate(drift_defect, "__eps"), eps0)));
        for (std::size_t k = 0; k < m; ++k) {
            Expr noise_mapped = substitute(differentiate(g_step, "__dw" + std::to_string(k)), at_origin);
            Expr noise_defect = noise_mapped - substitute(sys.diffusion[i][k], mapped);
            out.noise[i][k] = expand(substitute(differentiate(noise_defect, "__eps"), eps0));
        }
    }
    return out;
}

}  // namespace sdesym
