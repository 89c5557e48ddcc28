#include "sdesym/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "sdesym/calculus.hpp"
#include "sdesym/error.hpp"

namespace sdesym {

std::string_view to_string(ResidualKind k)
{
    switch (k) {
    case ResidualKind::Ito: return "ito";
    case ResidualKind::Stratonovich: return "stratonovich";
    case ResidualKind::DetStra: return "detstra";
    }
    return "?";
}

bool SymmetryReport::drift_verified() const
{
    return std::all_of(drift_zero.begin(), drift_zero.end(), [](bool b) { return b; });
}

bool SymmetryReport::diffusion_verified() const
{
    return std::all_of(diffusion_zero.begin(), diffusion_zero.end(),
                       [](const auto& row) { return std::all_of(row.begin(), row.end(), [](bool b) { return b; }); });
}

namespace {

void require_simple(const SdeSystem& sys, const VectorField& v)
{
    if (!v.tau.is_zero()) throw PreconditionError("determining equations are implemented for simple fields (tau = 0)");
    if (v.xi.size() != sys.n()) throw PreconditionError("field dimension does not match the system");
}

/// a^j d_j b - b^j d_j a for the scalar pair (a-field xi, coefficient c).
Expr lie_term(const SdeSystem& sys, const std::vector<Expr>& coeff_field, const Expr& target,
              const std::vector<Expr>& xi, const Expr& coeff)
{
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < sys.n(); ++j) {
        terms.push_back(coeff_field[j] * differentiate(target, sys.states[j]));
        terms.push_back(-(xi[j] * differentiate(coeff, sys.states[j])));
    }
    return add(std::move(terms));
}

struct Judge {
    const SdeSystem& sys;
    const CheckOptions& options;
    Domain domain = sys.sampling_domain();

    bool zero(const Expr& e) const { return equivalent_to_zero(e, domain, options.equivalence); }
    double magnitude(const Expr& e) const
    {
        return e.is_zero() ? 0.0 : max_abs_sampled(e, domain, options.numeric_samples, options.numeric_seed,
                                                   options.equivalence.instantiations, options.equivalence.guard);
    }
};

SymmetryReport finish(const SdeSystem& sys, const VectorField& v, const CheckOptions& options, ResidualKind kind,
                      std::vector<Expr> drift)
{
    SymmetryReport r;
    r.kind = kind;
    r.classification = classify(v, sys);
    Judge judge{sys, options};
    r.diffusion_residuals.assign(sys.n(), std::vector<Expr>(sys.m()));
    r.diffusion_zero.assign(sys.n(), std::vector<bool>(sys.m()));
    for (std::size_t i = 0; i < sys.n(); ++i) {
        r.drift_residuals.push_back(expand(drift[i]));
        r.drift_zero.push_back(judge.zero(r.drift_residuals[i]));
        r.max_numeric_residual = std::max(r.max_numeric_residual, judge.magnitude(r.drift_residuals[i]));
        for (std::size_t k = 0; k < sys.m(); ++k) {
            std::vector<Expr> column;
            for (std::size_t j = 0; j < sys.n(); ++j) column.push_back(sys.diffusion[j][k]);
            Expr e = differentiate(v.xi[i], sys.noises[k]) + lie_term(sys, column, v.xi[i], v.xi, sys.diffusion[i][k]);
            r.diffusion_residuals[i][k] = expand(e);
            r.diffusion_zero[i][k] = judge.zero(r.diffusion_residuals[i][k]);
            r.max_numeric_residual = std::max(r.max_numeric_residual, judge.magnitude(r.diffusion_residuals[i][k]));
        }
    }
    return r;
}

}  // namespace

SymmetryReport residual_ito(const SdeSystem& sys, const VectorField& v, const CheckOptions& options)
{
    require_simple(sys, v);
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("residual_ito needs an Ito system");
    std::vector<Expr> drift;
    for (std::size_t i = 0; i < sys.n(); ++i) {
        drift.push_back(differentiate(v.xi[i], sys.time) + lie_term(sys, sys.drift, v.xi[i], v.xi, sys.drift[i]) +
                        Expr::rational(1, 2) * ito_laplacian(v.xi[i], sys));
    }
    return finish(sys, v, options, ResidualKind::Ito, std::move(drift));
}

SymmetryReport residual_stratonovich(const SdeSystem& sys, const VectorField& v, const CheckOptions& options)
{
    require_simple(sys, v);
    if (sys.interpretation != Interpretation::Stratonovich) {
        throw PreconditionError("residual_stratonovich needs a Stratonovich system");
    }
    std::vector<Expr> drift;
    for (std::size_t i = 0; i < sys.n(); ++i) {
        drift.push_back(differentiate(v.xi[i], sys.time) + lie_term(sys, sys.drift, v.xi[i], v.xi, sys.drift[i]));
    }
    return finish(sys, v, options, ResidualKind::Stratonovich, std::move(drift));
}

SymmetryReport residual_detstra(const SdeSystem& sys, const VectorField& v, const CheckOptions& options)
{
    require_simple(sys, v);
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("residual_detstra needs an Ito system");
    const auto rho = drift_correction(sys);
    std::vector<Expr> drift;
    for (std::size_t i = 0; i < sys.n(); ++i) {
        drift.push_back(differentiate(v.xi[i], sys.time) + lie_term(sys, sys.drift, v.xi[i], v.xi, sys.drift[i]) -
                        lie_term(sys, rho, v.xi[i], v.xi, rho[i]));
    }
    return finish(sys, v, options, ResidualKind::DetStra, std::move(drift));
}

SymmetryReport check_symmetry(const SdeSystem& sys, const VectorField& v, const CheckOptions& options)
{
    return sys.interpretation == Interpretation::Ito ? residual_ito(sys, v, options)
                                                     : residual_stratonovich(sys, v, options);
}

CompatibilityData bcomp_check(const SdeSystem& sys, const Expr& phi, const CheckOptions& options)
{
    if (!sys.scalar()) throw PreconditionError("bcomp_check needs a scalar system");
    if (sys.interpretation != Interpretation::Ito) throw PreconditionError("bcomp_check needs an Ito system");
    const Domain domain = sys.sampling_domain();
    if (phi.is_zero()) throw PreconditionError("phi vanishes identically");
    if (opaque_names(phi).empty()) {
        // Sign must be constant and bounded away from zero on the sampled box.
        PointSampler sampler(domain, free_symbols(phi), {}, options.numeric_seed);
        int sign = 0;
        for (int i = 0; i < options.numeric_samples; ++i) {
            double v = evaluate(phi, sampler.next());
            if (!std::isfinite(v) || std::fabs(v) < 1e-12) throw PreconditionError("phi vanishes on the domain");
            int s = v > 0 ? 1 : -1;
            if (sign != 0 && s != sign) throw PreconditionError("phi changes sign on the domain");
            sign = s;
        }
    }
    const std::string& y = sys.state();
    const std::string& w = sys.noise();
    const std::string& t = sys.time;
    const Expr& F = sys.F();
    const Expr& S = sys.S();
    CompatibilityData out;
    out.gamma = differentiate(pow(phi, Expr(-1)), w);
    const Expr& g = out.gamma;
    Expr r = S * differentiate(g, t) + differentiate(S, t) * g - F * differentiate(g, w) -
             Expr::rational(1, 2) * (S * differentiate(differentiate(g, w), w) +
                                     pow(S, Expr(2)) * differentiate(differentiate(g, y), w));
    out.residual = expand(r);
    Judge judge{sys, options};
    out.verdict = judge.zero(out.residual);
    out.max_numeric_residual = judge.magnitude(out.residual);
    return out;
}

std::vector<Expr> unal_tau_condition(const SdeSystem& sys, const Expr& tau)
{
    const auto n = sys.n();
    const auto m = sys.m();
    std::vector<Expr> inner{differentiate(tau, sys.time)};
    for (std::size_t j = 0; j < n; ++j) inner.push_back(sys.drift[j] * differentiate(tau, sys.states[j]));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t q = 0; q < m; ++q) {
                inner.push_back(Expr::rational(1, 2) * sys.diffusion[a][q] * sys.diffusion[j][q] *
                                differentiate(differentiate(tau, sys.states[a]), sys.states[j]));
            }
        }
    }
    const Expr bracket = add(std::move(inner));
    std::vector<Expr> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t p = 0; p < m; ++p) {
                terms.push_back(sys.diffusion[k][p] * sys.diffusion[i][p] * differentiate(bracket, sys.states[k]));
            }
        }
        out.push_back(expand(add(std::move(terms))));
    }
    return out;
}

}  // namespace sdesym
