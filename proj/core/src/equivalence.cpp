#include "sdesym/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "sdesym/error.hpp"

namespace sdesym {

PointSampler::PointSampler(const Domain& domain, std::set<std::string, std::less<>> symbols,
                           std::set<std::string, std::less<>> functions, std::uint64_t seed)
    : domain_(domain), symbols_(std::move(symbols)), functions_(std::move(functions)), rng_(seed)
{
    for (const auto& s : symbols_) {
        if (domain_.of(s).empty()) throw SamplingError("empty domain for '" + s + "'");
    }
    reinstantiate();
}

void PointSampler::reinstantiate()
{
    current_.clear();
    for (const auto& f : functions_) current_[f] = TestFunction::random(rng_);
}

EvalPoint PointSampler::next()
{
    EvalPoint p;
    p.functions = current_;
    for (const auto& s : symbols_) {
        Interval iv = domain_.of(s);
        p.values[s] = iv.lo + (iv.hi - iv.lo) * uniform01(rng_);
    }
    return p;
}

namespace {

std::set<std::string, std::less<>> merged_symbols(const Expr& a, const Expr& b)
{
    auto s = free_symbols(a);
    s.merge(free_symbols(b));
    return s;
}

std::set<std::string, std::less<>> merged_functions(const Expr& a, const Expr& b)
{
    auto s = opaque_names(a);
    s.merge(opaque_names(b));
    return s;
}

}  // namespace

bool equivalent(const Expr& a, const Expr& b, const Domain& domain, const EquivalenceOptions& options)
{
    if (a == b) return true;
    Expr diff = expand(a - b);
    if (diff.is_zero()) return true;

    PointSampler sampler(domain, merged_symbols(a, b), merged_functions(a, b), options.seed);
    for (int batch = 0; batch < options.instantiations; ++batch) {
        if (batch > 0) sampler.reinstantiate();
        for (int i = 0; i < options.points; ++i) {
            bool done = false;
            for (int attempt = 0; attempt < options.max_attempts_per_point && !done; ++attempt) {
                EvalPoint p = sampler.next();
                auto va = evaluate_guarded(a, p, options.guard);
                auto vb = evaluate_guarded(b, p, options.guard);
                if (!va || !vb) continue;
                done = true;
                if (std::fabs(*va - *vb) > options.tolerance * (1.0 + std::fabs(*va) + std::fabs(*vb))) return false;
            }
            if (!done) throw SamplingError("no admissible sample point found in domain");
        }
    }
    return true;
}

bool equivalent_to_zero(const Expr& e, const Domain& domain, const EquivalenceOptions& options)
{
    return equivalent(e, Expr(0), domain, options);
}

bool independent_of(const Expr& e, std::string_view symbol, const Domain& domain, const EquivalenceOptions& options)
{
    if (!depends_on(e, symbol)) return true;
    return equivalent_to_zero(differentiate(e, symbol), domain, options);
}

double max_abs_sampled(const Expr& e, const Domain& domain, int points, std::uint64_t seed, int instantiations,
                       const EvalGuard& guard)
{
    if (e.is_number()) return std::fabs(e.number().value());
    PointSampler sampler(domain, free_symbols(e), opaque_names(e), seed);
    const int per_batch = std::max(1, points / std::max(1, instantiations));
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        if (i > 0 && i % per_batch == 0) sampler.reinstantiate();
        bool done = false;
        for (int attempt = 0; attempt < 200 && !done; ++attempt) {
            auto v = evaluate_guarded(e, sampler.next(), guard);
            if (!v) continue;
            worst = std::max(worst, std::fabs(*v));
            done = true;
        }
        if (!done) throw SamplingError("no admissible sample point found in domain");
    }
    return worst;
}

}  // namespace sdesym
