#include "sdesym/antiderivative.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace sdesym {
namespace {

constexpr int kMaxDepth = 2;

std::optional<Expr> linear_slope(const Expr& arg, std::string_view s)
{
    Expr a = differentiate(arg, s);
    if (a.is_zero() || depends_on(a, s)) return std::nullopt;
    return a;
}

std::optional<Expr> integrate(const Expr& e, std::string_view s, int depth);

std::optional<Expr> integrate_factor(const Expr& f, std::string_view s)
{
    const Expr var = Expr::symbol(std::string(s));
    switch (f.kind()) {
    case Kind::Symbol:
        if (f.name() == s) return mul({Expr::rational(1, 2), pow(f, Expr(2))});
        break;
    case Kind::Pow: {
        const Expr& b = f.base();
        const Expr& x = f.exponent();
        if (!depends_on(x, s)) {
            auto a = linear_slope(b, s);
            if (!a) break;
            if (x == Expr(-1)) return log(b) / *a;
            Expr x1 = x + Expr(1);
            return pow(b, x1) / (*a * x1);
        }
        if (!depends_on(b, s)) {
            auto a = linear_slope(x, s);
            if (!a) break;
            return f / (*a * log(b));
        }
        break;
    }
    case Kind::Function: {
        auto a = linear_slope(f.arg(), s);
        if (!a) break;
        const Expr& u = f.arg();
        switch (f.primitive()) {
        case Primitive::Exp: return f / *a;
        case Primitive::Sin: return -cos(u) / *a;
        case Primitive::Cos: return sin(u) / *a;
        case Primitive::Log: return (u * f - u) / *a;
        }
        break;
    }
    case Kind::Opaque: {
        if (f.order() < 1) break;
        auto a = linear_slope(f.arg(), s);
        if (!a) break;
        return opaque(f.name(), f.order() - 1, f.arg()) / *a;
    }
    default: break;
    }
    return std::nullopt;
}

void collect_candidates(const Expr& e, std::string_view s, std::vector<Expr>& out)
{
    for (const auto& a : e.args()) {
        if (a.kind() != Kind::Number && depends_on(a, s)) {
            if (!(a.kind() == Kind::Symbol)) out.push_back(a);
            collect_candidates(a, s, out);
        }
    }
}

std::optional<Expr> by_substitution(const Expr& e, std::string_view s, int depth)
{
    std::vector<Expr> candidates;
    collect_candidates(e, s, candidates);
    std::sort(candidates.begin(), candidates.end(),
              [](const Expr& a, const Expr& b) { return tree_size(a) > tree_size(b); });
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    const std::string fresh = "__sub" + std::to_string(depth);
    const Expr u_sym = Expr::symbol(fresh);
    for (const auto& u : candidates) {
        if (u == e) continue;
        Expr du = differentiate(u, s);
        if (du.is_zero()) continue;
        for (const Expr& ratio : {e / du, expand(e / du)}) {
            Expr g = replace(ratio, u, u_sym);
            if (depends_on(g, s)) continue;
            if (auto G = integrate(g, fresh, depth + 1)) {
                return substitute(*G, Bindings{{fresh, u}});
            }
        }
    }
    return std::nullopt;
}

std::optional<Expr> integrate(const Expr& e, std::string_view s, int depth)
{
    if (!depends_on(e, s)) return e * Expr::symbol(std::string(s));
    if (e.kind() == Kind::Add) {
        std::vector<Expr> parts;
        for (const auto& t : e.args()) {
            auto p = integrate(t, s, depth);
            if (!p) return std::nullopt;
            parts.push_back(*p);
        }
        return add(std::move(parts));
    }
    if (e.kind() == Kind::Mul) {
        std::vector<Expr> constant;
        std::vector<Expr> dependent;
        for (const auto& f : e.args()) (depends_on(f, s) ? dependent : constant).push_back(f);
        if (dependent.size() == 1) {
            if (auto p = integrate_factor(dependent.front(), s)) return mul(constant) * *p;
        }
    } else if (auto p = integrate_factor(e, s)) {
        return p;
    }
    if (depth < kMaxDepth) {
        if (auto p = by_substitution(e, s, depth)) return p;
    }
    Expr ex = expand(e);
    if (!(ex == e) && ex.kind() == Kind::Add) return integrate(ex, s, depth);
    return std::nullopt;
}

}  // namespace

std::optional<Expr> antiderivative(const Expr& e, std::string_view symbol) { return integrate(e, symbol, 0); }

}  // namespace sdesym
