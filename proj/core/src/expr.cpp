#include "sdesym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace sdesym {

//---------------------------------------------------------------------------//
// Number
//---------------------------------------------------------------------------//

Number Number::real(double v)
{
    Number n;
    n.exact_ = false;
    n.d_ = v;
    return n;
}

Number Number::operator+(const Number& o) const
{
    if (exact_ && o.exact_) {
        if (auto r = q_ + o.q_) return *r;
    }
    return real(value() + o.value());
}

Number Number::operator*(const Number& o) const
{
    if (exact_ && o.exact_) {
        if (auto r = q_ * o.q_) return *r;
    }
    return real(value() * o.value());
}

Number Number::negated() const
{
    if (exact_) {
        if (auto r = q_.negated()) return *r;
    }
    return real(-value());
}

std::optional<Number> Number::pow(const Number& e) const
{
    if (exact_ && e.exact_) {
        const Rational& p = e.rational();
        if (p.is_integer()) {
            if (q_.is_zero() && p.is_negative()) return std::nullopt;
            if (p.num() > 4096 || p.num() < -4096) return real(std::pow(value(), e.value()));
            if (auto r = q_.pow(p.num())) return Number(*r);
            return real(std::pow(value(), e.value()));
        }
        if (q_.is_negative()) return std::nullopt;
        if (p.den() <= 64) {
            if (auto root = q_.root(p.den())) {
                if (auto r = root->pow(p.num())) return Number(*r);
            }
        }
        return std::nullopt;
    }
    const double b = value();
    const double x = e.value();
    if (b < 0.0 && std::floor(x) != x) return std::nullopt;
    if (b == 0.0 && x < 0.0) return std::nullopt;
    return real(std::pow(b, x));
}

int Number::compare(const Number& o) const noexcept
{
    if (exact_ && o.exact_) {
        auto c = q_ <=> o.q_;
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (exact_ != o.exact_) return exact_ ? -1 : 1;
    if (d_ < o.d_) return -1;
    if (d_ > o.d_) return 1;
    return 0;
}

//---------------------------------------------------------------------------//
// Nodes
//---------------------------------------------------------------------------//

struct Node {
    Kind kind = Kind::Number;
    Primitive prim = Primitive::Exp;
    int order = 0;
    Number num;
    std::string name;
    std::vector<Expr> args;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v)
{
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_number(const Number& n)
{
    if (n.exact()) {
        return mix(std::hash<std::int64_t>{}(n.rational().num()), std::hash<std::int64_t>{}(n.rational().den()));
    }
    return mix(0x51ed27, std::hash<double>{}(n.value()));
}

}  // namespace

struct NodeFactory {
    static Expr make(Node n)
    {
        std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
        switch (n.kind) {
        case Kind::Number: h = mix(h, hash_number(n.num)); break;
        case Kind::Symbol: h = mix(h, std::hash<std::string>{}(n.name)); break;
        case Kind::Opaque:
            h = mix(h, std::hash<std::string>{}(n.name));
            h = mix(h, static_cast<std::size_t>(n.order));
            break;
        case Kind::Function: h = mix(h, static_cast<std::size_t>(n.prim)); break;
        default: break;
        }
        for (const auto& a : n.args) h = mix(h, a.hash());
        n.hash = h;
        return Expr(std::make_shared<const Node>(std::move(n)));
    }

    static Expr number(const Number& v)
    {
        Node n;
        n.kind = Kind::Number;
        n.num = v;
        return make(std::move(n));
    }

    static Expr compound(Kind k, std::vector<Expr> args)
    {
        Node n;
        n.kind = k;
        n.args = std::move(args);
        return make(std::move(n));
    }

    static Expr function(Primitive p, const Expr& a)
    {
        Node n;
        n.kind = Kind::Function;
        n.prim = p;
        n.args = {a};
        return make(std::move(n));
    }

    static const Node& node(const Expr& e) { return *e.node_; }
};

namespace {

const Node& N(const Expr& e) { return NodeFactory::node(e); }

int kind_rank(Kind k) { return static_cast<int>(k); }

int compare_expr(const Expr& a, const Expr& b);

int compare_args(std::span<const Expr> a, std::span<const Expr> b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare_expr(a[i], b[i]); c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int compare_expr(const Expr& a, const Expr& b)
{
    const Node& x = N(a);
    const Node& y = N(b);
    if (&x == &y) return 0;
    if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind) ? -1 : 1;
    switch (x.kind) {
    case Kind::Number: return x.num.compare(y.num);
    case Kind::Symbol: return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    case Kind::Function:
        if (x.prim != y.prim) return x.prim < y.prim ? -1 : 1;
        return compare_args(x.args, y.args);
    case Kind::Opaque:
        if (x.name != y.name) return x.name < y.name ? -1 : 1;
        if (x.order != y.order) return x.order < y.order ? -1 : 1;
        return compare_args(x.args, y.args);
    default: return compare_args(x.args, y.args);
    }
}

struct Less {
    bool operator()(const Expr& a, const Expr& b) const { return compare_expr(a, b) < 0; }
};

}  // namespace

//---------------------------------------------------------------------------//
// Expr accessors
//---------------------------------------------------------------------------//

Expr::Expr() : Expr(NodeFactory::number(Number(0))) {}
Expr::Expr(std::int64_t v) : Expr(NodeFactory::number(Number(v))) {}
Expr::Expr(const Number& v) : Expr(NodeFactory::number(v)) {}

Expr Expr::rational(std::int64_t num, std::int64_t den) { return NodeFactory::number(Number(Rational(num, den))); }
Expr Expr::real(double v) { return NodeFactory::number(Number::real(v)); }

Expr Expr::symbol(std::string name)
{
    Node n;
    n.kind = Kind::Symbol;
    n.name = std::move(name);
    return NodeFactory::make(std::move(n));
}

Kind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_zero() const noexcept { return node_->kind == Kind::Number && node_->num.is_zero(); }
bool Expr::is_one() const noexcept { return node_->kind == Kind::Number && node_->num.is_one(); }

const Number& Expr::number() const
{
    if (node_->kind != Kind::Number) throw std::logic_error("Expr::number on non-number");
    return node_->num;
}

const std::string& Expr::name() const
{
    if (node_->kind != Kind::Symbol && node_->kind != Kind::Opaque) throw std::logic_error("Expr::name on unnamed node");
    return node_->name;
}

Primitive Expr::primitive() const
{
    if (node_->kind != Kind::Function) throw std::logic_error("Expr::primitive on non-function");
    return node_->prim;
}

int Expr::order() const { return node_->order; }
std::span<const Expr> Expr::args() const { return node_->args; }

const Expr& Expr::base() const
{
    if (node_->kind != Kind::Pow) throw std::logic_error("Expr::base on non-power");
    return node_->args[0];
}

const Expr& Expr::exponent() const
{
    if (node_->kind != Kind::Pow) throw std::logic_error("Expr::exponent on non-power");
    return node_->args[1];
}

const Expr& Expr::arg() const
{
    if (node_->kind != Kind::Function && node_->kind != Kind::Opaque) throw std::logic_error("Expr::arg on non-application");
    return node_->args[0];
}

std::size_t Expr::hash() const noexcept { return node_->hash; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return compare_expr(a, b) == 0;
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b)
{
    int c = compare_expr(a, b);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

//---------------------------------------------------------------------------//
// Canonicalizing constructors
//---------------------------------------------------------------------------//

namespace {

std::pair<Number, Expr> split_coefficient(const Expr& t)
{
    if (t.kind() == Kind::Mul && t.args()[0].is_number()) {
        auto rest = t.args().subspan(1);
        if (rest.size() == 1) return {t.args()[0].number(), rest[0]};
        return {t.args()[0].number(), NodeFactory::compound(Kind::Mul, {rest.begin(), rest.end()})};
    }
    return {Number(1), t};
}

Expr scale(const Expr& rest, const Number& c)
{
    if (c.is_one()) return rest;
    std::vector<Expr> args{Expr(c)};
    if (rest.kind() == Kind::Mul) {
        args.insert(args.end(), rest.args().begin(), rest.args().end());
    } else {
        args.push_back(rest);
    }
    return NodeFactory::compound(Kind::Mul, std::move(args));
}

}  // namespace

Expr add(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (t.kind() == Kind::Add) {
            flat.insert(flat.end(), t.args().begin(), t.args().end());
        } else {
            flat.push_back(std::move(t));
        }
    }
    Number constant(0);
    std::map<Expr, Number, Less> groups;
    for (const auto& t : flat) {
        if (t.is_number()) {
            constant = constant + t.number();
            continue;
        }
        auto [c, rest] = split_coefficient(t);
        auto it = groups.find(rest);
        if (it == groups.end()) {
            groups.emplace(rest, c);
        } else {
            it->second = it->second + c;
        }
    }
    std::vector<Expr> out;
    out.reserve(groups.size() + 1);
    for (const auto& [rest, c] : groups) {
        if (!c.is_zero()) out.push_back(scale(rest, c));
    }
    std::sort(out.begin(), out.end(), Less{});
    if (out.empty()) return Expr(constant);
    if (!constant.is_zero()) out.insert(out.begin(), Expr(constant));
    if (out.size() == 1) return out.front();
    return NodeFactory::compound(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> factors)
{
    Number coeff(1);
    std::map<Expr, std::vector<Expr>, Less> powers;
    std::vector<Expr> exp_args;
    std::vector<Expr> exps_done;

    std::vector<Expr> work = std::move(factors);
    while (!work.empty()) {
        std::vector<Expr> next;
        for (auto& f : work) {
            switch (f.kind()) {
            case Kind::Number: coeff = coeff * f.number(); break;
            case Kind::Mul: next.insert(next.end(), f.args().begin(), f.args().end()); break;
            case Kind::Pow: powers[f.base()].push_back(f.exponent()); break;
            case Kind::Function:
                if (f.primitive() == Primitive::Exp) {
                    exp_args.push_back(f.arg());
                    break;
                }
                powers[f].push_back(Expr(1));
                break;
            default: powers[f].push_back(Expr(1)); break;
            }
        }
        if (next.empty() && !exp_args.empty()) {
            Expr merged = exp(add(std::move(exp_args)));
            exp_args.clear();
            if (merged.kind() == Kind::Function && merged.primitive() == Primitive::Exp) {
                exps_done.push_back(merged);
            } else {
                next.push_back(merged);
            }
        }
        work = std::move(next);
    }
    if (exps_done.size() > 1) {
        std::vector<Expr> a;
        for (const auto& e : exps_done) a.push_back(e.arg());
        Expr merged = exp(add(std::move(a)));
        exps_done.clear();
        if (merged.is_number()) {
            coeff = coeff * merged.number();
        } else {
            exps_done.push_back(merged);
        }
    }
    if (coeff.is_zero() && coeff.exact()) return Expr(0);

    std::vector<Expr> out;
    for (auto& [base, exps] : powers) {
        Expr p = pow(base, add(std::move(exps)));
        if (p.is_number()) {
            coeff = coeff * p.number();
        } else if (p.kind() == Kind::Mul) {
            for (const auto& f : p.args()) {
                if (f.is_number()) {
                    coeff = coeff * f.number();
                } else {
                    out.push_back(f);
                }
            }
        } else {
            out.push_back(p);
        }
    }
    out.insert(out.end(), exps_done.begin(), exps_done.end());
    if (coeff.is_zero()) return Expr(coeff);
    std::sort(out.begin(), out.end(), Less{});
    if (out.empty()) return Expr(coeff);
    if (coeff.is_one() && out.size() == 1) return out.front();
    if (!coeff.is_one()) out.insert(out.begin(), Expr(coeff));
    return NodeFactory::compound(Kind::Mul, std::move(out));
}

Expr pow(const Expr& base, const Expr& exponent)
{
    if (exponent.is_zero()) return Expr(1);
    if (exponent.is_one()) return base;
    if (base.is_one()) return Expr(1);
    if (base.kind() == Kind::Function && base.primitive() == Primitive::Exp) {
        return exp(mul({exponent, base.arg()}));
    }
    if (exponent.is_number()) {
        const Number& e = exponent.number();
        if (base.is_number()) {
            if (auto r = base.number().pow(e)) return Expr(*r);
        }
        if (base.is_zero() && !e.is_negative()) return Expr(0);
        if (e.is_integer()) {
            if (base.kind() == Kind::Pow) return pow(base.base(), mul({base.exponent(), exponent}));
            if (base.kind() == Kind::Mul) {
                std::vector<Expr> fs;
                for (const auto& f : base.args()) fs.push_back(pow(f, exponent));
                return mul(std::move(fs));
            }
        }
    }
    return NodeFactory::compound(Kind::Pow, {base, exponent});
}

Expr exp(const Expr& u)
{
    if (u.is_number()) {
        if (u.is_zero()) return Expr(1);
        if (!u.number().exact()) return Expr::real(std::exp(u.number().value()));
    }
    if (u.kind() == Kind::Function && u.primitive() == Primitive::Log) return u.arg();
    return NodeFactory::function(Primitive::Exp, u);
}

Expr log(const Expr& u)
{
    if (u.is_number()) {
        if (u.is_one()) return Expr(0);
        if (!u.number().exact() && u.number().value() > 0.0) return Expr::real(std::log(u.number().value()));
    }
    if (u.kind() == Kind::Function && u.primitive() == Primitive::Exp) return u.arg();
    return NodeFactory::function(Primitive::Log, u);
}

Expr sin(const Expr& u)
{
    if (u.is_number()) {
        if (u.is_zero()) return Expr(0);
        if (!u.number().exact()) return Expr::real(std::sin(u.number().value()));
    }
    return NodeFactory::function(Primitive::Sin, u);
}

Expr cos(const Expr& u)
{
    if (u.is_number()) {
        if (u.is_zero()) return Expr(1);
        if (!u.number().exact()) return Expr::real(std::cos(u.number().value()));
    }
    return NodeFactory::function(Primitive::Cos, u);
}

Expr sqrt(const Expr& u) { return pow(u, Expr::rational(1, 2)); }

Expr opaque(std::string name, int order, const Expr& arg)
{
    if (order < 0) throw std::invalid_argument("negative derivative order for " + name);
    Node n;
    n.kind = Kind::Opaque;
    n.name = std::move(name);
    n.order = order;
    n.args = {arg};
    return NodeFactory::make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Expr(-1))}); }
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }

//---------------------------------------------------------------------------//
// Structural operations
//---------------------------------------------------------------------------//

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args)
{
    switch (e.kind()) {
    case Kind::Add: return add(std::move(args));
    case Kind::Mul: return mul(std::move(args));
    case Kind::Pow: return pow(args[0], args[1]);
    case Kind::Function:
        switch (e.primitive()) {
        case Primitive::Exp: return exp(args[0]);
        case Primitive::Log: return log(args[0]);
        case Primitive::Sin: return sin(args[0]);
        case Primitive::Cos: return cos(args[0]);
        }
        break;
    case Kind::Opaque: return opaque(e.name(), e.order(), args[0]);
    default: break;
    }
    return e;
}

template <class F>
Expr map_args(const Expr& e, F&& f)
{
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(f(a));
        changed = changed || !(args.back() == a);
    }
    if (!changed) return e;
    return rebuild(e, std::move(args));
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view s)
{
    switch (e.kind()) {
    case Kind::Number: return Expr(0);
    case Kind::Symbol: return Expr(e.name() == s ? 1 : 0);
    case Kind::Add: {
        std::vector<Expr> terms;
        for (const auto& t : e.args()) terms.push_back(differentiate(t, s));
        return add(std::move(terms));
    }
    case Kind::Mul: {
        std::vector<Expr> terms;
        auto fs = e.args();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Expr d = differentiate(fs[i], s);
            if (d.is_zero()) continue;
            std::vector<Expr> prod{d};
            for (std::size_t j = 0; j < fs.size(); ++j) {
                if (j != i) prod.push_back(fs[j]);
            }
            terms.push_back(mul(std::move(prod)));
        }
        return add(std::move(terms));
    }
    case Kind::Pow: {
        const Expr& b = e.base();
        const Expr& x = e.exponent();
        Expr db = differentiate(b, s);
        if (!depends_on(x, s)) {
            if (db.is_zero()) return Expr(0);
            return mul({x, pow(b, x - Expr(1)), db});
        }
        Expr dx = differentiate(x, s);
        return mul({e, add({mul({dx, log(b)}), mul({x, db, pow(b, Expr(-1))})})});
    }
    case Kind::Function: {
        Expr du = differentiate(e.arg(), s);
        if (du.is_zero()) return Expr(0);
        switch (e.primitive()) {
        case Primitive::Exp: return mul({e, du});
        case Primitive::Log: return mul({du, pow(e.arg(), Expr(-1))});
        case Primitive::Sin: return mul({cos(e.arg()), du});
        case Primitive::Cos: return mul({Expr(-1), sin(e.arg()), du});
        }
        break;
    }
    case Kind::Opaque: {
        Expr du = differentiate(e.arg(), s);
        if (du.is_zero()) return Expr(0);
        return mul({opaque(e.name(), e.order() + 1, e.arg()), du});
    }
    }
    return Expr(0);
}

Expr substitute(const Expr& e, const Bindings& bindings)
{
    if (bindings.empty()) return e;
    if (e.kind() == Kind::Symbol) {
        auto it = bindings.find(e.name());
        return it == bindings.end() ? e : it->second;
    }
    if (e.args().empty()) return e;
    return map_args(e, [&](const Expr& a) { return substitute(a, bindings); });
}

Expr replace(const Expr& e, const Expr& target, const Expr& with)
{
    if (e == target) return with;
    if (e.args().empty()) return e;
    return map_args(e, [&](const Expr& a) { return replace(a, target, with); });
}

Expr simplify(const Expr& e)
{
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    for (const auto& a : e.args()) args.push_back(simplify(a));
    return rebuild(e, std::move(args));
}

namespace {

Expr distribute(const std::vector<Expr>& factors)
{
    std::vector<Expr> terms{Expr(1)};
    std::vector<Expr> plain;
    for (const auto& f : factors) {
        if (f.kind() == Kind::Add) {
            std::vector<Expr> next;
            next.reserve(terms.size() * f.args().size());
            for (const auto& t : terms) {
                for (const auto& u : f.args()) next.push_back(mul({t, u}));
            }
            terms = std::move(next);
        } else {
            plain.push_back(f);
        }
    }
    Expr rest = mul(plain);
    std::vector<Expr> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(mul({t, rest}));
    return add(std::move(out));
}

constexpr std::int64_t kMaxExpandPower = 12;

}  // namespace

Expr expand(const Expr& e)
{
    switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol: return e;
    case Kind::Add: {
        std::vector<Expr> terms;
        for (const auto& t : e.args()) terms.push_back(expand(t));
        return add(std::move(terms));
    }
    case Kind::Mul: {
        std::vector<Expr> fs;
        for (const auto& f : e.args()) fs.push_back(expand(f));
        Expr m = mul(fs);
        if (m.kind() != Kind::Mul) return m.kind() == Kind::Pow ? expand(m) : m;
        bool has_sum = std::any_of(m.args().begin(), m.args().end(), [](const Expr& f) {
            return f.kind() == Kind::Add ||
                   (f.kind() == Kind::Pow && f.base().kind() == Kind::Add && f.exponent().is_number() &&
                    f.exponent().number().is_integer() && !f.exponent().number().is_negative());
        });
        if (!has_sum) return m;
        std::vector<Expr> parts;
        for (const auto& f : m.args()) parts.push_back(f.kind() == Kind::Pow ? expand(f) : f);
        return distribute(parts);
    }
    case Kind::Pow: {
        Expr b = expand(e.base());
        Expr x = expand(e.exponent());
        if (b.kind() == Kind::Add && x.is_number() && x.number().is_integer()) {
            std::int64_t k = x.number().rational().num();
            if (k > 1 && k <= kMaxExpandPower) {
                std::vector<Expr> copies(static_cast<std::size_t>(k), b);
                return distribute(copies);
            }
        }
        Expr p = pow(b, x);
        if (p.kind() == Kind::Mul) return expand(p);
        return p;
    }
    case Kind::Function:
    case Kind::Opaque: return map_args(e, [](const Expr& a) { return expand(a); });
    }
    return e;
}

bool depends_on(const Expr& e, std::string_view s)
{
    if (e.kind() == Kind::Symbol) return e.name() == s;
    for (const auto& a : e.args()) {
        if (depends_on(a, s)) return true;
    }
    return false;
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string, std::less<>>& out)
{
    if (e.kind() == Kind::Symbol) out.insert(e.name());
    for (const auto& a : e.args()) collect_symbols(a, out);
}

void collect_opaque(const Expr& e, std::set<std::string, std::less<>>& out)
{
    if (e.kind() == Kind::Opaque) out.insert(e.name());
    for (const auto& a : e.args()) collect_opaque(a, out);
}

}  // namespace

std::set<std::string, std::less<>> free_symbols(const Expr& e)
{
    std::set<std::string, std::less<>> out;
    collect_symbols(e, out);
    return out;
}

std::set<std::string, std::less<>> opaque_names(const Expr& e)
{
    std::set<std::string, std::less<>> out;
    collect_opaque(e, out);
    return out;
}

std::size_t tree_size(const Expr& e)
{
    std::size_t n = 1;
    for (const auto& a : e.args()) n += tree_size(a);
    return n;
}

}  // namespace sdesym
