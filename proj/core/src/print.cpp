#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include "sdesym/parse.hpp"

namespace sdesym {
namespace {

constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kPower = 3;
constexpr int kAtom = 4;

std::string real_literal(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

bool has_negative_sign(const Expr& e)
{
    if (e.is_number()) return e.number().is_negative();
    if (e.kind() == Kind::Mul && e.args()[0].is_number()) return e.args()[0].number().is_negative();
    return false;
}

bool is_reciprocal_power(const Expr& e)
{
    return e.kind() == Kind::Pow && e.exponent().is_number() && e.exponent().number().is_negative();
}

int precedence(const Expr& e)
{
    switch (e.kind()) {
    case Kind::Number: {
        const Number& n = e.number();
        if (n.is_negative()) return kProduct;
        if (n.exact() && !n.rational().is_integer()) return kProduct;
        return kAtom;
    }
    case Kind::Add: return kSum;
    case Kind::Mul: return kProduct;
    case Kind::Pow: return is_reciprocal_power(e) ? kProduct : kPower;
    default: return kAtom;
    }
}

std::string print(const Expr& e, int required);

std::string print_number(const Number& n)
{
    if (n.exact()) return n.rational().str();
    return real_literal(n.value());
}

std::string print_product(const Number& coeff, const std::vector<Expr>& factors)
{
    std::vector<std::string> num;
    std::vector<std::string> den;
    for (const auto& f : factors) {
        if (is_reciprocal_power(f)) {
            den.push_back(print(pow(f.base(), Expr(f.exponent().number().negated())), kPower));
        } else {
            num.push_back(print(f, kPower));
        }
    }
    std::string out;
    if (num.empty()) {
        out = print_number(coeff);
    } else {
        if (coeff.is_one()) {
        } else if (coeff.exact() && coeff.rational() == Rational(-1)) {
            out = "-";
        } else {
            out = print_number(coeff) + "*";
        }
        for (std::size_t i = 0; i < num.size(); ++i) {
            if (i > 0) out += "*";
            out += num[i];
        }
    }
    for (const auto& d : den) out += "/" + d;
    return out;
}

std::string print_raw(const Expr& e)
{
    switch (e.kind()) {
    case Kind::Number: return print_number(e.number());
    case Kind::Symbol: return e.name();
    case Kind::Add: {
        std::string out;
        bool first = true;
        for (const auto& t : e.args()) {
            if (first) {
                out = print(t, kSum);
                first = false;
            } else if (has_negative_sign(t)) {
                out += " - " + print(-t, kProduct);
            } else {
                out += " + " + print(t, kProduct);
            }
        }
        return out;
    }
    case Kind::Mul: {
        Number coeff(1);
        std::vector<Expr> fs;
        for (const auto& f : e.args()) {
            if (f.is_number()) {
                coeff = f.number();
            } else {
                fs.push_back(f);
            }
        }
        return print_product(coeff, fs);
    }
    case Kind::Pow: {
        if (is_reciprocal_power(e)) return print_product(Number(1), {e});
        std::string b = print(e.base(), kAtom);
        const Expr& x = e.exponent();
        bool bare = (x.kind() == Kind::Number && precedence(x) == kAtom) || x.kind() == Kind::Symbol;
        return b + "^" + (bare ? print_raw(x) : "(" + print_raw(x) + ")");
    }
    case Kind::Function: {
        const char* name = "exp";
        switch (e.primitive()) {
        case Primitive::Exp: name = "exp"; break;
        case Primitive::Log: name = "log"; break;
        case Primitive::Sin: name = "sin"; break;
        case Primitive::Cos: name = "cos"; break;
        }
        return std::string(name) + "(" + print_raw(e.arg()) + ")";
    }
    case Kind::Opaque: return e.name() + std::string(static_cast<std::size_t>(e.order()), '\'') + "(" + print_raw(e.arg()) + ")";
    }
    return {};
}

std::string print(const Expr& e, int required)
{
    std::string s = print_raw(e);
    if (precedence(e) < required) return "(" + s + ")";
    return s;
}

}  // namespace

std::string to_string(const Expr& e) { return print_raw(e); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace sdesym
