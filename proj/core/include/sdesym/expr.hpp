#ifndef SDESYM_EXPR_HPP
#define SDESYM_EXPR_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdesym/rational.hpp"

namespace sdesym {

/// Numeric constant: exact rational when every input was rational, else a
/// double. Mixed arithmetic degrades to double.
class Number {
public:
    Number() = default;
    Number(Rational q) : q_(q) {}  // NOLINT(google-explicit-constructor)
    Number(std::int64_t v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    static Number real(double v);

    bool exact() const noexcept { return exact_; }
    const Rational& rational() const noexcept { return q_; }
    double value() const noexcept { return exact_ ? q_.to_double() : d_; }

    bool is_zero() const noexcept { return exact_ ? q_.is_zero() : d_ == 0.0; }
    bool is_one() const noexcept { return exact_ ? q_.is_one() : d_ == 1.0; }
    bool is_integer() const noexcept { return exact_ && q_.is_integer(); }
    bool is_negative() const noexcept { return exact_ ? q_.is_negative() : d_ < 0.0; }

    Number operator+(const Number& o) const;
    Number operator*(const Number& o) const;
    Number negated() const;
    /// Power that stays exact where possible; nullopt when the result is
    /// irrational (or undefined) and should remain a symbolic power.
    std::optional<Number> pow(const Number& e) const;

    int compare(const Number& o) const noexcept;
    bool operator==(const Number& o) const noexcept { return compare(o) == 0; }

private:
    bool exact_ = true;
    Rational q_;
    double d_ = 0.0;
};

enum class Kind : std::uint8_t { Number, Symbol, Pow, Mul, Add, Function, Opaque };
enum class Primitive : std::uint8_t { Exp, Log, Sin, Cos };

struct Node;

/// Immutable, canonical expression handle. All constructors canonicalize, so
/// two structurally equal handles denote the same canonical tree.
class Expr {
public:
    Expr();  ///< the exact constant 0
    Expr(std::int64_t v);  // NOLINT(google-explicit-constructor)
    Expr(int v) : Expr(static_cast<std::int64_t>(v)) {}  // NOLINT(google-explicit-constructor)
    Expr(const Number& v);  // NOLINT(google-explicit-constructor)
    static Expr rational(std::int64_t num, std::int64_t den);
    static Expr real(double v);
    static Expr symbol(std::string name);

    Kind kind() const noexcept;
    bool is_number() const noexcept { return kind() == Kind::Number; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    const Number& number() const;      ///< Kind::Number
    const std::string& name() const;   ///< Kind::Symbol, Kind::Opaque
    Primitive primitive() const;       ///< Kind::Function
    int order() const;                 ///< Kind::Opaque derivative order
    std::span<const Expr> args() const;
    const Expr& base() const;          ///< Kind::Pow
    const Expr& exponent() const;      ///< Kind::Pow
    const Expr& arg() const;           ///< Kind::Function, Kind::Opaque

    std::size_t hash() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b);
    friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

private:
    friend struct NodeFactory;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Canonicalizing constructors.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& u);
Expr log(const Expr& u);
Expr sin(const Expr& u);
Expr cos(const Expr& u);
Expr sqrt(const Expr& u);
/// Opaque unary function `name` differentiated `order` times, applied to `arg`.
Expr opaque(std::string name, int order, const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

using Bindings = std::map<std::string, Expr, std::less<>>;

/// Exact partial derivative. Opaque nodes pick up one derivative order.
Expr differentiate(const Expr& e, std::string_view symbol);
/// Simultaneous substitution of symbols, followed by canonicalization.
Expr substitute(const Expr& e, const Bindings& bindings);
/// Replaces every occurrence of the subtree `target`.
Expr replace(const Expr& e, const Expr& target, const Expr& with);
/// Rebuilds bottom-up through the canonicalizing constructors.
Expr simplify(const Expr& e);
/// Distributes products over sums and multiplies out small positive integer
/// powers of sums.
Expr expand(const Expr& e);

bool depends_on(const Expr& e, std::string_view symbol);
std::set<std::string, std::less<>> free_symbols(const Expr& e);
std::set<std::string, std::less<>> opaque_names(const Expr& e);
/// Number of nodes in the tree.
std::size_t tree_size(const Expr& e);

}  // namespace sdesym

#endif  // SDESYM_EXPR_HPP
