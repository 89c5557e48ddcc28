#ifndef SDESYM_RATIONAL_HPP
#define SDESYM_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace sdesym {

/// Exact rational with 64-bit numerator/denominator. Arithmetic returns
/// nullopt on overflow so callers can fall back to floating point.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    /// Throws std::domain_error for a zero denominator.
    Rational(std::int64_t n, std::int64_t d);
    /// Adopts n/d as is; the caller guarantees lowest terms and d > 0.
    static constexpr Rational reduced(std::int64_t n, std::int64_t d)
    {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_one() const noexcept { return num_ == 1 && den_ == 1; }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_negative() const noexcept { return num_ < 0; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::optional<Rational> operator+(const Rational& o) const;
    std::optional<Rational> operator*(const Rational& o) const;
    std::optional<Rational> inverse() const;
    std::optional<Rational> negated() const;
    /// Integer power; nullopt on overflow or 0^negative.
    std::optional<Rational> pow(std::int64_t e) const;
    /// Exact k-th root when numerator and denominator are perfect k-th powers.
    std::optional<Rational> root(std::int64_t k) const;

    bool operator==(const Rational& o) const noexcept { return num_ == o.num_ && den_ == o.den_; }
    std::strong_ordering operator<=>(const Rational& o) const noexcept;

    std::string str() const;

    /// Parses a plain decimal literal ("12", "0.25", "3.") exactly.
    static std::optional<Rational> from_decimal(const std::string& text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace sdesym

#endif  // SDESYM_RATIONAL_HPP
