#include "sdesym/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sdesym {
namespace {

__extension__ typedef __int128 i128;

std::optional<Rational> make(i128 n, i128 d)
{
    if (d == 0) return std::nullopt;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 a = n < 0 ? -n : n;
    i128 b = d;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min() + 1;
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) return std::nullopt;
    return Rational::reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

std::optional<std::int64_t> int_root(std::int64_t v, std::int64_t k)
{
    if (v < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_root(-v, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / static_cast<double>(k))));
    for (std::int64_t c = std::max<std::int64_t>(0, guess - 1); c <= guess + 1; ++c) {
        i128 p = 1;
        bool over = false;
        for (std::int64_t i = 0; i < k; ++i) {
            p *= c;
            if (p > static_cast<i128>(v)) {
                over = true;
                break;
            }
        }
        if (!over && p == static_cast<i128>(v)) return c;
    }
    return std::nullopt;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw std::domain_error("rational with zero denominator");
    auto r = make(n, d);
    if (!r) throw std::overflow_error("rational out of range");
    *this = *r;
}

std::optional<Rational> Rational::operator+(const Rational& o) const
{
    return make(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                static_cast<i128>(den_) * o.den_);
}

std::optional<Rational> Rational::operator*(const Rational& o) const
{
    return make(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

std::optional<Rational> Rational::inverse() const
{
    if (num_ == 0) return std::nullopt;
    return make(den_, num_);
}

std::optional<Rational> Rational::negated() const { return make(-static_cast<i128>(num_), den_); }

std::optional<Rational> Rational::pow(std::int64_t e) const
{
    if (e < 0) {
        auto inv = inverse();
        if (!inv) return std::nullopt;
        return inv->pow(-e);
    }
    std::optional<Rational> acc = Rational(1);
    Rational base = *this;
    while (e > 0) {
        if (e & 1) {
            acc = *acc * base;
            if (!acc) return std::nullopt;
        }
        e >>= 1;
        if (e > 0) {
            auto sq = base * base;
            if (!sq) return std::nullopt;
            base = *sq;
        }
    }
    return acc;
}

std::optional<Rational> Rational::root(std::int64_t k) const
{
    if (k <= 0) return std::nullopt;
    auto n = int_root(num_, k);
    auto d = int_root(den_, k);
    if (!n || !d) return std::nullopt;
    return make(*n, *d);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const noexcept
{
    i128 l = static_cast<i128>(num_) * o.den_;
    i128 r = static_cast<i128>(o.num_) * den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::from_decimal(const std::string& text)
{
    i128 n = 0;
    i128 d = 1;
    bool seen_dot = false;
    bool any_digit = false;
    constexpr i128 limit = static_cast<i128>(1) << 100;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        any_digit = true;
        n = n * 10 + (c - '0');
        if (seen_dot) d *= 10;
        if (n > limit || d > limit) return std::nullopt;
    }
    if (!any_digit) return std::nullopt;
    return make(n, d);
}

}  // namespace sdesym
