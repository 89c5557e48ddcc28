#include "sdesym/rng.hpp"

#include <cmath>
#include <numbers>

namespace sdesym {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t path, std::uint64_t noise) noexcept
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ path) ^ (noise * 0xd1b54a32d192ed03ull)))
{
}

double NormalStream::uniform(std::uint64_t counter) const noexcept
{
    const std::uint64_t bits = splitmix64(key_ ^ splitmix64(counter));
    // 53 random bits, shifted off zero.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::normal(std::uint64_t index) const noexcept
{
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sdesym
