#ifndef SDESYM_RNG_HPP
#define SDESYM_RNG_HPP

#include <cstdint>

namespace sdesym {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based normal stream: the variate for (seed, path, noise, index)
/// is a pure function of those four numbers, so paths can be generated in
/// any order or in parallel and adding paths never disturbs existing ones.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path, std::uint64_t noise) noexcept;

    /// Uniform in (0, 1) for the given counter.
    double uniform(std::uint64_t counter) const noexcept;
    /// Standard normal (Box-Muller, cosine branch) for the given index.
    double normal(std::uint64_t index) const noexcept;

private:
    std::uint64_t key_;
};

}  // namespace sdesym

#endif  // SDESYM_RNG_HPP
