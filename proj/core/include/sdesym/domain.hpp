#ifndef SDESYM_DOMAIN_HPP
#define SDESYM_DOMAIN_HPP

#include <map>
#include <string>
#include <string_view>

namespace sdesym {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
    bool empty() const noexcept { return !(hi >= lo); }
};

/// Axis-aligned validity box. Symbols without an explicit entry fall back to
/// `fallback` (used for free parameters such as ansatz constants).
struct Domain {
    std::map<std::string, Interval, std::less<>> boxes;
    Interval fallback{-1.0, 1.0};

    Interval of(std::string_view name) const
    {
        auto it = boxes.find(name);
        return it == boxes.end() ? fallback : it->second;
    }
    void set(const std::string& name, Interval iv) { boxes[name] = iv; }
};

/// Default boxes: states in [0.5, 2], t in [0, 1], noises in [-1, 1].
inline constexpr Interval kDefaultStateBox{0.5, 2.0};
inline constexpr Interval kDefaultTimeBox{0.0, 1.0};
inline constexpr Interval kDefaultNoiseBox{-1.0, 1.0};

}  // namespace sdesym

#endif  // SDESYM_DOMAIN_HPP
