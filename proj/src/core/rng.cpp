#include "ovid/rng.hpp"

#include <cassert>
#include <limits>

namespace ovid {

std::size_t Rng::uniform_index(std::size_t bound) {
    assert(bound > 0);
    const auto range = static_cast<std::uint64_t>(bound);
    // Rejection sampling on the largest multiple of range.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = next();
    while (draw >= limit) {
        draw = next();
    }
    return static_cast<std::size_t>(draw % range);
}

double Rng::uniform01() {
    return static_cast<double>(next() >> 11U) * 0x1.0p-53;
}

} // namespace ovid
