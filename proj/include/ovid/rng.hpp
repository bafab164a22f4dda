#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ovid {

/// Seeded generator with platform-independent derived distributions.
///
/// std::mt19937_64 produces the same stream everywhere, but the standard
/// distributions do not, so the bounded/real draws are implemented here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next() { return m_engine(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::size_t uniform_index(std::size_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    double uniform(double low, double high) { return low + (high - low) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 m_engine;
};

} // namespace ovid
