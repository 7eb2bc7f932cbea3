#pragma once

#include <cstdint>
#include <string_view>

namespace fengshui {

// Counter-based generator: draw i of a stream keyed by `key` is
// splitmix64_mix(key + i * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next() noexcept;
    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    // Unbiased integer in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;
    // Standard normal via Box-Muller (no cached second variate).
    double normal() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace fengshui
