#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alpet {

// Counter-based generator: every draw is mix(key + counter * golden), where
// key is derived from (seed, substream label). Only integer arithmetic is
// involved, so a given (seed, substream) yields the same sequence everywhere.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string substream);

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& substream() const noexcept { return substream_; }

    // Independent stream labelled "<substream>/<label>".
    RngStream child(std::string_view label) const;

    std::uint64_t next_u64() noexcept;

    // Uniform in [0, n). Unbiased (Lemire rejection). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept;

    // Standard normal via Box-Muller (synthetic fixtures only).
    double normal();

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::string substream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// In-place Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::vector<T>& values, RngStream& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(values[i - 1], values[j]);
    }
}

// m distinct elements of `values` drawn uniformly, in draw order.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> values, std::size_t m, RngStream& rng) {
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < m && i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(values[i], values[j]);
    }
    values.resize(m < n ? m : n);
    return values;
}

} // namespace alpet
