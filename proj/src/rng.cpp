#include "alpet/rng.hpp"

#include "alpet/error.hpp"

#include <cmath>
#include <numbers>

namespace alpet {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string substream)
    : seed_(seed), substream_(std::move(substream)),
      key_(mix64(mix64(seed) ^ fnv1a(substream_))) {}

RngStream RngStream::child(std::string_view label) const {
    std::string name = substream_;
    name += '/';
    name += label;
    return RngStream(seed_, std::move(name));
}

std::uint64_t RngStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

namespace {
__extension__ using u128 = unsigned __int128;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) fail(Errc::invalid_argument, "uniform_index over an empty range");
    // Lemire's multiply-shift with rejection.
    u128 product = static_cast<u128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            product = static_cast<u128>(next_u64()) * n;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double RngStream::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace alpet
