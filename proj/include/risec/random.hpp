#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace risec {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t combine_keys(std::uint64_t key, std::uint64_t tag) noexcept {
    return mix64(key + 0x9e3779b97f4a7c15ULL * (tag + 1));
}

/// Counter-based random stream: the key identifies the stream, the counter
/// its position. Streams derived with distinct tag paths are independent,
/// and a stream's output depends only on (key, counter), never on global
/// state, so every (link, realization) pair of the channel model can own a
/// reproducible substream.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}

    /// Derive an independent child stream. Does not advance this stream.
    [[nodiscard]] RandomStream split(std::uint64_t tag) const noexcept {
        return RandomStream(combine_keys(key_, tag));
    }
    [[nodiscard]] RandomStream split(std::uint64_t tag_a, std::uint64_t tag_b) const noexcept {
        return RandomStream(combine_keys(combine_keys(key_, tag_a), tag_b));
    }

    std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per pair of uniforms).
    double normal() noexcept {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// CN(0, 1): real and imaginary parts each N(0, 1/2).
    std::complex<double> complex_normal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace risec
