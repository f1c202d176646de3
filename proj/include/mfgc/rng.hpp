#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace mfgc {

/// Counter-based generator "splitmix64-ctr", version 1.
///
/// The i-th draw (i = 1, 2, ...) of a stream with key k is mix(k + i * G), where
/// G = 0x9E3779B97F4A7C15 and mix is the SplitMix64 finalizer
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31.
/// A seed s gives the key mix(s). Child stream j of key k has key mix(k ^ mix(j + G)).
/// Uniforms on (0, 1) are ((draw >> 11) + 0.5) * 2^-53.
class CounterRng {
public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr int kVersion = 1;

    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    /// Independent child stream; does not advance this stream.
    [[nodiscard]] CounterRng split(std::uint64_t stream) const noexcept
    {
        return CounterRng(Key{}, mix(key_ ^ mix(stream + kGamma)));
    }

    std::uint64_t operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Exponential waiting time by inverse transform.
    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    struct Key {};
    CounterRng(Key, std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace mfgc
