#pragma once

#include <cstdint>
#include <initializer_list>

namespace misalign {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random stream addressed by (seed, derivation path).
///
/// Draw i of a stream with key K is mix64(K + (i+1)*gamma), i.e. a SplitMix64
/// sequence started at K. A child stream for index c has key
/// mix64(K ^ mix64(c + gamma)). Experiments derive base seed -> series ->
/// run, so each run's draws do not depend on scheduling.
class RngStream {
  public:
    static constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ull;

    explicit RngStream(std::uint64_t seed) : key_(seed), state_(seed) {}

    RngStream child(std::uint64_t index) const { return RngStream(mix64(key_ ^ mix64(index + gamma))); }

    RngStream derive(std::initializer_list<std::uint64_t> path) const
    {
        RngStream s = *this;
        for (auto index : path) s = s.child(index);
        return s;
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64()
    {
        state_ += gamma;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi); returns lo exactly when lo == hi.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, bound), unbiased (Lemire multiply-shift with rejection).
    std::uint64_t uniform_index(std::uint64_t bound);

  private:
    std::uint64_t key_;
    std::uint64_t state_;
};

}  // namespace misalign
