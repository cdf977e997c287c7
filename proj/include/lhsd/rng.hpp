#ifndef LHSD_RNG_HPP
#define LHSD_RNG_HPP

#include <cstdint>
#include <random>

namespace lhsd {

/// splitmix64 finalizer; used to derive substream keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream with cheap, collision-resistant substream derivation.
///
/// Substreams are derived from the parent's key, never from its draw state, so
/// child(i) is the same stream no matter how many variates the parent has
/// produced. Replication studies key their streams as
/// seed -> child(scheme) -> child(replication) -> child(column), which makes
/// every replication exactly repeatable and safe to run in any order.
///
/// Uniforms are produced directly from the 64-bit engine output (53-bit
/// mantissa in [0,1)) instead of std::uniform_real_distribution, whose output
/// is not pinned down by the standard; this keeps results identical across
/// standard libraries.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : key_(mix64(seed)), engine_(key_) {}

    /// Derive an independent substream. Does not consume draws.
    RngStream child(std::uint64_t id) const {
        return RngStream(from_key{}, mix64(key_ ^ mix64(id)));
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the half-open interval [0,1); 1.0 is never returned.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift rejection method.
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (-bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    struct from_key {};
    RngStream(from_key, std::uint64_t key) : key_(key), engine_(key) {}

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace lhsd

#endif
