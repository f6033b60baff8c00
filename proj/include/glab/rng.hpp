#pragma once

#include <cmath>
#include <cstdint>

namespace glab {

namespace detail {
// Stafford variant 13 of the 64-bit finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based deterministic random stream (SplitMix64 in stateless form).
///
/// Streams are identified by a 64-bit key; drawing the n-th variate never
/// depends on how many variates other streams produced, and `substream(i)`
/// derives an independent child keyed on (key, i). This is what makes
/// descriptor computations byte-identical across thread counts: every outer
/// draw owns substream(draw_index) of the root stream.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed)
        : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ull)), counter_(0), have_cached_(false), cached_(0.0) {}

    RngStream substream(std::uint64_t index) const {
        RngStream child(0);
        child.key_ = detail::mix64(key_ ^ (0x94d049bb133111ebull * (index + 1)));
        child.counter_ = 0;
        child.have_cached_ = false;
        return child;
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ull;
        return detail::mix64(key_ ^ detail::mix64(counter_));
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached). Hand-rolled so the
    /// byte stream does not depend on the standard library implementation.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), u1 < 1
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
    bool have_cached_;
    double cached_;
};

}  // namespace glab
