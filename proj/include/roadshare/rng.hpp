#pragma once

#include <cstdint>
#include <vector>

namespace roadshare {

/// Seedable splitmix64 generator (Steele/Lea/Flood finalizer). The output
/// stream is fully specified by the algorithm, so instances generated from
/// a seed are reproducible across platforms and implementations; that is
/// the property the instance generators need, not statistical heroics.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound). Rejection-free Lemire reduction would be
    /// overkill here; modulo bias is negligible for the bounds we use,
    /// but we reject the tail anyway to keep draws exactly uniform.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform real in [0, 1).
    double next_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_real(); }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[next_below(v.size())];
    }

  private:
    std::uint64_t state_;
};

}  // namespace roadshare
