#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace liouville {

/// Deterministic random source. Only raw mt19937_64 outputs are consumed
/// (the standard pins that sequence exactly), so identical seeds give
/// identical draws on every platform; std::*_distribution is never used.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t u64() { return gen_(); }

    /// Uniform in [0, n). n == 0 returns 0.
    std::uint64_t below(std::uint64_t n) { return n ? u64() % n : 0; }

    /// Uniform in [lo, hi], inclusive.
    long long range(long long lo, long long hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return static_cast<double>(u64() >> 11) * 0x1.0p-53 < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(v.size()))];
    }

  private:
    std::mt19937_64 gen_;
};

/// SplitMix64 finalizer; used to derive independent per-record seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t record_seed(std::uint64_t dataset_seed, std::uint64_t index) {
    return mix_seed(dataset_seed ^ mix_seed(index + 1));
}

} // namespace liouville
