#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hrc {

// Deterministic random source. All distributions are spelled out here instead
// of using std:: distributions, whose output is implementation-defined; with
// this wrapper a seed pins the exact draw sequence across compilers.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection keeps the draw unbiased.
    uint64_t uniform_int(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; consumes exactly two uniforms per call
    // so the draw count never depends on earlier values.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Derives an independent substream; purposes get fixed tags so adding a
    // consumer never shifts the draws of another.
    Rng substream(uint64_t purpose) const { return Rng(splitmix64(seed_mix_ ^ purpose)); }

    explicit Rng(uint64_t seed, uint64_t mix) : engine_(seed), seed_mix_(mix) {}

    static Rng master(uint64_t seed) { return Rng(splitmix64(seed), seed); }

    static uint64_t splitmix64(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

  private:
    std::mt19937_64 engine_;
    uint64_t seed_mix_ = 0;
};

// Substream purpose tags.
namespace rng_purpose {
inline constexpr uint64_t kParentSampling = 0x70617265ULL;
inline constexpr uint64_t kGaOperators = 0x67616f70ULL;
inline constexpr uint64_t kBaseline = 0x62617365ULL;
}  // namespace rng_purpose

}  // namespace hrc
