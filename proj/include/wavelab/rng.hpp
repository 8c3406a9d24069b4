#pragma once

#include <cstdint>
#include <random>

namespace wavelab {

/** Deterministic normal/uniform stream keyed by (seed, index).
 *
 * The engine is the standardized mt19937_64 and the distributions are
 * hand-rolled (Box-Muller on 53-bit uniforms), so identical keys give
 * identical draws on every platform and the per-sample streams are
 * independent of evaluation order.
 */
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t index)
        : eng_(mix(mix(seed) ^ mix(index + 0x9e3779b97f4a7c15ULL))) {}

    // U(0,1], never exactly 0.
    double next_uniform() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
    }

    // N(0,1).
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}
