#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace levyht {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One private random stream. Streams derived from (seed, stream) are
// statistically independent, so path batches can run on any number of
// workers with results that do not depend on scheduling.
//
// Variate generation is implemented here rather than with <random>
// distributions because the standard leaves their algorithms
// implementation-defined; outputs must be identical across toolchains
// for the reproducibility contract.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1))) {}

    // uniform on (0,1), never returns an endpoint
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Exponential with given mean (= 1/rate).
    double exponential(double mean) { return -mean * std::log(uniform()); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace levyht
