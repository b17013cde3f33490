#pragma once

#include <chrono>
#include <cstdint>
#include <random>

namespace dynflow {

// splitmix64; used to derive per-region / per-epoch seeds from a master seed.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) { return mix64(mix64(a, b), c); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

using Rng = std::mt19937_64;

// Uniform in [0,1); avoids distribution objects so streams are stable.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller standard normal.
inline double gaussian(Rng& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 1e-300) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Uniform integer in [0, n)
inline int uniform_int(Rng& rng, int n) {
    return static_cast<int>(rng() % static_cast<uint64_t>(n));
}

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    long long micros() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }
    double seconds() const { return static_cast<double>(micros()) * 1e-6; }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace dynflow
