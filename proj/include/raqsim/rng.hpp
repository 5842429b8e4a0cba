#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace raqsim {

// Seed mixing for derived, order-independent random streams. Every stream in
// the simulator is keyed by explicit ids (master seed, object, view, ...) so
// results never depend on execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

inline std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> parts) {
    return std::mt19937_64(mix_seed(parts));
}

// Uniform in [0, 1), 53-bit resolution. Bypasses std distributions so the
// exact draw sequence is pinned by the mt19937_64 standard output.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe as a log() argument.
inline double uniform01_open(std::mt19937_64& g) {
    return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

// Uniform integer in [0, n). n must be >= 1.
inline int uniform_int(std::mt19937_64& g, int n) {
    int v = static_cast<int>(uniform01(g) * static_cast<double>(n));
    return v >= n ? n - 1 : v;
}

// One standard normal pair via Box-Muller.
inline void gaussian_pair(std::mt19937_64& g, double& z0, double& z1) {
    const double u1 = uniform01_open(g);
    const double u2 = uniform01(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

inline double gaussian(std::mt19937_64& g) {
    double z0, z1;
    gaussian_pair(g, z0, z1);
    return z0;
}

// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
inline std::complex<double> draw_cscg(std::mt19937_64& g, double variance) {
    double z0, z1;
    gaussian_pair(g, z0, z1);
    const double s = std::sqrt(variance / 2.0);
    return {s * z0, s * z1};
}

}  // namespace raqsim
