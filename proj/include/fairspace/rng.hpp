// Deterministic random source. std::uniform_real_distribution and friends are
// implementation-defined, so the mappings from raw mt19937_64 output are done
// by hand; the same seed yields the same stream on every platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fairspace {

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes exactly two uniforms per call.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Uniform point in the closed ball of the given radius.
    std::vector<double> in_ball(size_t dim, double radius) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        for (auto& x : v) {
            x = normal();
            norm2 += x * x;
        }
        double norm = std::sqrt(norm2);
        double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
        if (norm == 0.0) return std::vector<double>(dim, 0.0);
        for (auto& x : v) x *= r / norm;
        return v;
    }

    // Fisher-Yates shuffle of 0..n-1.
    std::vector<size_t> permutation(size_t n) {
        std::vector<size_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = i;
        for (size_t i = n; i > 1; --i) {
            size_t j = static_cast<size_t>(gen_() % i);
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

    // Stable derivation of per-trial seeds from a master seed (splitmix64 mix).
    static uint64_t derive(uint64_t master, uint64_t index) {
        uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace fairspace
