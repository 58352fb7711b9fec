#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace parnn {

/// Deterministic random source. Wraps std::mt19937_64 but generates uniforms
/// and normals itself so that streams are bit-identical across standard
/// library implementations (std::normal_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (-scale, +scale).
    double uniform_symmetric(double scale) {
        return scale * (2.0 * uniform() - 1.0);
    }

    /// Standard normal via Box-Muller. Pairs are cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace parnn
