#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bqc/gates.hpp"

namespace bqc {

// Discrete protocol angles {2 pi p / 2^c}. Stored as the integer index p
// modulo 2^c so the angle-doubling recursion is exact.
struct AngleSet {
    int c = 3;

    explicit AngleSet(int resolution = 3) : c(resolution) {
        if (c < 1 || c > 30) throw std::invalid_argument("angle resolution c must be in 1..30");
    }

    uint32_t size() const { return uint32_t(1) << c; }
    uint32_t wrap(int64_t p) const { return uint32_t(((p % int64_t(size())) + int64_t(size())) % int64_t(size())); }
    double angle(int64_t p) const { return 2.0 * kPi * double(wrap(p)) / double(size()); }

    // Nearest index to an arbitrary angle; reports the rounding error.
    uint32_t round_to_index(double theta, double* rounding_error = nullptr) const {
        double frac = theta / (2.0 * kPi) * double(size());
        int64_t p = int64_t(std::llround(frac));
        uint32_t idx = wrap(p);
        if (rounding_error) *rounding_error = std::abs(theta - remap_near(angle(idx), theta));
        return idx;
    }

    // pi/4 rotations (the universal set) need c >= 3
    bool supports_pi_over_4() const { return c >= 3; }

private:
    // shift by multiples of 2 pi to the representative closest to ref
    static double remap_near(double x, double ref) {
        while (x - ref > kPi) x -= 2 * kPi;
        while (ref - x > kPi) x += 2 * kPi;
        return x;
    }
};

}  // namespace bqc
