#pragma once

#include <cstddef>
#include <vector>

namespace tlao {

/// Uniform periodic grid on [x_min, x_max); the right end point is not sampled.
struct Grid1D {
    double x_min = -16.0;
    double x_max = 16.0;
    std::size_t n = 1024;

    double length() const { return x_max - x_min; }
    double dx() const { return length() / static_cast<double>(n); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

    std::vector<double> points() const;
    /// FFT-ordered angular wavenumbers.
    std::vector<double> wavenumbers() const;

    /// Throws ConfigError unless n >= 16, n is a power of two and dx <= max_dx.
    void validate(double max_dx = 0.25) const;

    static Grid1D symmetric(double half_width, std::size_t n) { return {-half_width, half_width, n}; }
};

bool is_power_of_two(std::size_t n);

}  // namespace tlao
