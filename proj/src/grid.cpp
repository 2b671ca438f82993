#include "tlao/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tlao/errors.hpp"

namespace tlao {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> Grid1D::points() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

std::vector<double> Grid1D::wavenumbers() const {
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / length();
    const auto half = static_cast<long>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        long m = static_cast<long>(i);
        if (m >= half) m -= static_cast<long>(n);
        k[i] = dk * static_cast<double>(m);
    }
    return k;
}

void Grid1D::validate(double max_dx) const {
    if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
    if (n < 16 || !is_power_of_two(n))
        throw ConfigError("grid: point count must be a power of two >= 16, got " + std::to_string(n));
    if (dx() > max_dx)
        throw ConfigError("grid: spacing " + std::to_string(dx()) + " exceeds " + std::to_string(max_dx));
}

}  // namespace tlao
