#include "filament/sampling.hpp"

#include <cmath>
#include <numbers>

namespace filament::sampling {

std::vector<double> random_trig_polynomial(std::size_t n, double length, int max_mode,
                                           double amplitude, double offset, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
    std::vector<double> f(n, offset);
    for (int m = 1; m <= max_mode; ++m) {
        const double a = coeff(rng);
        const double b = coeff(rng);
        const double q = 2.0 * std::numbers::pi * m / length;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = length * static_cast<double>(j) / static_cast<double>(n);
            f[j] += a * std::cos(q * s) + b * std::sin(q * s);
        }
    }
    return f;
}

std::vector<std::complex<double>> random_complex_trig_polynomial(std::size_t n, double length,
                                                                 int max_mode, double amplitude,
                                                                 std::complex<double> center,
                                                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
    std::vector<std::complex<double>> f(n, center);
    for (int m = -max_mode; m <= max_mode; ++m) {
        if (m == 0) continue;
        const std::complex<double> c(coeff(rng), coeff(rng));
        const double q = 2.0 * std::numbers::pi * m / length;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = length * static_cast<double>(j) / static_cast<double>(n);
            f[j] += c * std::polar(1.0, q * s);
        }
    }
    return f;
}

}  // namespace filament::sampling
