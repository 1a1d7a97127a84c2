#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace filament::sampling {

/// offset + sum over m = 1..max_mode of a_m cos(q_m s) + b_m sin(q_m s) with
/// |a_m|, |b_m| <= amplitude drawn uniformly.
std::vector<double> random_trig_polynomial(std::size_t n, double length, int max_mode,
                                           double amplitude, double offset, std::mt19937_64& rng);

/// Complex trigonometric polynomial: center + sum over 0 < |m| <= max_mode of
/// c_m e^{i q_m s} with |Re c_m|, |Im c_m| <= amplitude.
std::vector<std::complex<double>> random_complex_trig_polynomial(std::size_t n, double length,
                                                                 int max_mode, double amplitude,
                                                                 std::complex<double> center,
                                                                 std::mt19937_64& rng);

}  // namespace filament::sampling
