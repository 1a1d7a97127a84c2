#pragma once

// Fourier-spectral calculus on a uniform periodic grid s_j = j L / N.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace filament::spectral {

using Complex = std::complex<double>;
using RealVec = std::vector<double>;
using ComplexVec = std::vector<Complex>;

bool is_power_of_two(std::size_t n);

/// Version string of the FFT library.
const char* backend_version();

/// Grid nodes s_j = j L / N.
RealVec nodes(std::size_t n, double length);

/// Unnormalized forward DFT (FFTW sign convention, e^{-i...}).
ComplexVec fft(std::span<const Complex> values);
/// Inverse DFT including the 1/N factor.
ComplexVec ifft(std::span<const Complex> coefficients);

/// Angular wavenumbers in FFT order; the Nyquist entry is -N/2 * 2pi/L.
RealVec wavenumbers(std::size_t n, double length);

/// d^order f / ds^order. The Nyquist mode is dropped for odd orders.
RealVec derivative(std::span<const double> f, double length, int order = 1);

/// Derivative of the quasi-periodic field f(s) e^{i shift s}, returned with
/// the e^{i shift s} factor removed: Fourier symbol (i(q + shift))^order.
ComplexVec derivative(std::span<const Complex> f, double length, int order = 1,
                      double shift = 0.0);

/// Primitive F(s_j) = integral of f from 0 to s_j (mean part integrated as a ramp).
RealVec antiderivative(std::span<const double> f, double length);

/// Periodic trapezoid rule, exact for trigonometric polynomials of degree < N.
double integrate(std::span<const double> f, double length);
Complex integrate(std::span<const Complex> f, double length);

double mean(std::span<const double> f);

/// 2/3-rule: zero every mode with |m| > N/3.
RealVec dealias(std::span<const double> f);
ComplexVec dealias(std::span<const Complex> f);

/// Band-limited interpolation of f at s_j + offset for every node.
RealVec translate(std::span<const double> f, double length, double offset);

/// Real trigonometric interpolant through N periodic samples, evaluable anywhere.
class TrigInterpolant {
public:
    TrigInterpolant(std::span<const double> samples, double length);

    double value(double s) const;
    double derivative(double s) const;
    double length() const { return length_; }

private:
    ComplexVec coeffs_;  // F_m / N for m = 0..N/2
    double length_;
};

}  // namespace filament::spectral
