#include "filament/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "filament/errors.hpp"

namespace filament::spectral {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and never freed.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans.emplace(key, plan);
    return plan;
}

void check_size(std::size_t n) {
    if (n < 2 || !is_power_of_two(n)) {
        throw InvalidInput("spectral grid size must be a power of two, got " + std::to_string(n));
    }
}

ComplexVec transform(std::span<const Complex> in, int sign) {
    check_size(in.size());
    ComplexVec src(in.begin(), in.end());
    ComplexVec out(in.size());
    fftw_execute_dft(plan_for(in.size(), sign), reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

ComplexVec to_complex(std::span<const double> f) { return ComplexVec(f.begin(), f.end()); }

RealVec real_part(const ComplexVec& f) {
    RealVec out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
    return out;
}

Complex ipow(Complex z, int order) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < order; ++i) r *= z;
    return r;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

const char* backend_version() { return fftw_version; }

RealVec nodes(std::size_t n, double length) {
    RealVec s(n);
    const double ds = length / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<double>(j) * ds;
    return s;
}

ComplexVec fft(std::span<const Complex> values) { return transform(values, FFTW_FORWARD); }

ComplexVec ifft(std::span<const Complex> coefficients) {
    auto out = transform(coefficients, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

RealVec wavenumbers(std::size_t n, double length) {
    RealVec q(n);
    const double dq = 2.0 * std::numbers::pi / length;
    const auto half = static_cast<long>(n / 2);
    for (std::size_t m = 0; m < n; ++m) {
        long signed_m = static_cast<long>(m);
        if (signed_m >= half) signed_m -= static_cast<long>(n);
        q[m] = dq * static_cast<double>(signed_m);
    }
    return q;
}

ComplexVec derivative(std::span<const Complex> f, double length, int order, double shift) {
    auto coeffs = fft(f);
    const std::size_t n = f.size();
    const auto q = wavenumbers(n, length);
    const Complex i{0.0, 1.0};
    for (std::size_t m = 0; m < n; ++m) {
        if (m == n / 2) {
            // Average the symbols of +q and -q so the Nyquist mode stays symmetric.
            const Complex plus = ipow(i * (-q[m] + shift), order);
            const Complex minus = ipow(i * (q[m] + shift), order);
            coeffs[m] *= 0.5 * (plus + minus);
        } else {
            coeffs[m] *= ipow(i * (q[m] + shift), order);
        }
    }
    return ifft(coeffs);
}

RealVec derivative(std::span<const double> f, double length, int order) {
    return real_part(derivative(std::span<const Complex>(to_complex(f)), length, order, 0.0));
}

RealVec antiderivative(std::span<const double> f, double length) {
    const std::size_t n = f.size();
    auto coeffs = fft(to_complex(f));
    const double avg = coeffs[0].real() / static_cast<double>(n);
    const auto q = wavenumbers(n, length);
    coeffs[0] = 0.0;
    coeffs[n / 2] = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        if (m != n / 2) coeffs[m] /= Complex(0.0, q[m]);
    }
    auto periodic = real_part(ifft(coeffs));
    const auto s = nodes(n, length);
    RealVec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = avg * s[j] + periodic[j] - periodic[0];
    out[0] = 0.0;
    return out;
}

double integrate(std::span<const double> f, double length) {
    double sum = 0.0;
    for (double v : f) sum += v;
    return sum * length / static_cast<double>(f.size());
}

Complex integrate(std::span<const Complex> f, double length) {
    Complex sum{0.0, 0.0};
    for (auto v : f) sum += v;
    return sum * (length / static_cast<double>(f.size()));
}

double mean(std::span<const double> f) {
    double sum = 0.0;
    for (double v : f) sum += v;
    return sum / static_cast<double>(f.size());
}

ComplexVec dealias(std::span<const Complex> f) {
    const std::size_t n = f.size();
    auto coeffs = fft(f);
    const std::size_t cutoff = n / 3;
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t mag = m <= n / 2 ? m : n - m;
        if (mag > cutoff) coeffs[m] = 0.0;
    }
    return ifft(coeffs);
}

RealVec dealias(std::span<const double> f) {
    return real_part(dealias(std::span<const Complex>(to_complex(f))));
}

RealVec translate(std::span<const double> f, double length, double offset) {
    const std::size_t n = f.size();
    auto coeffs = fft(to_complex(f));
    const auto q = wavenumbers(n, length);
    for (std::size_t m = 0; m < n; ++m) {
        if (m == n / 2) {
            coeffs[m] *= std::cos(q[m] * offset);
        } else {
            coeffs[m] *= std::polar(1.0, q[m] * offset);
        }
    }
    return real_part(ifft(coeffs));
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples, double length)
    : length_(length) {
    const std::size_t n = samples.size();
    auto coeffs = fft(to_complex(samples));
    coeffs_.assign(coeffs.begin(), coeffs.begin() + static_cast<long>(n / 2 + 1));
    for (auto& c : coeffs_) c /= static_cast<double>(n);
}

double TrigInterpolant::value(double s) const {
    const std::size_t half = coeffs_.size() - 1;
    const double dq = 2.0 * std::numbers::pi / length_;
    const Complex step = std::polar(1.0, dq * s);
    Complex z = step;
    Complex acc{0.0, 0.0};
    for (std::size_t m = 1; m < half; ++m) {
        acc += coeffs_[m] * z;
        z *= step;
    }
    return coeffs_[0].real() + 2.0 * acc.real() +
           coeffs_[half].real() * std::cos(dq * static_cast<double>(half) * s);
}

double TrigInterpolant::derivative(double s) const {
    const std::size_t half = coeffs_.size() - 1;
    const double dq = 2.0 * std::numbers::pi / length_;
    const Complex step = std::polar(1.0, dq * s);
    Complex z = step;
    Complex acc{0.0, 0.0};
    for (std::size_t m = 1; m < half; ++m) {
        acc += Complex(0.0, dq * static_cast<double>(m)) * coeffs_[m] * z;
        z *= step;
    }
    const double qn = dq * static_cast<double>(half);
    return 2.0 * acc.real() - coeffs_[half].real() * qn * std::sin(qn * s);
}

}  // namespace filament::spectral
