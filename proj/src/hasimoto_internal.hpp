#pragma once

// Gauged-field building blocks shared by the right-hand sides and the steppers.

#include <vector>

#include "filament/hasimoto.hpp"

namespace filament::hasimoto::detail {

/// Pointwise pieces of the general equation for one wave state.
struct GeneralParts {
    std::vector<Complex> dispersion;  ///< A/k - i B/k
    std::vector<double> tangential;   ///< C
    std::vector<Complex> potential;   ///< A k - i B k - Lambda + int B tau k
};

GeneralParts general_parts(const WaveFunction& wave, const flow::FlowSpec& spec, double time);

std::vector<Complex> general_rhs_gauged(const WaveFunction& wave, const GeneralParts& parts);
std::vector<Complex> cubic_nls_rhs_gauged(const WaveFunction& wave);
std::vector<Complex> hirota_rhs_gauged(const WaveFunction& wave, double W);
std::vector<Complex> power_series_rhs_gauged(const WaveFunction& wave,
                                             const std::vector<double>& coefficients);

/// sum a_n |psi|^{n-1}
std::vector<double> series_dispersion(const std::vector<Complex>& g,
                                      const std::vector<double>& coefficients);
/// sum a_n n/(n+1) |psi|^{n+1}
std::vector<double> series_nonlinearity(const std::vector<Complex>& g,
                                        const std::vector<double>& coefficients);

}  // namespace filament::hasimoto::detail
