#pragma once

// The intrinsic side of the curve/wave correspondence: psi = k exp(i theta)
// with theta the running integral of torsion, and the scalar evolution
// equations induced by a Frenet-framed flow.

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "filament/flow.hpp"
#include "filament/geometry.hpp"

namespace filament::hasimoto {

using Complex = std::complex<double>;

/// Sampled wave function on a periodic grid.
///
/// When the total torsion is not a multiple of 2pi, psi itself is only
/// quasi-periodic. It is stored as the periodic gauged field
/// psi~ = psi exp(-i mu s) together with mu.
class WaveFunction {
public:
    /// From physical samples psi(s_j).
    WaveFunction(const std::vector<Complex>& psi, double length, double mu = 0.0,
                 double base_point = 0.0);
    static WaveFunction from_gauged(std::vector<Complex> gauged, double length, double mu = 0.0,
                                    double base_point = 0.0);

    std::vector<Complex> psi() const;
    const std::vector<Complex>& gauged() const { return gauged_; }
    double length() const { return length_; }
    double mu() const { return mu_; }
    double base_point() const { return base_point_; }
    std::size_t size() const { return gauged_.size(); }
    double spacing() const { return length_ / static_cast<double>(gauged_.size()); }

private:
    WaveFunction() = default;
    std::vector<Complex> gauged_;
    double length_ = 0.0;
    double mu_ = 0.0;
    double base_point_ = 0.0;
};

/// psi = k exp(i int_{s0}^s tau), s0 = base_node * ds. mu is the mean torsion.
WaveFunction forward_transform(const GeometryProfile& profile, std::size_t base_node = 0);

/// k = |psi|, tau = Im(psi_s conj psi) / |psi|^2.
GeometryProfile inverse_transform(const WaveFunction& wave);

struct PotentialTerm {
    std::vector<double> Lambda;    ///< primitive with d Lambda / ds = A k_s
    std::vector<double> nonlocal;  ///< int_0^s B tau k ds'
    std::vector<Complex> combined; ///< A k - i B k - Lambda + nonlocal
};

/// Lambda splits A into terms depending on k alone, integrated in k (closed
/// form for power series, 32-point Gauss-Legendre otherwise), and the remaining
/// terms, integrated along s against k_s from base point 0.
PotentialTerm potential(const GeometryProfile& profile, const flow::FlowSpec& spec,
                        const flow::FlowCoefficients& coeffs);

/// psi_t = i[((A/k) psi - i (B/k) psi)_ss - i C psi_s + (A k - i B k - Lambda + int B tau k) psi].
/// Throws NonGeometricFlow when a coefficient references s or t.
std::vector<Complex> general_rhs(const WaveFunction& wave, const flow::FlowSpec& spec,
                                 double time = 0.0);

/// i(psi_ss + |psi|^2 psi / 2)
std::vector<Complex> cubic_nls_rhs(const WaveFunction& wave);
/// i(psi_ss + |psi|^2 psi / 2) + W(psi_sss + 3/2 |psi|^2 psi_s)
std::vector<Complex> hirota_rhs(const WaveFunction& wave, double W);
/// i(((sum a_n k^{n-1}) psi)_ss + f(|psi|) psi), f = sum a_n n/(n+1) |psi|^{n+1}
std::vector<Complex> power_series_rhs(const WaveFunction& wave,
                                      const std::vector<double>& coefficients);

struct GeneralIntegroDifferential {
    flow::FlowSpec spec;
};
struct CubicNLS {};
struct Hirota {
    double W = 0.0;
};
/// coefficients[n-1] = a_n.
struct PowerSeriesNLS {
    std::vector<double> coefficients;
};
using SolverKind = std::variant<GeneralIntegroDifferential, CubicNLS, Hirota, PowerSeriesNLS>;

/// Validates a solver kind (finite W, real coefficients with a_m != 0).
void validate(const SolverKind& kind);
std::string describe_scheme(const SolverKind& kind);

/// One integrating-factor RK4 step of the general equation. The frozen mean of
/// A/k - iB/k at the start of the step sets the exactly integrated dispersion.
WaveFunction step_general(const WaveFunction& wave, const flow::FlowSpec& spec, double dt,
                          double time = 0.0);

/// One step of the solver for a named reduction (dispatches to step_general
/// for GeneralIntegroDifferential).
WaveFunction step_specialized(const WaveFunction& wave, const SolverKind& kind, double dt,
                              double time = 0.0);

struct WaveTrajectory {
    std::vector<double> times;
    std::vector<WaveFunction> waves;
};

/// Fixed steps of size dt to t_final (last step shortened), recording every
/// record_every steps plus the final state.
WaveTrajectory evolve_wave(const WaveFunction& initial, const SolverKind& kind, double dt,
                           double t_final, std::size_t record_every = 1);

}  // namespace filament::hasimoto
