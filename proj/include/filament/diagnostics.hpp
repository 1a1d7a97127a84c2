#pragma once

// Global quantities of an evolving curve: length I1 = int |gamma_s| and
// bending energy I2 = int k^2, with their rates under a flow.

#include <optional>
#include <vector>

#include "filament/flow.hpp"
#include "filament/geometry.hpp"

namespace filament::diagnostics {

/// Spectral quadrature of |d gamma / du| over the period. Independent of the
/// parameterization, so it detects drift before reparameterization.
double length(const DiscreteCurve& curve);
double length(const GeometryProfile& profile);

/// int (C_s - B k) ds. Exactly zero when B and C fold to zero.
double length_rate(const GeometryProfile& profile, const flow::FlowSpec& spec, double time = 0.0);

/// int k^2 ds on an arclength grid.
double bending_energy(const GeometryProfile& profile);
/// int k^2 |gamma_u| du, valid on any parameterization.
double bending_energy(const DiscreteCurve& curve);

/// 2 int [k B_ss + 2k^2 C_s + k k_s C - 2k A_s tau - k A tau_s - k B tau^2 - B k^2 tau] ds.
///
/// This integrand follows from 2 int k k_t ds alone and ignores the change of
/// the length element. It is the true rate for binormal flows only.
double bending_energy_rate(const GeometryProfile& profile, const flow::FlowSpec& spec,
                           double time = 0.0);

/// Rate of I2 under a general flow, including the stretching of ds:
/// int [2k B_ss + k^2 C_s + 2k k_s C - 4k A_s tau - 2k A tau_s - 2k B tau^2 + B k^3] ds.
/// Agrees with bending_energy_rate whenever B = C = 0.
double material_bending_energy_rate(const GeometryProfile& profile, const flow::FlowSpec& spec,
                                    double time = 0.0);

/// |gamma(L) - gamma(0)| of the curve rebuilt from the profile. Nonzero for
/// helical profiles by construction; for closed curves it measures how far the
/// intrinsic state has drifted from describing a closed curve.
double closure_defect(const GeometryProfile& profile);

/// Second-order finite-difference derivative of samples on a possibly
/// nonuniform time grid (one-sided three-point stencils at the ends).
std::vector<double> finite_difference_rate(const std::vector<double>& times,
                                           const std::vector<double>& values);

/// Least-squares slope of log(error) against log(h).
double observed_order(const std::vector<double>& h, const std::vector<double>& error);

struct DiagnosticsReport {
    std::vector<double> times;
    std::vector<double> I1;
    std::vector<double> I2;
    std::vector<double> dI1_analytic;
    std::vector<double> dI2_analytic;   ///< seven-term integrand
    std::vector<double> dI2_material;   ///< stretch-corrected integrand
    std::vector<double> dI1_measured;   ///< finite differences of I1
    std::vector<double> dI2_measured;   ///< finite differences of I2
    std::vector<double> closure_defect;
    std::optional<std::vector<double>> dual_path_error;

    double max_length_drift() const;  ///< max |I1 - I1(0)| / I1(0)
    double max_energy_drift() const;  ///< max |I2 - I2(0)| / max(I2(0), tiny)
};

/// From extrinsic snapshots. I1 and I2 are measured on the raw curves.
DiagnosticsReport report_from_curves(const std::vector<double>& times,
                                     const std::vector<DiscreteCurve>& curves,
                                     const flow::FlowSpec& spec);

/// From intrinsic snapshots (profiles on arclength grids).
DiagnosticsReport report_from_profiles(const std::vector<double>& times,
                                       const std::vector<GeometryProfile>& profiles,
                                       const flow::FlowSpec& spec);

}  // namespace filament::diagnostics
