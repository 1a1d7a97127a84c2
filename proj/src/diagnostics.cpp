#include "filament/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filament/errors.hpp"
#include "filament/spectral.hpp"

namespace filament::diagnostics {

namespace {

using RealVec = std::vector<double>;

RealVec d(const RealVec& f, double L, int order = 1) { return spectral::derivative(f, L, order); }

// Coefficients and the spectral derivatives the rate integrands need.
struct RateInputs {
    const RealVec& k;
    const RealVec& tau;
    RealVec k_s, tau_s;
    flow::FlowCoefficients c;
    RealVec A_s, B_ss, C_s;
};

RateInputs rate_inputs(const GeometryProfile& p, const flow::FlowSpec& spec, double time) {
    const double L = p.length();
    RateInputs in{p.curvature(), p.torsion(), d(p.curvature(), L), d(p.torsion(), L),
                  flow::evaluate_flow(spec, p, time), {}, {}, {}};
    in.A_s = d(in.c.A, L);
    in.B_ss = d(in.c.B, L, 2);
    in.C_s = d(in.c.C, L);
    return in;
}

// Arclength-uniform copy of a curve's profile, for the rate formulas.
GeometryProfile arclength_profile(const DiscreteCurve& curve) {
    const auto geo = analyze_curve(curve);
    const auto [lo, hi] = std::minmax_element(geo.speed.begin(), geo.speed.end());
    if (*hi - *lo <= 1e-10 * *hi) {
        // Uniform speed: rescale the grid length to the true length.
        return GeometryProfile(geo.profile.curvature(), geo.profile.torsion(), length(curve),
                               geo.profile.continued_nodes());
    }
    return profile_from_curve(reparameterize(curve));
}

DiagnosticsReport build(const std::vector<double>& times, std::vector<double> I1,
                        std::vector<double> I2, const std::vector<GeometryProfile>& profiles,
                        const flow::FlowSpec& spec) {
    DiagnosticsReport r;
    r.times = times;
    r.I1 = std::move(I1);
    r.I2 = std::move(I2);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        r.dI1_analytic.push_back(length_rate(profiles[i], spec, times[i]));
        r.dI2_analytic.push_back(bending_energy_rate(profiles[i], spec, times[i]));
        r.dI2_material.push_back(material_bending_energy_rate(profiles[i], spec, times[i]));
        r.closure_defect.push_back(closure_defect(profiles[i]));
    }
    r.dI1_measured = finite_difference_rate(times, r.I1);
    r.dI2_measured = finite_difference_rate(times, r.I2);
    return r;
}

}  // namespace

double length(const DiscreteCurve& curve) {
    const auto d1 = curve_derivative(curve, 1);
    RealVec speed(d1.size());
    for (std::size_t j = 0; j < d1.size(); ++j) speed[j] = d1[j].norm();
    return spectral::integrate(speed, curve.length());
}

double length(const GeometryProfile& profile) { return profile.length(); }

double length_rate(const GeometryProfile& profile, const flow::FlowSpec& spec, double time) {
    const auto c = flow::evaluate_flow(spec, profile, time);
    const auto C_s = d(c.C, profile.length());
    const auto& k = profile.curvature();
    RealVec integrand(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) integrand[j] = C_s[j] - c.B[j] * k[j];
    return spectral::integrate(integrand, profile.length());
}

double bending_energy(const GeometryProfile& profile) {
    RealVec k2(profile.curvature());
    for (auto& v : k2) v *= v;
    return spectral::integrate(k2, profile.length());
}

double bending_energy(const DiscreteCurve& curve) {
    const auto geo = analyze_curve(curve);
    RealVec integrand(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) {
        const double k = geo.profile.curvature()[j];
        integrand[j] = k * k * geo.speed[j];
    }
    return spectral::integrate(integrand, curve.length());
}

double bending_energy_rate(const GeometryProfile& profile, const flow::FlowSpec& spec, double time) {
    const auto in = rate_inputs(profile, spec, time);
    const auto& [A, B, C] = in.c;
    RealVec f(in.k.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double k = in.k[j], tau = in.tau[j];
        f[j] = k * in.B_ss[j] + 2.0 * k * k * in.C_s[j] + k * in.k_s[j] * C[j] -
               2.0 * k * in.A_s[j] * tau - k * A[j] * in.tau_s[j] - k * B[j] * tau * tau -
               B[j] * k * k * tau;
    }
    return 2.0 * spectral::integrate(f, profile.length());
}

double material_bending_energy_rate(const GeometryProfile& profile, const flow::FlowSpec& spec,
                                    double time) {
    const auto in = rate_inputs(profile, spec, time);
    const auto& [A, B, C] = in.c;
    RealVec f(in.k.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double k = in.k[j], tau = in.tau[j];
        f[j] = 2.0 * k * in.B_ss[j] + k * k * in.C_s[j] + 2.0 * k * in.k_s[j] * C[j] -
               4.0 * k * in.A_s[j] * tau - 2.0 * k * A[j] * in.tau_s[j] -
               2.0 * k * B[j] * tau * tau + B[j] * k * k * k;
    }
    return spectral::integrate(f, profile.length());
}

double closure_defect(const GeometryProfile& profile) {
    return reconstruct_curve(profile, Vec3::Zero(), OrthonormalFrame{}).closure_defect;
}

std::vector<double> finite_difference_rate(const std::vector<double>& t,
                                           const std::vector<double>& y) {
    if (t.size() != y.size()) throw InvalidInput("times and values differ in length");
    const std::size_t n = t.size();
    RealVec out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[0] = out[1] = (y[1] - y[0]) / (t[1] - t[0]);
        return out;
    }
    // Derivative at x1 of the quadratic through (x0,y0), (x1,y1), (x2,y2).
    auto quad = [](double x0, double x1, double x2, double y0, double y1, double y2, double at) {
        return y0 * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
               y1 * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
               y2 * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
    };
    out[0] = quad(t[0], t[1], t[2], y[0], y[1], y[2], t[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = quad(t[i - 1], t[i], t[i + 1], y[i - 1], y[i], y[i + 1], t[i]);
    }
    out[n - 1] = quad(t[n - 3], t[n - 2], t[n - 1], y[n - 3], y[n - 2], y[n - 1], t[n - 1]);
    return out;
}

double observed_order(const std::vector<double>& h, const std::vector<double>& error) {
    if (h.size() != error.size() || h.size() < 2) {
        throw InvalidInput("observed_order needs at least two (h, error) pairs");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double DiagnosticsReport::max_length_drift() const {
    double m = 0.0;
    for (double v : I1) m = std::max(m, std::abs(v - I1.front()) / I1.front());
    return m;
}

double DiagnosticsReport::max_energy_drift() const {
    const double scale = std::max(I2.front(), std::numeric_limits<double>::min());
    double m = 0.0;
    for (double v : I2) m = std::max(m, std::abs(v - I2.front()) / scale);
    return m;
}

DiagnosticsReport report_from_curves(const std::vector<double>& times,
                                     const std::vector<DiscreteCurve>& curves,
                                     const flow::FlowSpec& spec) {
    if (times.size() != curves.size()) throw InvalidInput("times and snapshots differ in length");
    RealVec I1, I2;
    std::vector<GeometryProfile> profiles;
    for (const auto& c : curves) {
        I1.push_back(length(c));
        I2.push_back(bending_energy(c));
        profiles.push_back(arclength_profile(c));
    }
    return build(times, std::move(I1), std::move(I2), profiles, spec);
}

DiagnosticsReport report_from_profiles(const std::vector<double>& times,
                                       const std::vector<GeometryProfile>& profiles,
                                       const flow::FlowSpec& spec) {
    if (times.size() != profiles.size()) throw InvalidInput("times and snapshots differ in length");
    RealVec I1, I2;
    for (const auto& p : profiles) {
        I1.push_back(length(p));
        I2.push_back(bending_energy(p));
    }
    return build(times, std::move(I1), std::move(I2), profiles, spec);
}

}  // namespace filament::diagnostics
