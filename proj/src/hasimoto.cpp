#include "filament/hasimoto.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

#include "filament/errors.hpp"
#include "filament/spectral.hpp"
#include "hasimoto_internal.hpp"

namespace filament::hasimoto {

namespace {

constexpr double kDivisionGuard = 1e-12;

std::vector<Complex> to_physical(const std::vector<Complex>& gauged, double length, double mu) {
    if (mu == 0.0) return gauged;
    const auto s = spectral::nodes(gauged.size(), length);
    std::vector<Complex> out(gauged.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = gauged[j] * std::polar(1.0, mu * s[j]);
    return out;
}

bool is_zero(const flow::ExprPtr& folded) {
    return folded->op == flow::Op::Literal && folded->value == 0.0;
}

std::vector<double> divide_by_curvature(const std::vector<double>& num, const std::vector<double>& k) {
    std::vector<double> out(num.size());
    for (std::size_t j = 0; j < num.size(); ++j) {
        if (std::abs(k[j]) < kDivisionGuard) throw DivisionNearZero(j);
        out[j] = num[j] / k[j];
    }
    return out;
}

}  // namespace

WaveFunction::WaveFunction(const std::vector<Complex>& psi, double length, double mu,
                           double base_point)
    : length_(length), mu_(mu), base_point_(base_point) {
    if (psi.size() < 8 || !spectral::is_power_of_two(psi.size())) {
        throw InvalidInput("wave function size must be a power of two >= 8");
    }
    if (!(length > 0.0) || !std::isfinite(mu)) throw InvalidInput("invalid wave function metadata");
    gauged_ = to_physical(psi, length, -mu);
}

WaveFunction WaveFunction::from_gauged(std::vector<Complex> gauged, double length, double mu,
                                       double base_point) {
    if (gauged.size() < 8 || !spectral::is_power_of_two(gauged.size())) {
        throw InvalidInput("wave function size must be a power of two >= 8");
    }
    if (!(length > 0.0) || !std::isfinite(mu)) throw InvalidInput("invalid wave function metadata");
    WaveFunction w;
    w.gauged_ = std::move(gauged);
    w.length_ = length;
    w.mu_ = mu;
    w.base_point_ = base_point;
    return w;
}

std::vector<Complex> WaveFunction::psi() const { return to_physical(gauged_, length_, mu_); }

WaveFunction forward_transform(const GeometryProfile& profile, std::size_t base_node) {
    const std::size_t n = profile.size();
    if (base_node >= n) throw InvalidInput("base node outside the grid");
    const double len = profile.length();
    const auto& k = profile.curvature();
    const double mu = spectral::mean(profile.torsion());
    const auto theta = spectral::antiderivative(profile.torsion(), len);
    const auto s = spectral::nodes(n, len);
    // Gauged phase theta(s) - theta(s0) - mu s is periodic.
    std::vector<Complex> gauged(n);
    for (std::size_t j = 0; j < n; ++j) {
        gauged[j] = std::polar(k[j], theta[j] - theta[base_node] - mu * s[j]);
    }
    return WaveFunction::from_gauged(std::move(gauged), len, mu, s[base_node]);
}

GeometryProfile inverse_transform(const WaveFunction& wave) {
    const std::size_t n = wave.size();
    const auto& g = wave.gauged();
    const auto dg = spectral::derivative(g, wave.length(), 1);
    std::vector<double> k(n), tau(n);
    std::vector<bool> good(n);
    for (std::size_t j = 0; j < n; ++j) {
        k[j] = std::abs(g[j]);
        good[j] = k[j] >= kCurvatureFloor;
        if (good[j]) tau[j] = (dg[j] * std::conj(g[j])).imag() / (k[j] * k[j]) + wave.mu();
    }
    std::vector<std::size_t> continued;
    for (std::size_t j = 0; j < n; ++j) {
        if (good[j]) continue;
        continued.push_back(j);
        tau[j] = wave.mu();
        for (std::size_t d = 1; d <= n / 2; ++d) {
            const std::size_t fwd = (j + d) % n, back = (j + n - d) % n;
            if (good[back]) {
                tau[j] = tau[back];
                break;
            }
            if (good[fwd]) {
                tau[j] = tau[fwd];
                break;
            }
        }
    }
    return GeometryProfile(std::move(k), std::move(tau), wave.length(), std::move(continued));
}

PotentialTerm potential(const GeometryProfile& profile, const flow::FlowSpec& spec,
                        const flow::FlowCoefficients& coeffs) {
    const std::size_t n = profile.size();
    const double len = profile.length();
    const auto& k = profile.curvature();
    const auto& tau = profile.torsion();

    PotentialTerm out;
    out.Lambda.assign(n, 0.0);
    out.nonlocal.assign(n, 0.0);

    const auto split = flow::split_curvature_terms(spec.folded_A());
    if (!is_zero(split.curvature_only)) {
        if (auto series = flow::detect_power_series(split.curvature_only, spec.constants)) {
            for (std::size_t j = 0; j < n; ++j) {
                for (const auto& [p, a] : *series) {
                    out.Lambda[j] += a / (p + 1) * std::pow(k[j], p + 1);
                }
            }
        } else {
            using Rule = boost::math::quadrature::gauss<double, 32>;
            // Each abscissa pair +/-x maps to kappa = k (1 -/+ x) / 2.
            const auto& x = Rule::abscissa();
            const auto& w = Rule::weights();
            auto accumulate = [&](double xi, double wi) {
                std::vector<double> kappa(n);
                for (std::size_t j = 0; j < n; ++j) kappa[j] = 0.5 * k[j] * (1.0 + xi);
                const flow::EvalContext ctx{kappa, tau, len, 0.0, spec.constants};
                const auto alpha = flow::evaluate(split.curvature_only, ctx);
                for (std::size_t j = 0; j < n; ++j) out.Lambda[j] += 0.5 * k[j] * wi * alpha[j];
            };
            for (std::size_t i = 0; i < x.size(); ++i) {
                accumulate(x[i], w[i]);
                if (x[i] != 0.0) accumulate(-x[i], w[i]);
            }
        }
    }
    if (!is_zero(split.rest)) {
        const flow::EvalContext ctx{k, tau, len, 0.0, spec.constants};
        const auto rest = flow::evaluate(split.rest, ctx);
        const auto k_s = spectral::derivative(k, len, 1);
        std::vector<double> integrand(n);
        for (std::size_t j = 0; j < n; ++j) integrand[j] = rest[j] * k_s[j];
        const auto prim = spectral::antiderivative(integrand, len);
        for (std::size_t j = 0; j < n; ++j) out.Lambda[j] += prim[j];
    }
    if (!is_zero(spec.folded_B())) {
        std::vector<double> integrand(n);
        for (std::size_t j = 0; j < n; ++j) integrand[j] = coeffs.B[j] * tau[j] * k[j];
        out.nonlocal = spectral::antiderivative(integrand, len);
    }
    out.combined.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.combined[j] = Complex(coeffs.A[j] * k[j] - out.Lambda[j] + out.nonlocal[j],
                                  -coeffs.B[j] * k[j]);
    }
    return out;
}

namespace detail {

GeneralParts general_parts(const WaveFunction& wave, const flow::FlowSpec& spec, double time) {
    if (spec.references(flow::Var::Arclength) || spec.references(flow::Var::Time)) {
        throw NonGeometricFlow(
            "the intrinsic solvers accept coefficients of k, tau and their arclength derivatives only");
    }
    const auto profile = inverse_transform(wave);
    const auto coeffs = flow::evaluate_flow(spec, profile, time);
    const auto& k = profile.curvature();
    const std::size_t n = wave.size();

    std::vector<double> a_over_k;
    if (auto series = flow::detect_power_series(spec.A, spec.constants)) {
        a_over_k.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& [p, a] : *series) a_over_k[j] += a * std::pow(k[j], p - 1);
        }
    } else {
        a_over_k = divide_by_curvature(coeffs.A, k);
    }
    std::vector<double> b_over_k(n, 0.0);
    if (!is_zero(spec.folded_B())) b_over_k = divide_by_curvature(coeffs.B, k);

    GeneralParts parts;
    parts.dispersion.resize(n);
    for (std::size_t j = 0; j < n; ++j) parts.dispersion[j] = Complex(a_over_k[j], -b_over_k[j]);
    parts.tangential = coeffs.C;
    parts.potential = potential(profile, spec, coeffs).combined;
    return parts;
}

std::vector<Complex> general_rhs_gauged(const WaveFunction& wave, const GeneralParts& parts) {
    const std::size_t n = wave.size();
    const auto& g = wave.gauged();
    const double len = wave.length(), mu = wave.mu();
    std::vector<Complex> inner(n);
    for (std::size_t j = 0; j < n; ++j) inner[j] = parts.dispersion[j] * g[j];
    const auto d2 = spectral::derivative(inner, len, 2, mu);
    const auto d1 = spectral::derivative(g, len, 1, mu);
    const Complex i{0.0, 1.0};
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = i * (d2[j] - i * parts.tangential[j] * d1[j] + parts.potential[j] * g[j]);
    }
    return out;
}

std::vector<Complex> cubic_nls_rhs_gauged(const WaveFunction& wave) {
    const auto& g = wave.gauged();
    const auto d2 = spectral::derivative(g, wave.length(), 2, wave.mu());
    std::vector<Complex> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        out[j] = Complex(0.0, 1.0) * (d2[j] + 0.5 * std::norm(g[j]) * g[j]);
    }
    return out;
}

std::vector<Complex> hirota_rhs_gauged(const WaveFunction& wave, double W) {
    const auto& g = wave.gauged();
    const double len = wave.length(), mu = wave.mu();
    const auto d1 = spectral::derivative(g, len, 1, mu);
    const auto d2 = spectral::derivative(g, len, 2, mu);
    const auto d3 = spectral::derivative(g, len, 3, mu);
    std::vector<Complex> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double m2 = std::norm(g[j]);
        out[j] = Complex(0.0, 1.0) * (d2[j] + 0.5 * m2 * g[j]) + W * (d3[j] + 1.5 * m2 * d1[j]);
    }
    return out;
}

std::vector<double> series_dispersion(const std::vector<Complex>& g,
                                      const std::vector<double>& coefficients) {
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double k = std::abs(g[j]);
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            out[j] += coefficients[i] * std::pow(k, static_cast<double>(i));
        }
    }
    return out;
}

std::vector<double> series_nonlinearity(const std::vector<Complex>& g,
                                        const std::vector<double>& coefficients) {
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double k = std::abs(g[j]);
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            const double n = static_cast<double>(i + 1);
            out[j] += coefficients[i] * n / (n + 1.0) * std::pow(k, n + 1.0);
        }
    }
    return out;
}

std::vector<Complex> power_series_rhs_gauged(const WaveFunction& wave,
                                             const std::vector<double>& coefficients) {
    const auto& g = wave.gauged();
    const auto disp = series_dispersion(g, coefficients);
    const auto f = series_nonlinearity(g, coefficients);
    std::vector<Complex> inner(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) inner[j] = disp[j] * g[j];
    const auto d2 = spectral::derivative(inner, wave.length(), 2, wave.mu());
    std::vector<Complex> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        out[j] = Complex(0.0, 1.0) * (d2[j] + f[j] * g[j]);
    }
    return out;
}

}  // namespace detail

std::vector<Complex> general_rhs(const WaveFunction& wave, const flow::FlowSpec& spec, double time) {
    const auto parts = detail::general_parts(wave, spec, time);
    return to_physical(detail::general_rhs_gauged(wave, parts), wave.length(), wave.mu());
}

std::vector<Complex> cubic_nls_rhs(const WaveFunction& wave) {
    return to_physical(detail::cubic_nls_rhs_gauged(wave), wave.length(), wave.mu());
}

std::vector<Complex> hirota_rhs(const WaveFunction& wave, double W) {
    return to_physical(detail::hirota_rhs_gauged(wave, W), wave.length(), wave.mu());
}

std::vector<Complex> power_series_rhs(const WaveFunction& wave,
                                      const std::vector<double>& coefficients) {
    return to_physical(detail::power_series_rhs_gauged(wave, coefficients), wave.length(),
                       wave.mu());
}

}  // namespace filament::hasimoto
