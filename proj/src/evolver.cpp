#include "filament/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filament/errors.hpp"
#include "filament/spectral.hpp"

namespace filament::evolve {

namespace {

bool is_binormal(const flow::FlowSpec& spec) {
    auto zero = [](const flow::ExprPtr& e) {
        return e->op == flow::Op::Literal && e->value == 0.0;
    };
    return zero(spec.folded_B()) && zero(spec.folded_C());
}

}  // namespace

double stability_cap(std::size_t n, double length, const flow::FlowSpec& spec, double c) {
    const double ds = length / static_cast<double>(n);
    const int depth = spec.derivative_depth();
    return c * std::pow(ds, 2 + depth) / (1.0 + depth);
}

std::vector<Vec3> velocity(const DiscreteCurve& curve, const flow::FlowSpec& spec, double time) {
    const auto geo = analyze_curve(curve);
    const auto coeffs = flow::evaluate_flow(spec, geo.profile, time, &geo.speed);
    const std::size_t n = curve.size();
    std::vector<double> comp[3];
    for (auto& c : comp) c.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3 v = coeffs.C[j] * geo.frame.T[j] + coeffs.B[j] * geo.frame.N[j] +
                       coeffs.A[j] * geo.frame.B[j];
        for (int c = 0; c < 3; ++c) comp[c][j] = v[c];
    }
    std::vector<Vec3> out(n);
    for (int c = 0; c < 3; ++c) {
        const auto filtered = spectral::dealias(comp[c]);
        for (std::size_t j = 0; j < n; ++j) out[j][c] = filtered[j];
    }
    return out;
}

Trajectory evolve_curve(const DiscreteCurve& curve, const flow::FlowSpec& spec,
                        const EvolutionConfig& config) {
    if (!(config.dt > 0.0) || !(config.t_final >= 0.0)) {
        throw InvalidInput("dt must be positive and t_final non-negative");
    }
    if (config.record_every == 0) throw InvalidInput("record_every must be positive");
    const double cap = stability_cap(curve.size(), curve.length(), spec);
    if (config.enforce_cap && config.dt > cap) {
        std::ostringstream os;
        os.precision(6);
        os << "dt = " << config.dt << " exceeds the stability cap " << cap << " for N = "
           << curve.size() << ", L = " << curve.length();
        throw InvalidInput(os.str());
    }
    const bool binormal = is_binormal(spec);
    const std::size_t reparam_every = config.reparam_every != 0 ? config.reparam_every
                                      : binormal                ? 0
                                                                : 1;

    Trajectory traj;
    DiscreteCurve current = curve;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(Snapshot{current, profile_from_curve(current)});

    const std::size_t n = curve.size();
    auto stage = [&](const std::vector<Vec3>& base, double h, const std::vector<Vec3>& dir) {
        std::vector<Vec3> pts(n);
        for (std::size_t j = 0; j < n; ++j) pts[j] = base[j] + h * dir[j];
        return DiscreteCurve(std::move(pts), current.length(), current.period_shift());
    };

    double t = 0.0;
    const auto steps = static_cast<std::size_t>(std::ceil(config.t_final / config.dt - 1e-9));
    for (std::size_t i = 0; i < steps; ++i) {
        const double h = std::min(config.dt, config.t_final - t);
        const auto& x = current.points();
        const auto v1 = velocity(current, spec, t);
        double vmax = 0.0;
        for (const auto& v : v1) vmax = std::max(vmax, v.norm());
        if (!std::isfinite(vmax) || vmax * h > 0.5 * current.spacing()) {
            throw BlowUp("node displacement per step exceeds half the grid spacing at t = " +
                         std::to_string(t));
        }
        const auto v2 = velocity(stage(x, 0.5 * h, v1), spec, t + 0.5 * h);
        const auto v3 = velocity(stage(x, 0.5 * h, v2), spec, t + 0.5 * h);
        const auto v4 = velocity(stage(x, h, v3), spec, t + h);
        std::vector<Vec3> next(n);
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = x[j] + h / 6.0 * (v1[j] + 2.0 * v2[j] + 2.0 * v3[j] + v4[j]);
        }
        // The parameter period is kept; reparameterize() replaces it by the measured length.
        current = DiscreteCurve(std::move(next), current.length(), current.period_shift());
        if (reparam_every != 0 && (i + 1) % reparam_every == 0) current = reparameterize(current);
        t = i + 1 == steps ? config.t_final : t + h;
        if ((i + 1) % config.record_every == 0 || i + 1 == steps) {
            traj.times.push_back(t);
            traj.snapshots.push_back(Snapshot{current, profile_from_curve(current)});
        }
    }
    return traj;
}

}  // namespace filament::evolve
