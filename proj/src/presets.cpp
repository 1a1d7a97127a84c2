#include "filament/presets.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "filament/errors.hpp"

namespace filament::presets {

DiscreteCurve circle(std::size_t n, double radius) {
    if (!(radius > 0.0)) throw InvalidInput("circle radius must be positive");
    std::vector<Vec3> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        pts[j] = Vec3(radius * std::cos(u), radius * std::sin(u), 0.0);
    }
    return DiscreteCurve(std::move(pts), 2.0 * std::numbers::pi * radius);
}

DiscreteCurve helix(std::size_t n, double radius, double pitch) {
    if (!(radius > 0.0)) throw InvalidInput("helix radius must be positive");
    const double c = std::hypot(radius, pitch);
    std::vector<Vec3> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        pts[j] = Vec3(radius * std::cos(u), radius * std::sin(u), pitch * u);
    }
    return DiscreteCurve(std::move(pts), 2.0 * std::numbers::pi * c,
                         Vec3(0.0, 0.0, 2.0 * std::numbers::pi * pitch));
}

DiscreteCurve perturbed_circle(std::size_t n, double amplitude, int mode, double radius) {
    if (!(radius > 0.0)) throw InvalidInput("perturbed circle radius must be positive");
    if (mode < 0) throw InvalidInput("perturbation mode must be non-negative");
    if (!(std::abs(amplitude) < 0.5 * radius)) {
        throw InvalidInput("perturbation amplitude must stay below half the radius");
    }
    std::vector<Vec3> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        const double r = radius + amplitude * std::cos(mode * u);
        pts[j] = Vec3(r * std::cos(u), r * std::sin(u), amplitude * std::sin(mode * u));
    }
    // Parameter length is a placeholder; reparameterize measures the true length.
    return reparameterize(DiscreteCurve(std::move(pts), 2.0 * std::numbers::pi * radius));
}

}  // namespace filament::presets
