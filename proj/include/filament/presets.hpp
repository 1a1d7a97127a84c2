#pragma once

#include <cstddef>

#include "filament/geometry.hpp"

namespace filament::presets {

/// Circle of the given radius in the xy-plane, counter-clockwise.
DiscreteCurve circle(std::size_t n, double radius = 1.0);

/// One turn of the helix (a cos u, a sin u, b u), arclength parameterized.
/// Curvature a/(a^2+b^2), torsion b/(a^2+b^2).
DiscreteCurve helix(std::size_t n, double radius, double pitch);

/// Circle of the given radius carrying a non-planar wave of the given mode:
/// ((r + eps cos mu) cos u, (r + eps cos mu) sin u, eps sin mu), resampled to
/// uniform arclength.
DiscreteCurve perturbed_circle(std::size_t n, double amplitude, int mode, double radius = 1.0);

}  // namespace filament::presets
