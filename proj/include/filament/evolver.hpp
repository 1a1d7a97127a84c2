#pragma once

#include <cstddef>
#include <vector>

#include "filament/flow.hpp"
#include "filament/geometry.hpp"

namespace filament::evolve {

struct EvolutionConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    /// Steps between reparameterizations; 0 selects 1 for non-binormal flows
    /// and never for binormal ones.
    std::size_t reparam_every = 0;
    std::size_t record_every = 1;
    /// Reject dt above stability_cap.
    bool enforce_cap = true;
};

struct Snapshot {
    DiscreteCurve curve;
    GeometryProfile profile;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Snapshot> snapshots;
};

/// Heuristic explicit-RK4 step limit c ds^(2+d) / (1 + d), where d is the
/// deepest d_s nesting in the flow (each d_s raises the velocity's derivative
/// order by one).
double stability_cap(std::size_t n, double length, const flow::FlowSpec& spec, double c = 0.25);

/// Velocity C T + B N + A B at every node, 2/3-dealiased.
std::vector<Vec3> velocity(const DiscreteCurve& curve, const flow::FlowSpec& spec, double time);

/// Advance the points under gamma_t = C T + B N + A B with classical RK4,
/// recomputing frames and profile at every stage.
/// Throws BlowUp when max |v| dt exceeds half the grid spacing.
Trajectory evolve_curve(const DiscreteCurve& curve, const flow::FlowSpec& spec,
                        const EvolutionConfig& config);

}  // namespace filament::evolve
