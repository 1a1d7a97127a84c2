"""Space-curve flows, their wave functions and the diagnostics that tie them together."""

from ._core import (
    AperiodicFlow,
    BlowUp,
    Curve,
    DegenerateFrame,
    DivisionNearZero,
    Error,
    Flow,
    FlowSyntaxError,
    InvalidInput,
    NonGeometricFlow,
    Profile,
    SelfIntersectionSuspected,
    UnboundConstant,
    Wave,
    bending_energy,
    bending_energy_rate,
    circle,
    evolve_curve,
    evolve_wave,
    forward_transform,
    general_rhs,
    helix,
    inverse_transform,
    length,
    length_rate,
    material_bending_energy_rate,
    perturbed_circle,
    profile,
    reconstruct,
    reparameterize,
    rigid_alignment_error,
    run,
    stability_cap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
