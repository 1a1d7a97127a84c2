#pragma once

// Run configuration for the command line tool. TOML is the primary format;
// JSON files with the same structure are accepted.
//
//   [grid]        N (power of two >= 8), L (soliton and csv presets only)
//   [initial]     preset = circle | helix | perturbed_circle | soliton | csv
//                 radius, pitch, amplitude, mode, a, path, period_shift
//   [flow]        A, B, C (expressions), [flow.constants] name = value
//   [solver]      kind = general | nls | hirota | powerseries, W, coefficients
//   [evolution]   dt, t_final, record_every, reparam_every, enforce_cap
//   [output]      dir
//   [run]         seed
//   [compare]     resolutions, intrinsic_dt_factor, samples

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "filament/evolver.hpp"
#include "filament/flow.hpp"
#include "filament/geometry.hpp"
#include "filament/hasimoto.hpp"

namespace filament::app {

struct InitialCondition {
    std::string preset = "circle";
    double radius = 1.0;     ///< circle, helix and perturbed_circle
    double pitch = 0.5;      ///< helix: z advance per radian
    double amplitude = 0.05; ///< perturbed_circle
    int mode = 3;            ///< perturbed_circle
    double a = 1.0;          ///< soliton 2a sech(a (s - L/2))
    std::filesystem::path path;  ///< csv, resolved against the config file
    Vec3 period_shift = Vec3::Zero();
};

struct SolverConfig {
    std::string kind = "nls";
    double W = 0.0;
    std::vector<double> coefficients{1.0};  ///< a_1, a_2, ...
};

struct CompareConfig {
    std::vector<std::size_t> resolutions{128, 256, 512};
    /// Intrinsic step as a multiple of the grid spacing, refined with the grid.
    double intrinsic_dt_factor = 1.0;
    /// Number of common output times.
    std::size_t samples = 10;
};

struct RunConfig {
    std::size_t N = 256;
    double L = 0.0;  ///< 0 when the preset determines the length
    InitialCondition initial;
    std::string A = "k", B = "0", C = "0";
    flow::Constants constants;
    SolverConfig solver;
    evolve::EvolutionConfig evolution;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    CompareConfig compare;
    nlohmann::json source;  ///< normalized configuration, recorded in manifests

    flow::FlowSpec flow() const;
    hasimoto::SolverKind solver_kind() const;
};

/// Reads .toml or .json. Throws InvalidInput with a pointed message on any
/// unknown key, wrong type, or out-of-range value.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir = std::filesystem::path("."));
nlohmann::json toml_to_json(const std::string& text);

/// FNV-1a 64 of the normalized configuration, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Initial states for the configured preset at grid size n.
DiscreteCurve initial_curve(const RunConfig& config, std::size_t n);
GeometryProfile initial_profile(const RunConfig& config, std::size_t n);

}  // namespace filament::app
