#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "filament/config.hpp"

namespace filament::app {

enum class Command { Evolve, Solve, Transform, Classify, Diagnose, Compare };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

struct RunOptions {
    std::optional<std::string> kind;       ///< solve/compare: overrides solver.kind
    std::filesystem::path manifest;        ///< diagnose: trajectory manifest to read
    std::filesystem::path wave;            ///< transform: invert this wave CSV instead
};

struct RunResult {
    int exit_code = 0;
    nlohmann::json summary;  ///< printed by the CLI; also stored in the manifest
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one subcommand and writes its artifacts plus manifest.json under
/// config.output_dir. Library errors propagate; see exit_code_for.
RunResult run(const RunConfig& config, Command command, const RunOptions& options = {});

/// 3 for BlowUp, DegenerateFrame, SelfIntersectionSuspected and
/// DivisionNearZero; 2 for everything else.
int exit_code_for(const std::exception& e);
nlohmann::json error_json(const std::exception& e, int exit_code);

/// Version string recorded in manifests.
std::string version();

}  // namespace filament::app
