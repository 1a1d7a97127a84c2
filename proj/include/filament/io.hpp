#pragma once

// CSV and JSON serialization. Numbers are written with 17 significant
// digits so that every double round-trips exactly through text.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "filament/diagnostics.hpp"
#include "filament/geometry.hpp"
#include "filament/hasimoto.hpp"

namespace filament::io {

namespace fs = std::filesystem;
using Json = nlohmann::json;

/// Columns s, x, y, z.
void write_curve_csv(const fs::path& path, const DiscreteCurve& curve);
/// Columns s, k, tau.
void write_profile_csv(const fs::path& path, const GeometryProfile& profile);
/// Columns s, re, im of the physical psi.
void write_wave_csv(const fs::path& path, const hasimoto::WaveFunction& wave);

/// Reads x, y, z (with or without a leading s column). Unless given, L is
/// taken from the s column (N times its spacing) or measured when s is absent.
DiscreteCurve read_curve_csv(const fs::path& path, const Vec3& period_shift = Vec3::Zero(),
                             double length = 0.0);
/// Reads s, k, tau; L = N times the s spacing unless given.
GeometryProfile read_profile_csv(const fs::path& path, double length = 0.0);
/// Reads s, re, im; gauge data from the metadata envelope.
hasimoto::WaveFunction read_wave_csv(const fs::path& path, const Json& metadata);

/// JSON envelopes with N, L and the representation-specific metadata.
Json curve_envelope(const DiscreteCurve& curve);
Json profile_envelope(const GeometryProfile& profile);
/// L, mu (gauge wavenumber) and the gauge base point.
Json wave_envelope(const hasimoto::WaveFunction& wave);

/// Time series columns of the report.
void write_report_csv(const fs::path& path, const diagnostics::DiagnosticsReport& report);
Json report_summary(const diagnostics::DiagnosticsReport& report);

Json read_json(const fs::path& path);
void write_json(const fs::path& path, const Json& value);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace filament::io
