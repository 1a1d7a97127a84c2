#include "filament/runner.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "filament/diagnostics.hpp"
#include "filament/errors.hpp"
#include "filament/evolver.hpp"
#include "filament/io.hpp"
#include "filament/spectral.hpp"

namespace filament::app {

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kExtrinsicScheme =
    "classical RK4 on node positions, Frenet frame and coefficients recomputed at every stage, "
    "2/3-dealiased velocity, arclength reparameterization for non-binormal flows, "
    "step cap 0.25 ds^(2+d)/(1+d)";

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%06zu", i);
    return stem + buf + ext;
}

Json libraries() {
    return Json{{"fftw", spectral::backend_version()},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", __VERSION__}};
}

Json manifest(const RunConfig& config, Command command, const std::string& kind, Json scheme) {
    return Json{{"format", "filament-manifest/1"},
                {"kind", kind},
                {"subcommand", command_name(command)},
                {"version", kVersion},
                {"config", config.source},
                {"config_hash", config_hash(config)},
                {"seed", config.seed},
                {"scheme", std::move(scheme)},
                {"libraries", libraries()}};
}

hasimoto::SolverKind solver_for(const RunConfig& config, const RunOptions& options) {
    if (!options.kind) return config.solver_kind();
    RunConfig copy = config;
    copy.solver.kind = *options.kind;
    auto kind = copy.solver_kind();
    hasimoto::validate(kind);
    return kind;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double norm2(const hasimoto::WaveFunction& w) {
    std::vector<double> m(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) m[j] = std::norm(w.gauged()[j]);
    return spectral::integrate(m, w.length());
}

// ---- subcommands ----

RunResult run_evolve(const RunConfig& config) {
    const auto spec = config.flow();
    const auto curve = initial_curve(config, config.N);
    const auto traj = evolve::evolve_curve(curve, spec, config.evolution);

    const fs::path dir = config.output_dir;
    Json snapshots = Json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& snap = traj.snapshots[i];
        const auto cname = indexed("snapshots/curve", i, ".csv");
        const auto pname = indexed("snapshots/profile", i, ".csv");
        io::write_curve_csv(dir / cname, snap.curve);
        io::write_profile_csv(dir / pname, snap.profile);
        auto entry = io::curve_envelope(snap.curve);
        entry.erase("kind");
        entry.erase("columns");
        entry["t"] = traj.times[i];
        entry["curve"] = cname;
        entry["profile"] = pname;
        snapshots.push_back(std::move(entry));
    }
    const double I1_0 = diagnostics::length(traj.snapshots.front().curve);
    const double I1_1 = diagnostics::length(traj.snapshots.back().curve);
    Json summary{{"snapshots", traj.times.size()},
                 {"t_final", traj.times.back()},
                 {"stability_cap", evolve::stability_cap(curve.size(), curve.length(), spec)},
                 {"initial_length", I1_0},
                 {"final_length", I1_1},
                 {"relative_length_change", (I1_1 - I1_0) / I1_0},
                 {"final_bending_energy", diagnostics::bending_energy(traj.snapshots.back().curve)}};
    auto m = manifest(config, Command::Evolve, "extrinsic", Json{{"extrinsic", kExtrinsicScheme}});
    m["snapshots"] = std::move(snapshots);
    m["summary"] = summary;
    io::write_json(dir / "manifest.json", m);
    return {kExitOk, summary};
}

RunResult run_solve(const RunConfig& config, const RunOptions& options) {
    const auto kind = solver_for(config, options);
    const auto wave0 = hasimoto::forward_transform(initial_profile(config, config.N));
    const auto traj = hasimoto::evolve_wave(wave0, kind, config.evolution.dt,
                                            config.evolution.t_final, config.evolution.record_every);
    const fs::path dir = config.output_dir;
    Json snapshots = Json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& w = traj.waves[i];
        const auto wname = indexed("snapshots/wave", i, ".csv");
        const auto mname = indexed("snapshots/wave", i, ".json");
        const auto pname = indexed("snapshots/profile", i, ".csv");
        io::write_wave_csv(dir / wname, w);
        io::write_json(dir / mname, io::wave_envelope(w));
        io::write_profile_csv(dir / pname, hasimoto::inverse_transform(w));
        snapshots.push_back(Json{{"t", traj.times[i]},
                                 {"wave", wname},
                                 {"wave_metadata", mname},
                                 {"profile", pname},
                                 {"N", w.size()},
                                 {"L", w.length()},
                                 {"mu", w.mu()},
                                 {"base_point", w.base_point()}});
    }
    const double n0 = norm2(traj.waves.front()), n1 = norm2(traj.waves.back());
    Json summary{{"snapshots", traj.times.size()},
                 {"t_final", traj.times.back()},
                 {"mu", wave0.mu()},
                 {"initial_norm", n0},
                 {"final_norm", n1},
                 {"relative_norm_change", (n1 - n0) / n0}};
    auto m = manifest(config, Command::Solve, "intrinsic",
                      Json{{"intrinsic", hasimoto::describe_scheme(kind)}});
    m["snapshots"] = std::move(snapshots);
    m["summary"] = summary;
    io::write_json(dir / "manifest.json", m);
    return {kExitOk, summary};
}

RunResult run_transform(const RunConfig& config, const RunOptions& options) {
    const fs::path dir = config.output_dir;
    Json summary;
    Json artifacts = Json::object();
    if (!options.wave.empty()) {
        auto meta_path = options.wave;
        meta_path.replace_extension(".json");
        const Json meta = fs::exists(meta_path) ? io::read_json(meta_path) : Json::object();
        const auto wave = io::read_wave_csv(options.wave, meta);
        const auto profile = hasimoto::inverse_transform(wave);
        const auto rec = reconstruct_curve(profile, Vec3::Zero(), OrthonormalFrame{});
        io::write_profile_csv(dir / "profile.csv", profile);
        io::write_curve_csv(dir / "curve.csv", rec.curve);
        artifacts = Json{{"profile", "profile.csv"}, {"curve", "curve.csv"}};
        summary = Json{{"direction", "inverse"},
                       {"N", profile.size()},
                       {"L", profile.length()},
                       {"closure_defect", rec.closure_defect},
                       {"continued_nodes", profile.continued_nodes().size()}};
    } else {
        const auto profile = initial_profile(config, config.N);
        const auto wave = hasimoto::forward_transform(profile);
        io::write_profile_csv(dir / "profile.csv", profile);
        io::write_wave_csv(dir / "wave.csv", wave);
        io::write_json(dir / "wave.json", io::wave_envelope(wave));
        artifacts = Json{{"profile", "profile.csv"}, {"wave", "wave.csv"}, {"wave_metadata", "wave.json"}};
        summary = Json{{"direction", "forward"},
                       {"N", profile.size()},
                       {"L", profile.length()},
                       {"mu", wave.mu()},
                       {"bending_energy", diagnostics::bending_energy(profile)},
                       {"wave_norm", norm2(wave)}};
    }
    auto m = manifest(config, Command::Transform, "transform", Json::object());
    m["artifacts"] = artifacts;
    m["summary"] = summary;
    io::write_json(dir / "manifest.json", m);
    return {kExitOk, summary};
}

RunResult run_classify(const RunConfig& config) {
    const auto spec = config.flow();
    const double L = config.L > 0.0 ? config.L : 2.0 * 3.14159265358979323846;
    const auto probes = flow::default_probes(config.N, L, config.seed);
    const auto cls = flow::classify_flow(spec, probes);
    Json series = nullptr;
    if (cls.power_series) {
        series = Json::array();
        for (const auto& [n, a] : *cls.power_series) series.push_back(Json{{"n", n}, {"a", a}});
    }
    Json summary{{"A", flow::to_string(spec.folded_A())},
                 {"B", flow::to_string(spec.folded_B())},
                 {"C", flow::to_string(spec.folded_C())},
                 {"is_binormal", cls.is_binormal},
                 {"length_condition_residual", cls.length_condition_residual},
                 {"power_series", series},
                 {"probes", probes.size()}};
    io::write_json(fs::path(config.output_dir) / "classification.json", summary);
    return {kExitOk, summary};
}

RunResult run_diagnose(const RunConfig& config, const RunOptions& options) {
    const fs::path manifest_path =
        options.manifest.empty() ? fs::path(config.output_dir) / "manifest.json" : options.manifest;
    const Json m = io::read_json(manifest_path);
    if (!m.contains("kind") || !m.contains("config")) {
        throw InvalidInput(manifest_path.string() + " is not a trajectory manifest");
    }
    const fs::path base = manifest_path.has_parent_path() ? manifest_path.parent_path() : ".";
    const auto recorded = config_from_json(m.at("config"));
    const auto spec = recorded.flow();
    const std::string kind = m.at("kind");
    const fs::path dir = config.output_dir;

    Json summary{{"manifest", manifest_path.string()}, {"kind", kind}};
    if (kind == "compare") {
        summary["convergence"] = m.at("convergence");
        io::write_json(dir / "diagnostics.json", summary);
        return {kExitOk, summary};
    }
    if (kind != "extrinsic" && kind != "intrinsic") {
        throw InvalidInput("diagnose needs an evolve, solve or compare manifest (got kind '" + kind + "')");
    }
    std::vector<double> times;
    diagnostics::DiagnosticsReport report;
    if (kind == "extrinsic") {
        std::vector<DiscreteCurve> curves;
        for (const auto& s : m.at("snapshots")) {
            times.push_back(s.at("t"));
            const auto d = s.at("period_shift");
            curves.push_back(io::read_curve_csv(base / s.at("curve").get<std::string>(),
                                                Vec3(d[0], d[1], d[2]), s.at("L").get<double>()));
        }
        report = diagnostics::report_from_curves(times, curves, spec);
    } else {
        std::vector<GeometryProfile> profiles;
        for (const auto& s : m.at("snapshots")) {
            times.push_back(s.at("t"));
            profiles.push_back(io::read_profile_csv(base / s.at("profile").get<std::string>(),
                                                    s.at("L").get<double>()));
        }
        report = diagnostics::report_from_profiles(times, profiles, spec);
    }
    io::write_report_csv(dir / "diagnostics.csv", report);
    summary.update(io::report_summary(report));
    io::write_json(dir / "diagnostics.json", summary);
    return {kExitOk, summary};
}

RunResult run_compare(const RunConfig& config, const RunOptions& options) {
    const auto spec = config.flow();
    const auto kind = solver_for(config, options);
    const double T = config.evolution.t_final;
    if (!(T > 0.0)) throw InvalidInput("config: compare needs evolution.t_final > 0");
    const std::size_t S = config.compare.samples;
    const fs::path dir = config.output_dir;

    std::ofstream csv;
    fs::create_directories(dir);
    csv.open(dir / "compare.csv");
    csv << "N,ds,t,err_k,err_tau,err\n";

    Json runs = Json::array();
    std::vector<double> hs, errors;
    for (std::size_t n : config.compare.resolutions) {
        const auto curve = initial_curve(config, n);
        const auto profile = profile_from_curve(curve);
        const double ds = curve.length() / static_cast<double>(n);

        const double cap = evolve::stability_cap(n, curve.length(), spec);
        const auto m_ext = static_cast<std::size_t>(
            std::ceil(T / (S * std::min(config.evolution.dt, cap)) - 1e-9));
        evolve::EvolutionConfig ec = config.evolution;
        ec.dt = T / static_cast<double>(S * m_ext);
        ec.t_final = T;
        ec.record_every = m_ext;
        const auto ext = evolve::evolve_curve(curve, spec, ec);

        const auto m_int = static_cast<std::size_t>(
            std::ceil(T / (S * config.compare.intrinsic_dt_factor * ds) - 1e-9));
        const double dt_int = T / static_cast<double>(S * m_int);
        const auto intr = hasimoto::evolve_wave(hasimoto::forward_transform(profile), kind, dt_int, T, m_int);

        Json series = Json::array();
        double final_err = 0.0;
        for (std::size_t i = 0; i < ext.times.size(); ++i) {
            const auto& pe = ext.snapshots[i].profile;
            const auto pi = hasimoto::inverse_transform(intr.waves[i]);
            const double ek = max_abs_diff(pe.curvature(), pi.curvature());
            const double et = max_abs_diff(pe.torsion(), pi.torsion());
            final_err = std::max(ek, et);
            csv << n << ',' << io::format_double(ds) << ',' << io::format_double(ext.times[i]) << ','
                << io::format_double(ek) << ',' << io::format_double(et) << ','
                << io::format_double(final_err) << '\n';
            series.push_back(Json{{"t", ext.times[i]}, {"err_k", ek}, {"err_tau", et}});
        }
        hs.push_back(ds);
        errors.push_back(final_err);
        runs.push_back(Json{{"N", n},
                            {"ds", ds},
                            {"dt_extrinsic", ec.dt},
                            {"dt_intrinsic", dt_int},
                            {"final_error", final_err},
                            {"series", series}});
    }
    Json pairwise = Json::array();
    for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
        pairwise.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
    }
    Json convergence{{"observed_order", diagnostics::observed_order(hs, errors)},
                     {"pairwise_orders", pairwise},
                     {"ds", hs},
                     {"final_errors", errors}};
    Json summary{{"runs", runs.size()}, {"convergence", convergence}};

    auto m = manifest(config, Command::Compare, "compare",
                      Json{{"extrinsic", kExtrinsicScheme},
                           {"intrinsic", hasimoto::describe_scheme(kind)},
                           {"intrinsic_dt", "intrinsic_dt_factor * ds, rounded to hit the sample times"}});
    m["runs"] = runs;
    m["convergence"] = convergence;
    m["artifacts"] = Json{{"errors", "compare.csv"}};
    m["summary"] = summary;
    io::write_json(dir / "manifest.json", m);
    return {kExitOk, summary};
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    if (name == "evolve") return Command::Evolve;
    if (name == "solve") return Command::Solve;
    if (name == "transform") return Command::Transform;
    if (name == "classify") return Command::Classify;
    if (name == "diagnose") return Command::Diagnose;
    if (name == "compare") return Command::Compare;
    return std::nullopt;
}

std::string command_name(Command c) {
    switch (c) {
        case Command::Evolve: return "evolve";
        case Command::Solve: return "solve";
        case Command::Transform: return "transform";
        case Command::Classify: return "classify";
        case Command::Diagnose: return "diagnose";
        case Command::Compare: return "compare";
    }
    return "?";
}

RunResult run(const RunConfig& config, Command command, const RunOptions& options) {
    fs::create_directories(config.output_dir);
    switch (command) {
        case Command::Evolve: return run_evolve(config);
        case Command::Solve: return run_solve(config, options);
        case Command::Transform: return run_transform(config, options);
        case Command::Classify: return run_classify(config);
        case Command::Diagnose: return run_diagnose(config, options);
        case Command::Compare: return run_compare(config, options);
    }
    return {kExitConfig, {}};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BlowUp*>(&e) || dynamic_cast<const DegenerateFrame*>(&e) ||
        dynamic_cast<const SelfIntersectionSuspected*>(&e) ||
        dynamic_cast<const DivisionNearZero*>(&e)) {
        return kExitNumerical;
    }
    return kExitConfig;
}

Json error_json(const std::exception& e, int exit_code) {
    std::string type = "Error";
    if (dynamic_cast<const BlowUp*>(&e)) type = "BlowUp";
    else if (dynamic_cast<const DegenerateFrame*>(&e)) type = "DegenerateFrame";
    else if (dynamic_cast<const SelfIntersectionSuspected*>(&e)) type = "SelfIntersectionSuspected";
    else if (dynamic_cast<const DivisionNearZero*>(&e)) type = "DivisionNearZero";
    else if (dynamic_cast<const SyntaxError*>(&e)) type = "SyntaxError";
    else if (dynamic_cast<const UnboundConstant*>(&e)) type = "UnboundConstant";
    else if (dynamic_cast<const AperiodicFlow*>(&e)) type = "AperiodicFlow";
    else if (dynamic_cast<const NonGeometricFlow*>(&e)) type = "NonGeometricFlow";
    else if (dynamic_cast<const InvalidInput*>(&e)) type = "InvalidInput";
    Json j{{"error", type}, {"message", e.what()}, {"exit_code", exit_code}};
    if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) j["offset"] = s->offset;
    if (const auto* u = dynamic_cast<const UnboundConstant*>(&e)) j["symbol"] = u->symbol;
    return j;
}

std::string version() { return kVersion; }

}  // namespace filament::app
