// Command line entry point: filament <subcommand> [--config run.toml] ...

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "filament/config.hpp"
#include "filament/errors.hpp"
#include "filament/flow.hpp"
#include "filament/io.hpp"
#include "filament/runner.hpp"

namespace fs = std::filesystem;
using namespace filament;

namespace {

void report_error(const std::exception& e, int code, const fs::path& out_dir) {
    const auto j = app::error_json(e, code);
    std::cerr << j.dump() << '\n';
    if (out_dir.empty()) return;
    try {
        io::write_json(out_dir / "error.json", j);
    } catch (...) {
        // The error is already on stderr; an unwritable output directory is not worth masking it.
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Curve and wave-function evolution under Frenet-framed flows"};
    cli.footer(std::string("\nFLOW EXPRESSIONS\n\n") + flow::kGrammar +
               "\nExit codes: 0 success, 2 configuration error, 3 numerical failure.\n");
    cli.require_subcommand(1);
    cli.set_version_flag("--version", app::version());

    std::string config_path, output, kind, manifest, wave;
    struct Entry {
        app::Command command;
        const char* description;
    };
    const Entry entries[] = {
        {app::Command::Evolve, "evolve the curve in R^3 and write snapshot CSVs with a manifest"},
        {app::Command::Solve, "evolve the wave function psi with the selected scalar solver"},
        {app::Command::Transform, "map the initial profile to psi, or --wave back to (k, tau)"},
        {app::Command::Classify, "classify the flow (binormal, length condition, power series)"},
        {app::Command::Diagnose, "length and bending-energy diagnostics of a trajectory manifest"},
        {app::Command::Compare, "extrinsic vs intrinsic evolution with a grid convergence study"},
    };
    std::optional<app::Command> chosen;
    for (const auto& e : entries) {
        auto* sub = cli.add_subcommand(app::command_name(e.command), e.description);
        sub->add_option("-c,--config", config_path, "run configuration (.toml or .json)");
        sub->add_option("-o,--output", output, "output directory (overrides output.dir)");
        if (e.command == app::Command::Solve || e.command == app::Command::Compare) {
            sub->add_option("--kind", kind, "solver: general, nls, hirota or powerseries")
                ->check(CLI::IsMember({"general", "nls", "hirota", "powerseries"}));
        }
        if (e.command == app::Command::Diagnose) {
            sub->add_option("-m,--manifest", manifest, "trajectory manifest.json")->required();
        }
        if (e.command == app::Command::Transform) {
            sub->add_option("--wave", wave, "wave CSV to invert (metadata read from the .json beside it)");
        }
        const auto command = e.command;
        sub->callback([&chosen, command] { chosen = command; });
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error(InvalidInput(e.what()), app::kExitConfig, {});
        return app::kExitConfig;
    }

    fs::path out_dir = output;
    app::RunConfig config;
    try {
        if (!config_path.empty()) {
            config = app::load_config(config_path);
        } else if (*chosen == app::Command::Diagnose) {
            // Reproduce the run's configuration from the manifest itself.
            const auto m = io::read_json(manifest);
            if (!m.contains("config")) throw InvalidInput(manifest + " has no recorded config");
            config = app::config_from_json(m.at("config"));
            config.output_dir = fs::path(manifest).has_parent_path() ? fs::path(manifest).parent_path()
                                                                     : fs::path(".");
        } else {
            config = app::config_from_json(nlohmann::json::object());
        }
        if (!output.empty()) config.output_dir = output;
        out_dir = config.output_dir;
    } catch (const std::exception& e) {
        report_error(e, app::kExitConfig, out_dir);
        return app::kExitConfig;
    }

    app::RunOptions options;
    if (!kind.empty()) options.kind = kind;
    options.manifest = manifest;
    options.wave = wave;
    try {
        const auto result = app::run(config, *chosen, options);
        std::cout << result.summary.dump(2) << '\n';
        return result.exit_code;
    } catch (const filament::Error& e) {
        const int code = app::exit_code_for(e);
        report_error(e, code, out_dir);
        return code;
    } catch (const std::exception& e) {
        report_error(e, app::kExitConfig, out_dir);
        return app::kExitConfig;
    }
}
