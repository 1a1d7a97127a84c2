#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "filament/config.hpp"
#include "filament/errors.hpp"
#include "filament/io.hpp"
#include "filament/presets.hpp"
#include "filament/runner.hpp"
#include "filament/sampling.hpp"
#include "oracles.hpp"

using namespace filament;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "filament_unit" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

constexpr const char* kCircleToml = R"(
[grid]
N = 64

[initial]
preset = "perturbed_circle"
amplitude = 0.05
mode = 3

[flow]
A = "k"
B = "0"
C = "0"

[evolution]
dt = 1e-3
t_final = 0.05
record_every = 10
)";

}  // namespace

TEST_SUITE("app") {

TEST_CASE("CSV round trip keeps every bit") {
    const auto dir = scratch("csv");
    std::mt19937_64 rng(61);
    const auto c = presets::perturbed_circle(32, 0.05, 3);
    io::write_curve_csv(dir / "c.csv", c);
    const auto c2 = io::read_curve_csv(dir / "c.csv");
    CHECK(c2.length() == c.length());
    for (std::size_t j = 0; j < 32; ++j) CHECK(c2[j] == c[j]);

    const GeometryProfile p(sampling::random_trig_polynomial(32, 3.7, 4, 0.1, 1.0, rng),
                            sampling::random_trig_polynomial(32, 3.7, 4, 0.1, 0.3, rng), 3.7);
    io::write_profile_csv(dir / "p.csv", p);
    const auto p2 = io::read_profile_csv(dir / "p.csv");
    CHECK(p2.curvature() == p.curvature());
    CHECK(p2.torsion() == p.torsion());
    CHECK(p2.length() == doctest::Approx(3.7).epsilon(1e-15));

    const auto w = hasimoto::forward_transform(p);
    io::write_wave_csv(dir / "w.csv", w);
    const auto w2 = io::read_wave_csv(dir / "w.csv", io::wave_envelope(w));
    CHECK(w2.mu() == w.mu());
    const auto a = w.psi(), b = w2.psi();
    for (std::size_t j = 0; j < 32; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-15);

    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310, 1e300}) {
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("malformed CSV is reported") {
    const auto dir = scratch("bad_csv");
    write_text(dir / "ragged.csv", "s,k,tau\n0,1,0\n0.1,1\n");
    CHECK_THROWS_AS(io::read_profile_csv(dir / "ragged.csv"), InvalidInput);
    write_text(dir / "text.csv", "s,k,tau\n0,1,zero\n");
    CHECK_THROWS_AS(io::read_profile_csv(dir / "text.csv"), InvalidInput);
    CHECK_THROWS_AS(io::read_profile_csv(dir / "missing.csv"), InvalidInput);
}

TEST_CASE("TOML and JSON configurations") {
    const auto dir = scratch("config");
    write_text(dir / "run.toml", kCircleToml);
    const auto cfg = app::load_config(dir / "run.toml");
    CHECK(cfg.N == 64);
    CHECK(cfg.initial.preset == "perturbed_circle");
    CHECK(cfg.evolution.dt == 1e-3);
    CHECK(cfg.evolution.record_every == 10);

    io::write_json(dir / "run.json", cfg.source);
    const auto again = app::load_config(dir / "run.json");
    CHECK(app::config_hash(again) == app::config_hash(cfg));
    CHECK(app::config_hash(cfg).size() == 16);

    write_text(dir / "fm.toml", R"toml(
[flow]
A = "k + W*k*tau"
B = "W*d_s(k)"
C = "(W/2)*k^2"
[flow.constants]
W = 0.1
)toml");
    const auto fm = app::load_config(dir / "fm.toml");
    CHECK(fm.constants.at("W") == 0.1);
    CHECK(fm.flow().derivative_depth() == 1);
}

TEST_CASE("configuration errors are pointed") {
    const auto dir = scratch("config_errors");
    auto expect_error = [&](const std::string& text, const std::string& fragment) {
        write_text(dir / "bad.toml", text);
        const auto msg = message_of([&] { app::load_config(dir / "bad.toml"); });
        CAPTURE(msg);
        CHECK(msg.find(fragment) != std::string::npos);
    };
    expect_error("[grid]\nN = 100\n", "power of two");
    expect_error("[grid]\nN = 64\nsize = 3\n", "size");
    expect_error("[initial]\npreset = \"torus\"\n", "torus");
    expect_error("[initial]\npreset = \"perturbed_circle\"\namplitude = 0.5\n", "amplitude");
    expect_error("[initial]\npreset = \"csv\"\npath = \"nowhere.csv\"\n", "nowhere.csv");
    expect_error("[flow]\nA = \"k +\"\n", "offset 3");
    expect_error("[flow]\nA = \"V*k\"\n", "V");
    expect_error("[grid\n", "");
}

TEST_CASE("classify writes the FM classification") {
    const auto dir = scratch("classify");
    write_text(dir / "fm.toml", R"toml(
[flow]
A = "k + W*k*tau"
B = "W*d_s(k)"
C = "(W/2)*k^2"
[flow.constants]
W = 0.1
[output]
dir = "out"
)toml");
    const auto cfg = app::load_config(dir / "fm.toml");
    const auto result = app::run(cfg, app::Command::Classify);
    CHECK(result.exit_code == 0);
    const auto j = io::read_json(dir / "out" / "classification.json");
    CHECK(j.at("is_binormal") == false);
    CHECK(j.at("length_condition_residual").get<double>() < 1e-12);
    CHECK(j.at("power_series").is_null());
}

TEST_CASE("runs are deterministic") {
    const auto dir = scratch("determinism");
    write_text(dir / "run.toml", kCircleToml);
    auto cfg = app::load_config(dir / "run.toml");
    cfg.output_dir = dir / "a";
    app::run(cfg, app::Command::Evolve);
    cfg.output_dir = dir / "b";
    app::run(cfg, app::Command::Evolve);
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
        if (entry.path().extension() != ".csv") continue;
        const auto rel = fs::relative(entry.path(), dir / "a");
        CHECK(read_text(entry.path()) == read_text(dir / "b" / rel));
        ++compared;
    }
    CHECK(compared >= 12);
    const auto ma = io::read_json(dir / "a" / "manifest.json");
    CHECK(ma.at("config_hash") == io::read_json(dir / "b" / "manifest.json").at("config_hash"));
    CHECK(ma.at("format") == "filament-manifest/1");
}

TEST_CASE("evolve then diagnose") {
    const auto dir = scratch("diagnose");
    write_text(dir / "run.toml", kCircleToml);
    auto cfg = app::load_config(dir / "run.toml");
    cfg.output_dir = dir / "out";
    app::run(cfg, app::Command::Evolve);
    app::RunOptions opts;
    opts.manifest = dir / "out" / "manifest.json";
    const auto r = app::run(cfg, app::Command::Diagnose, opts);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
    CHECK(r.summary.at("max_relative_length_drift").get<double>() < 1e-7);
}

TEST_CASE("exit codes and error JSON") {
    CHECK(app::exit_code_for(BlowUp("x")) == 3);
    CHECK(app::exit_code_for(DegenerateFrame(3, 64)) == 3);
    CHECK(app::exit_code_for(DivisionNearZero(4)) == 3);
    CHECK(app::exit_code_for(InvalidInput("x")) == 2);
    CHECK(app::exit_code_for(NonGeometricFlow("x")) == 2);
    const auto j = app::error_json(SyntaxError("unexpected end", 3), 2);
    CHECK(j.at("error") == "SyntaxError");
    CHECK(j.at("offset") == 3);
    CHECK(j.at("exit_code") == 2);
}

TEST_CASE("command line exit status") {
    const auto dir = scratch("cli");
    write_text(dir / "bad.toml", "[grid]\nN = 100\n");
    const std::string cli = FILAMENT_CLI_PATH;
    const auto out = (dir / "out").string();
    auto status = [&](const std::string& args) {
        const int rc = std::system((cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    CHECK(status("classify -c " + (dir / "bad.toml").string() + " -o " + out) == 2);
    CHECK(read_text(dir / "log.txt").find("power of two") != std::string::npos);
    write_text(dir / "good.toml", kCircleToml);
    CHECK(status("classify -c " + (dir / "good.toml").string() + " -o " + out) == 0);
    CHECK(status("frobnicate") != 0);
}

}  // TEST_SUITE
