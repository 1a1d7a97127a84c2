#include "filament/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "filament/errors.hpp"
#include "filament/geometry.hpp"
#include "filament/presets.hpp"
#include "filament/spectral.hpp"
#include "filament/io.hpp"

namespace filament::app {

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

Json node_to_json(const toml::node& node) {
    if (auto t = node.as_table()) {
        Json out = Json::object();
        for (auto&& [k, v] : *t) out[std::string(k.str())] = node_to_json(v);
        return out;
    }
    if (auto a = node.as_array()) {
        Json out = Json::array();
        for (auto&& v : *a) out.push_back(node_to_json(v));
        return out;
    }
    if (auto v = node.as_string()) return v->get();
    if (auto v = node.as_integer()) return v->get();
    if (auto v = node.as_floating_point()) return v->get();
    if (auto v = node.as_boolean()) return v->get();
    throw InvalidInput("unsupported TOML value (dates and times are not accepted)");
}

// Typed access to one section with unknown-key detection.
class Section {
public:
    Section(const Json& root, std::string name) : name_(std::move(name)) {
        if (root.contains(name_)) {
            json_ = root.at(name_);
            if (!json_.is_object()) fail("", "must be a table");
        } else {
            json_ = Json::object();
        }
    }

    bool has(const std::string& key) const { return json_.contains(key); }

    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = json_.at(key);
        if (!v.is_number()) fail(key, "must be a number");
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = json_.at(key);
        if (!v.is_number_integer()) fail(key, "must be an integer");
        return v.get<std::int64_t>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = json_.at(key);
        if (!v.is_string()) fail(key, "must be a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = json_.at(key);
        if (!v.is_boolean()) fail(key, "must be true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = json_.at(key);
        if (!v.is_array()) fail(key, "must be an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(key, "must be an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    Json table(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) return Json::object();
        const auto& v = json_.at(key);
        if (!v.is_object()) fail(key, "must be a table");
        return v;
    }

    void finish() const {
        for (const auto& [k, v] : json_.items()) {
            if (!seen_.count(k)) fail(k, "is not a recognized key");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw InvalidInput("config: " + name_ + (key.empty() ? "" : "." + key) + " " + what);
    }

private:
    std::string name_;
    Json json_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidInput("config: " + message);
}

std::string fmt(double v) { return io::format_double(v); }

Json normalized(const RunConfig& c) {
    Json initial{{"preset", c.initial.preset}};
    const auto& ic = c.initial;
    if (ic.preset == "circle") {
        initial["radius"] = ic.radius;
    } else if (ic.preset == "helix") {
        initial["radius"] = ic.radius;
        initial["pitch"] = ic.pitch;
    } else if (ic.preset == "perturbed_circle") {
        initial["radius"] = ic.radius;
        initial["amplitude"] = ic.amplitude;
        initial["mode"] = ic.mode;
    } else if (ic.preset == "soliton") {
        initial["a"] = ic.a;
    } else {
        initial["path"] = ic.path.string();
        initial["period_shift"] = {ic.period_shift.x(), ic.period_shift.y(), ic.period_shift.z()};
    }
    Json grid{{"N", c.N}};
    if (c.L > 0.0) grid["L"] = c.L;
    return Json{
        {"grid", grid},
        {"initial", initial},
        {"flow", {{"A", c.A}, {"B", c.B}, {"C", c.C}, {"constants", c.constants}}},
        {"solver", {{"kind", c.solver.kind}, {"W", c.solver.W}, {"coefficients", c.solver.coefficients}}},
        {"evolution",
         {{"dt", c.evolution.dt},
          {"t_final", c.evolution.t_final},
          {"record_every", c.evolution.record_every},
          {"reparam_every", c.evolution.reparam_every},
          {"enforce_cap", c.evolution.enforce_cap}}},
        {"output", {{"dir", c.output_dir.string()}}},
        {"run", {{"seed", c.seed}}},
        {"compare",
         {{"resolutions", c.compare.resolutions},
          {"intrinsic_dt_factor", c.compare.intrinsic_dt_factor},
          {"samples", c.compare.samples}}}};
}

}  // namespace

flow::FlowSpec RunConfig::flow() const { return flow::parse_flow(A, B, C, constants); }

hasimoto::SolverKind RunConfig::solver_kind() const {
    if (solver.kind == "general") return hasimoto::GeneralIntegroDifferential{flow()};
    if (solver.kind == "nls") return hasimoto::CubicNLS{};
    if (solver.kind == "hirota") return hasimoto::Hirota{solver.W};
    if (solver.kind == "powerseries") return hasimoto::PowerSeriesNLS{solver.coefficients};
    throw InvalidInput("config: solver.kind must be one of general, nls, hirota, powerseries (got '" +
                       solver.kind + "')");
}

Json toml_to_json(const std::string& text) {
    try {
        return node_to_json(toml::parse(text));
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "config: TOML parse error at line " << e.source().begin.line << ", column "
           << e.source().begin.column << ": " << e.description();
        throw InvalidInput(os.str());
    }
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    if (path.extension() == ".json") {
        try {
            j = Json::parse(buf.str());
        } catch (const Json::parse_error& e) {
            throw InvalidInput(std::string("config: JSON parse error: ") + e.what());
        }
    } else {
        j = toml_to_json(buf.str());
    }
    return config_from_json(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

RunConfig config_from_json(const Json& j, const fs::path& base_dir) {
    require(j.is_object(), "top level must be a table");
    static const std::set<std::string> sections{"grid", "initial", "flow", "solver", "evolution",
                                                "output", "run", "compare"};
    for (const auto& [k, v] : j.items()) {
        require(sections.count(k) > 0, "unknown section '" + k + "'");
    }
    RunConfig c;

    Section grid(j, "grid");
    const auto n = grid.integer("N", 256);
    require(n >= 8 && spectral::is_power_of_two(static_cast<std::size_t>(n)),
            "grid.N must be a power of two >= 8 (got " + std::to_string(n) + ")");
    c.N = static_cast<std::size_t>(n);
    c.L = grid.number("L", 0.0);
    require(grid.has("L") ? c.L > 0.0 && std::isfinite(c.L) : true,
            "grid.L must be positive and finite (got " + fmt(c.L) + ")");
    grid.finish();

    Section ini(j, "initial");
    auto& ic = c.initial;
    ic.preset = ini.text("preset", "circle");
    static const std::set<std::string> presets{"circle", "helix", "perturbed_circle", "soliton", "csv"};
    require(presets.count(ic.preset) > 0,
            "initial.preset must be circle, helix, perturbed_circle, soliton or csv (got '" +
                ic.preset + "')");
    ic.radius = ini.number("radius", 1.0);
    ic.pitch = ini.number("pitch", 0.5);
    ic.amplitude = ini.number("amplitude", 0.05);
    ic.mode = static_cast<int>(ini.integer("mode", 3));
    ic.a = ini.number("a", 1.0);
    const auto path = ini.text("path", "");
    const auto shift = ini.numbers("period_shift", {0.0, 0.0, 0.0});
    ini.finish();
    require(ic.radius > 0.0 && std::isfinite(ic.radius), "initial.radius must be positive");
    require(std::isfinite(ic.pitch), "initial.pitch must be finite");
    require(ic.amplitude >= 0.0 && ic.amplitude < 0.5 * ic.radius,
            "initial.amplitude must lie in [0, radius/2) (got " + fmt(ic.amplitude) + ")");
    require(ic.mode >= 1 && static_cast<std::size_t>(ic.mode) < c.N / 3,
            "initial.mode must lie in [1, N/3) (got " + std::to_string(ic.mode) + ")");
    require(ic.a > 0.0 && std::isfinite(ic.a), "initial.a must be positive");
    require(shift.size() == 3, "initial.period_shift must have three components");
    ic.period_shift = Vec3(shift[0], shift[1], shift[2]);
    if (ic.preset == "csv") {
        require(!path.empty(), "initial.path is required for the csv preset");
        ic.path = fs::path(path).is_absolute() ? fs::path(path) : base_dir / path;
        require(fs::exists(ic.path), "initial.path does not exist: " + ic.path.string());
        ic.path = fs::weakly_canonical(ic.path);
    }
    if (ic.preset == "soliton" && c.L == 0.0) c.L = 40.0;
    require(c.L == 0.0 || ic.preset == "soliton" || ic.preset == "csv",
            "grid.L applies to the soliton and csv presets only; the " + ic.preset +
                " preset determines its own length");

    Section fl(j, "flow");
    c.A = fl.text("A", "k");
    c.B = fl.text("B", "0");
    c.C = fl.text("C", "0");
    const auto constants = fl.table("constants");
    for (const auto& [name, value] : constants.items()) {
        require(value.is_number(), "flow.constants." + name + " must be a number");
        c.constants[name] = value.get<double>();
    }
    fl.finish();
    (void)c.flow();  // syntax and binding errors surface at load time

    Section sv(j, "solver");
    c.solver.kind = sv.text("kind", "nls");
    const auto w_default = c.constants.count("W") ? c.constants.at("W") : 0.0;
    c.solver.W = sv.number("W", w_default);
    c.solver.coefficients = sv.numbers("coefficients", {1.0});
    sv.finish();
    hasimoto::validate(c.solver_kind());

    Section ev(j, "evolution");
    c.evolution.dt = ev.number("dt", 1e-3);
    c.evolution.t_final = ev.number("t_final", 1.0);
    const auto record = ev.integer("record_every", 100);
    const auto reparam = ev.integer("reparam_every", 0);
    c.evolution.enforce_cap = ev.flag("enforce_cap", true);
    ev.finish();
    require(c.evolution.dt > 0.0 && std::isfinite(c.evolution.dt), "evolution.dt must be positive");
    require(c.evolution.t_final >= 0.0 && std::isfinite(c.evolution.t_final),
            "evolution.t_final must be non-negative");
    require(record >= 1, "evolution.record_every must be at least 1");
    require(reparam >= 0, "evolution.reparam_every must be non-negative");
    c.evolution.record_every = static_cast<std::size_t>(record);
    c.evolution.reparam_every = static_cast<std::size_t>(reparam);

    Section out(j, "output");
    // Relative output directories are taken from the config file's location,
    // like csv paths.
    c.output_dir = out.text("dir", "out");
    if (c.output_dir.is_relative()) c.output_dir = base_dir / c.output_dir;
    out.finish();

    Section run(j, "run");
    const auto seed = run.integer("seed", 0);
    require(seed >= 0, "run.seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    run.finish();

    Section cmp(j, "compare");
    std::vector<std::size_t> res;
    for (double r : cmp.numbers("resolutions", {128, 256, 512})) {
        require(r >= 8 && r == std::floor(r) && spectral::is_power_of_two(static_cast<std::size_t>(r)),
                "compare.resolutions must be powers of two >= 8");
        res.push_back(static_cast<std::size_t>(r));
    }
    require(res.size() >= 2, "compare.resolutions needs at least two grids");
    c.compare.resolutions = res;
    c.compare.intrinsic_dt_factor = cmp.number("intrinsic_dt_factor", 1.0);
    require(c.compare.intrinsic_dt_factor > 0.0, "compare.intrinsic_dt_factor must be positive");
    const auto samples = cmp.integer("samples", 10);
    require(samples >= 1, "compare.samples must be at least 1");
    c.compare.samples = static_cast<std::size_t>(samples);
    cmp.finish();

    c.source = normalized(c);
    return c;
}

std::string config_hash(const RunConfig& config) {
    const auto text = config.source.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DiscreteCurve initial_curve(const RunConfig& c, std::size_t n) {
    const auto& ic = c.initial;
    if (ic.preset == "circle") return presets::circle(n, ic.radius);
    if (ic.preset == "helix") return presets::helix(n, ic.radius, ic.pitch);
    if (ic.preset == "perturbed_circle") return presets::perturbed_circle(n, ic.amplitude, ic.mode, ic.radius);
    if (ic.preset == "csv") {
        auto curve = io::read_curve_csv(ic.path, ic.period_shift, c.L);
        if (curve.size() != n) {
            throw InvalidInput("config: " + ic.path.string() + " has " +
                               std::to_string(curve.size()) + " points but grid.N = " +
                               std::to_string(n));
        }
        return reparameterize(curve);
    }
    // soliton: the planar curve whose curvature is the soliton profile.
    return reconstruct_curve(initial_profile(c, n), Vec3::Zero(), OrthonormalFrame{}).curve;
}

GeometryProfile initial_profile(const RunConfig& c, std::size_t n) {
    if (c.initial.preset == "soliton") {
        const auto s = spectral::nodes(n, c.L);
        std::vector<double> k(n), tau(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            k[j] = 2.0 * c.initial.a / std::cosh(c.initial.a * (s[j] - 0.5 * c.L));
        }
        return GeometryProfile(std::move(k), std::move(tau), c.L);
    }
    return profile_from_curve(initial_curve(c, n));
}

}  // namespace filament::app
