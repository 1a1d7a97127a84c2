#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "filament/config.hpp"
#include "filament/diagnostics.hpp"
#include "filament/errors.hpp"
#include "filament/evolver.hpp"
#include "filament/hasimoto.hpp"
#include "filament/presets.hpp"
#include "filament/runner.hpp"

namespace py = pybind11;
using namespace filament;
using hasimoto::Complex;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> to_points(const Points& a) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw InvalidInput("points must have shape (N, 3)");
    const auto r = a.unchecked<2>();
    std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
    for (py::ssize_t j = 0; j < a.shape(0); ++j) out[j] = Vec3(r(j, 0), r(j, 1), r(j, 2));
    return out;
}

py::array_t<double> from_points(const std::vector<Vec3>& pts) {
    py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
    auto w = a.mutable_unchecked<2>();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        for (int i = 0; i < 3; ++i) w(j, i) = pts[j][i];
    }
    return a;
}

DiscreteCurve make_curve(const Points& points, double length, const std::array<double, 3>& shift) {
    return DiscreteCurve(to_points(points), length, Vec3(shift[0], shift[1], shift[2]));
}

hasimoto::SolverKind solver_kind(const std::string& kind, const flow::FlowSpec* spec, double W,
                                 const std::vector<double>& coefficients) {
    if (kind == "nls") return hasimoto::CubicNLS{};
    if (kind == "hirota") return hasimoto::Hirota{W};
    if (kind == "powerseries") return hasimoto::PowerSeriesNLS{coefficients};
    if (kind == "general") {
        if (!spec) throw InvalidInput("kind 'general' needs a flow");
        return hasimoto::GeneralIntegroDifferential{*spec};
    }
    throw InvalidInput("unknown solver kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Space-curve flows and their wave-function counterparts";

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<DegenerateFrame>(m, "DegenerateFrame", base.ptr());
    py::register_exception<SelfIntersectionSuspected>(m, "SelfIntersectionSuspected", base.ptr());
    py::register_exception<SyntaxError>(m, "FlowSyntaxError", base.ptr());
    py::register_exception<UnboundConstant>(m, "UnboundConstant", base.ptr());
    py::register_exception<DivisionNearZero>(m, "DivisionNearZero", base.ptr());
    py::register_exception<AperiodicFlow>(m, "AperiodicFlow", base.ptr());
    py::register_exception<NonGeometricFlow>(m, "NonGeometricFlow", base.ptr());
    py::register_exception<BlowUp>(m, "BlowUp", base.ptr());

    py::class_<DiscreteCurve>(m, "Curve")
        .def(py::init(&make_curve), py::arg("points"), py::arg("length"),
             py::arg("period_shift") = std::array<double, 3>{0, 0, 0})
        .def_property_readonly("points", [](const DiscreteCurve& c) { return from_points(c.points()); })
        .def_property_readonly("length", &DiscreteCurve::length)
        .def_property_readonly("period_shift",
                               [](const DiscreteCurve& c) {
                                   const auto& s = c.period_shift();
                                   return std::array<double, 3>{s[0], s[1], s[2]};
                               })
        .def("__len__", &DiscreteCurve::size);

    py::class_<GeometryProfile>(m, "Profile")
        .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("curvature"),
             py::arg("torsion"), py::arg("length"))
        .def_property_readonly("curvature", &GeometryProfile::curvature)
        .def_property_readonly("torsion", &GeometryProfile::torsion)
        .def_property_readonly("length", &GeometryProfile::length)
        .def_property_readonly("continued_nodes", &GeometryProfile::continued_nodes)
        .def("__len__", &GeometryProfile::size);

    py::class_<hasimoto::WaveFunction>(m, "Wave")
        .def(py::init<const std::vector<Complex>&, double, double>(), py::arg("psi"), py::arg("length"),
             py::arg("mu") = 0.0)
        .def_property_readonly("psi", &hasimoto::WaveFunction::psi)
        .def_property_readonly("gauged", &hasimoto::WaveFunction::gauged)
        .def_property_readonly("length", &hasimoto::WaveFunction::length)
        .def_property_readonly("mu", &hasimoto::WaveFunction::mu)
        .def("__len__", &hasimoto::WaveFunction::size);

    py::class_<flow::FlowSpec>(m, "Flow")
        .def(py::init(&flow::parse_flow), py::arg("A"), py::arg("B") = "0", py::arg("C") = "0",
             py::arg("constants") = flow::Constants{})
        .def_property_readonly("A", [](const flow::FlowSpec& f) { return flow::to_string(f.A); })
        .def_property_readonly("B", [](const flow::FlowSpec& f) { return flow::to_string(f.B); })
        .def_property_readonly("C", [](const flow::FlowSpec& f) { return flow::to_string(f.C); })
        .def_readonly("constants", &flow::FlowSpec::constants)
        .def("classify", [](const flow::FlowSpec& f, std::size_t n, double length, std::uint64_t seed) {
            const auto c = flow::classify_flow(f, flow::default_probes(n, length, seed));
            py::dict d;
            d["is_binormal"] = c.is_binormal;
            d["length_condition_residual"] = c.length_condition_residual;
            if (c.power_series) {
                d["power_series"] = *c.power_series;
            } else {
                d["power_series"] = py::none();
            }
            return d;
        }, py::arg("n") = 64, py::arg("length") = 2 * 3.141592653589793, py::arg("seed") = 0);

    m.def("circle", &presets::circle, py::arg("n"), py::arg("radius") = 1.0);
    m.def("helix", &presets::helix, py::arg("n"), py::arg("radius"), py::arg("pitch"));
    m.def("perturbed_circle", &presets::perturbed_circle, py::arg("n"), py::arg("amplitude"), py::arg("mode"),
          py::arg("radius") = 1.0);

    m.def("profile", &profile_from_curve, py::arg("curve"));
    m.def("reparameterize", &reparameterize, py::arg("curve"));
    m.def("reconstruct", [](const GeometryProfile& p, std::array<double, 3> point) {
        return reconstruct_curve(p, Vec3(point[0], point[1], point[2]), OrthonormalFrame{}).curve;
    }, py::arg("profile"), py::arg("point") = std::array<double, 3>{0, 0, 0});
    m.def("rigid_alignment_error", [](const Points& a, const Points& b) {
        return rigid_alignment_error(to_points(a), to_points(b));
    });

    m.def("forward_transform", &hasimoto::forward_transform, py::arg("profile"), py::arg("base_node") = 0);
    m.def("inverse_transform", &hasimoto::inverse_transform, py::arg("wave"));

    m.def("stability_cap", [](const DiscreteCurve& c, const flow::FlowSpec& f) {
        return evolve::stability_cap(c.size(), c.length(), f);
    });
    m.def("evolve_curve", [](const DiscreteCurve& c, const flow::FlowSpec& f, double dt, double t_final,
                             std::size_t record_every) {
        evolve::EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.t_final = t_final;
        cfg.record_every = record_every;
        auto traj = evolve::evolve_curve(c, f, cfg);
        std::vector<DiscreteCurve> curves;
        for (auto& s : traj.snapshots) curves.push_back(std::move(s.curve));
        return std::pair{traj.times, curves};
    }, py::arg("curve"), py::arg("flow"), py::arg("dt"), py::arg("t_final"), py::arg("record_every") = 1);
    m.def("evolve_wave", [](const hasimoto::WaveFunction& w, const std::string& kind, double dt, double t_final,
                            std::size_t record_every, const flow::FlowSpec* f, double W,
                            std::vector<double> coefficients) {
        auto traj = hasimoto::evolve_wave(w, solver_kind(kind, f, W, coefficients), dt, t_final, record_every);
        return std::pair{traj.times, traj.waves};
    }, py::arg("wave"), py::arg("kind"), py::arg("dt"), py::arg("t_final"), py::arg("record_every") = 1,
       py::arg("flow") = nullptr, py::arg("W") = 0.0, py::arg("coefficients") = std::vector<double>{1.0});
    m.def("general_rhs", [](const hasimoto::WaveFunction& w, const flow::FlowSpec& f) {
        return hasimoto::general_rhs(w, f);
    });

    m.def("length", py::overload_cast<const DiscreteCurve&>(&diagnostics::length));
    m.def("bending_energy", py::overload_cast<const GeometryProfile&>(&diagnostics::bending_energy));
    m.def("length_rate", [](const GeometryProfile& p, const flow::FlowSpec& f) {
        return diagnostics::length_rate(p, f);
    });
    m.def("bending_energy_rate", [](const GeometryProfile& p, const flow::FlowSpec& f) {
        return diagnostics::bending_energy_rate(p, f);
    });
    m.def("material_bending_energy_rate", [](const GeometryProfile& p, const flow::FlowSpec& f) {
        return diagnostics::material_bending_energy_rate(p, f);
    });

    m.def("run", [](const std::filesystem::path& config, const std::string& command,
                    std::optional<std::filesystem::path> output_dir) {
        const auto cmd = app::parse_command(command);
        if (!cmd) throw InvalidInput("unknown command '" + command + "'");
        auto cfg = app::load_config(config);
        if (output_dir) cfg.output_dir = *output_dir;
        const auto result = app::run(cfg, *cmd);
        return py::module_::import("json").attr("loads")(result.summary.dump());
    }, py::arg("config"), py::arg("command"), py::arg("output_dir") = std::nullopt,
       "Run a subcommand from a TOML/JSON config and return its summary.");
}
