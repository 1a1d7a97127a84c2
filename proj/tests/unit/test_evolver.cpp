#include <doctest.h>

#include <Eigen/Geometry>

#include <algorithm>

#include "filament/diagnostics.hpp"
#include "filament/errors.hpp"
#include "filament/evolver.hpp"
#include "filament/presets.hpp"
#include "oracles.hpp"

using namespace filament;
using namespace filament::evolve;

namespace {

double max_dev(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, (a[j] - b[j]).norm());
    return m;
}

EvolutionConfig config(double dt, double t_final) {
    EvolutionConfig c;
    c.dt = dt;
    c.t_final = t_final;
    c.record_every = 1000000;
    return c;
}

const DiscreteCurve& final_curve(const Trajectory& t) { return t.snapshots.back().curve; }

flow::FlowSpec vfe() { return flow::parse_flow("k", "0", "0"); }

}  // namespace

TEST_SUITE("evolver") {

TEST_CASE("unit circle under VFE translates along its axis at unit speed") {
    const auto c = presets::circle(64);
    const auto traj = evolve_curve(c, vfe(), config(1e-3, 1.0));
    CHECK(traj.times.back() == 1.0);
    std::vector<Vec3> expect;
    for (const auto& p : c.points()) expect.push_back(p + Vec3(0, 0, 1.0));
    CHECK(max_dev(final_curve(traj).points(), expect) < 1e-6);
    for (double k : traj.snapshots.back().profile.curvature()) CHECK(std::abs(k - 1.0) < 1e-6);
    for (double tau : traj.snapshots.back().profile.torsion()) CHECK(std::abs(tau) < 1e-6);
}

TEST_CASE("helix under VFE moves rigidly with constant profile") {
    const auto h = presets::helix(64, 1.0, 0.5);
    auto cfg = config(1e-3, 1.0);
    cfg.record_every = 250;
    const auto traj = evolve_curve(h, vfe(), cfg);
    CHECK(traj.snapshots.size() == 5);
    for (const auto& snap : traj.snapshots) {
        for (double k : snap.profile.curvature()) CHECK(std::abs(k - 0.8) < 1e-6);
        for (double tau : snap.profile.torsion()) CHECK(std::abs(tau - 0.4) < 1e-6);
    }
    CHECK(rigid_alignment_error(h.points(), final_curve(traj).points()) < 1e-6);
}

TEST_CASE("zero flow is the identity") {
    const auto c = presets::perturbed_circle(64, 0.05, 3);
    const auto zero = flow::parse_flow("0", "0", "0");
    auto cfg = config(1e-3, 0.05);
    cfg.record_every = 10;
    const auto traj = evolve_curve(c, zero, cfg);
    for (const auto& snap : traj.snapshots) CHECK(max_dev(snap.curve.points(), c.points()) == 0.0);

    cfg.reparam_every = 1;
    const auto with_reparam = evolve_curve(c, zero, cfg);
    for (const auto& snap : with_reparam.snapshots) CHECK(max_dev(snap.curve.points(), c.points()) < 1e-12);
}

TEST_CASE("evolution commutes with rigid motion") {
    const auto c = presets::perturbed_circle(64, 0.05, 3);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(1.1, Vec3(0.3, -1, 2).normalized()).toRotationMatrix();
    const Vec3 shift(0.5, 2, -1);
    std::vector<Vec3> moved;
    for (const auto& p : c.points()) moved.push_back(R * p + shift);
    for (const auto& spec : {vfe(), flow::parse_flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {{"W", 0.1}})}) {
        auto cfg = config(1e-4, 0.02);
        const auto a = final_curve(evolve_curve(c, spec, cfg));
        const auto b = final_curve(evolve_curve(DiscreteCurve(moved, c.length()), spec, cfg));
        std::vector<Vec3> a_moved;
        for (const auto& p : a.points()) a_moved.push_back(R * p + shift);
        CHECK(max_dev(a_moved, b.points()) < 1e-9);
    }
}

TEST_CASE("time stepping is fourth order") {
    // The VFE circle is integrated exactly by RK4, so a perturbed circle is used.
    const auto c = presets::perturbed_circle(32, 0.1, 2);
    const double t = 0.5;
    const auto ref = final_curve(evolve_curve(c, vfe(), config(2e-3 / 16, t))).points();
    const double e1 = max_dev(final_curve(evolve_curve(c, vfe(), config(1e-2, t))).points(), ref);
    const double e2 = max_dev(final_curve(evolve_curve(c, vfe(), config(5e-3, t))).points(), ref);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("binormal flow keeps the length") {
    const auto c = presets::perturbed_circle(64, 0.05, 3);
    auto cfg = config(1e-3, 1.0);
    cfg.record_every = 100;
    const auto traj = evolve_curve(c, vfe(), cfg);
    const double L0 = diagnostics::length(c);
    for (const auto& snap : traj.snapshots) CHECK(std::abs(diagnostics::length(snap.curve) - L0) / L0 < 1e-7);
}

TEST_CASE("stability cap") {
    const double two_pi = 2 * oracle::pi;
    CHECK(stability_cap(256, two_pi, vfe()) == doctest::Approx(0.25 * std::pow(two_pi / 256, 2)).epsilon(1e-15));
    CHECK(stability_cap(512, two_pi, vfe()) == doctest::Approx(stability_cap(256, two_pi, vfe()) / 4).epsilon(1e-15));
    const auto fm = flow::parse_flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {{"W", 0.1}});
    CHECK(stability_cap(256, two_pi, fm) == doctest::Approx(0.25 * std::pow(two_pi / 256, 3) / 2).epsilon(1e-15));

    CHECK_THROWS_AS(evolve_curve(presets::circle(256), vfe(), config(1e-3, 1.0)), InvalidInput);
}

TEST_CASE("runaway steps and bad settings are rejected") {
    auto cfg = config(0.2, 1.0);
    cfg.enforce_cap = false;
    CHECK_THROWS_AS(evolve_curve(presets::circle(64), vfe(), cfg), BlowUp);
    CHECK_THROWS_AS(evolve_curve(presets::circle(64), vfe(), config(-1e-3, 1.0)), InvalidInput);
    auto none = config(1e-3, 1.0);
    none.record_every = 0;
    CHECK_THROWS_AS(evolve_curve(presets::circle(64), vfe(), none), InvalidInput);
}

}  // TEST_SUITE
