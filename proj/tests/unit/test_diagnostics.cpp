#include <doctest.h>

#include <algorithm>
#include <random>

#include "filament/diagnostics.hpp"
#include "filament/evolver.hpp"
#include "filament/hasimoto.hpp"
#include "filament/presets.hpp"
#include "filament/sampling.hpp"
#include "filament/spectral.hpp"
#include "oracles.hpp"

using namespace filament;
using namespace filament::diagnostics;

namespace {

GeometryProfile random_profile(std::mt19937_64& rng, double L, std::size_t n = 128) {
    return GeometryProfile(sampling::random_trig_polynomial(n, L, 5, 0.08, 1.0, rng),
                           sampling::random_trig_polynomial(n, L, 5, 0.1, 0.3, rng), L);
}

/// int (2n-2)/(n+1) k^(n+1) tau_s ds, computed without the library's rate code.
double power_law_rate(const GeometryProfile& p, int n) {
    const auto tau_s = spectral::derivative(p.torsion(), p.length());
    std::vector<double> f(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) f[j] = std::pow(p.curvature()[j], n + 1) * tau_s[j];
    return (2.0 * n - 2.0) / (n + 1.0) * spectral::integrate(f, p.length());
}

flow::FlowSpec fm() { return flow::parse_flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {{"W", 0.1}}); }

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("length") {
    CHECK(length(presets::circle(64)) == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
    CHECK(std::abs(length(presets::circle(64)) - 2 * oracle::pi) < 1e-10);
    CHECK(length(presets::helix(64, 1.0, 0.5)) == doctest::Approx(2 * oracle::pi * std::sqrt(1.25)).epsilon(1e-12));

    // A curve moved by a normal flow, measured before and after reparameterization.
    evolve::EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    cfg.reparam_every = 1000000;
    cfg.record_every = 1000000;
    const auto moved = evolve::evolve_curve(presets::perturbed_circle(64, 0.05, 3),
                                            flow::parse_flow("0", "0.3*k", "0"), cfg)
                           .snapshots.back()
                           .curve;
    const double measured = length(moved);
    CHECK(std::abs(measured - moved.length()) > 1e-3);
    CHECK(reparameterize(moved).length() == doctest::Approx(measured).epsilon(1e-12));
}

TEST_CASE("length rate") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_profile(rng, 2.0 + trial);
        CHECK(length_rate(p, flow::parse_flow("k + 0.2*k^3", "0", "0")) == 0.0);
        CHECK(std::abs(length_rate(p, fm())) < 1e-12);
    }
    const GeometryProfile unit(std::vector<double>(64, 1.0), std::vector<double>(64, 0.0), 2 * oracle::pi);
    CHECK(length_rate(unit, flow::parse_flow("0", "k", "0")) == doctest::Approx(-2 * oracle::pi).epsilon(1e-14));
}

TEST_CASE("bending energy") {
    const GeometryProfile unit(std::vector<double>(64, 1.0), std::vector<double>(64, 0.0), 2 * oracle::pi);
    CHECK(bending_energy(unit) == doctest::Approx(2 * oracle::pi).epsilon(1e-14));
    const double L = 2 * oracle::pi * std::sqrt(1.25);
    const GeometryProfile helix(std::vector<double>(64, 0.8), std::vector<double>(64, 0.4), L);
    CHECK(bending_energy(helix) == doctest::Approx(0.64 * L).epsilon(1e-14));
    CHECK(bending_energy(presets::helix(64, 1.0, 0.5)) == doctest::Approx(0.64 * L).epsilon(1e-12));

    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_profile(rng, 3.0 + trial);
        const auto w = hasimoto::forward_transform(p);
        std::vector<double> m(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) m[j] = std::norm(w.gauged()[j]);
        CHECK(std::abs(bending_energy(p) - spectral::integrate(m, p.length())) < 1e-12);
    }
}

TEST_CASE("VFE conserves bending energy on every profile") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_profile(rng, 1.0 + trial);
        CHECK(std::abs(bending_energy_rate(p, flow::parse_flow("k", "0", "0"))) < 1e-10);
    }
}

TEST_CASE("power-law flows: rate = (2n-2)/(n+1) int k^(n+1) tau_s") {
    std::mt19937_64 rng(54);
    for (int n = 1; n <= 3; ++n) {
        const auto spec = flow::parse_flow("k^" + std::to_string(n), "0", "0");
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = random_profile(rng, 2.0 + trial);
            const double rate = bending_energy_rate(p, spec);
            CAPTURE(n);
            CHECK(std::abs(rate - power_law_rate(p, n)) < 1e-10);
            CHECK(std::abs(material_bending_energy_rate(p, spec) - rate) < 1e-10);
            if (n == 2) CHECK(std::abs(power_law_rate(p, n)) > 1e-4);
        }
    }
}

TEST_CASE("bending energy rate against simulation") {
    // Centered differences (I2(t + d) - I2(t - d)) / 2d at t = 0.02 along an
    // extrinsic run, for two values of d.
    const auto c0 = presets::perturbed_circle(64, 0.1, 2);
    const double t_mid = 0.02;
    auto measured_rate = [&](const flow::FlowSpec& spec, double delta) {
        const double cap = evolve::stability_cap(c0.size(), c0.length(), spec);
        const auto per_delta = static_cast<std::size_t>(std::ceil(delta / (0.9 * cap)));
        evolve::EvolutionConfig cfg;
        cfg.dt = delta / static_cast<double>(per_delta);
        cfg.t_final = t_mid + delta;
        cfg.record_every = per_delta;
        const auto traj = evolve::evolve_curve(c0, spec, cfg);
        const auto mid = static_cast<std::size_t>(std::lround(t_mid / delta));
        REQUIRE(traj.snapshots.size() == mid + 2);
        REQUIRE(traj.times[mid] == doctest::Approx(t_mid));
        const double rate = (bending_energy(traj.snapshots[mid + 1].curve) -
                             bending_energy(traj.snapshots[mid - 1].curve)) / (2 * delta);
        return std::pair{rate, profile_from_curve(reparameterize(traj.snapshots[mid].curve))};
    };
    SUBCASE("binormal power law") {
        const auto spec = flow::parse_flow("k^2", "0", "0");
        const auto [r1, p1] = measured_rate(spec, 0.004);
        const auto [r2, p2] = measured_rate(spec, 0.002);
        const double e1 = std::abs(r1 - bending_energy_rate(p1, spec));
        const double e2 = std::abs(r2 - bending_energy_rate(p2, spec));
        CAPTURE(e1);
        CAPTURE(e2);
        CHECK(std::abs(bending_energy_rate(p2, spec)) > 0.1);
        CHECK(e2 < 1e-3);
        CHECK(std::log2(e1 / e2) > 1.8);
    }
    SUBCASE("flow with normal and tangential parts") {
        const auto spec = flow::parse_flow("k", "0.1*k", "0.02*k^2");
        const auto [r1, p1] = measured_rate(spec, 0.004);
        const auto [r2, p2] = measured_rate(spec, 0.002);
        const double e1 = std::abs(r1 - material_bending_energy_rate(p1, spec));
        const double e2 = std::abs(r2 - material_bending_energy_rate(p2, spec));
        CAPTURE(e1);
        CAPTURE(e2);
        CHECK(e2 < 1e-3);
        CHECK(std::log2(e1 / e2) > 1.8);
        // The seven-term integrand leaves out the stretching of the length element.
        CHECK(std::abs(r2 - bending_energy_rate(p2, spec)) > 100 * e2);
    }
}

TEST_CASE("finite differences and observed order") {
    const std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.5};
    std::vector<double> v;
    for (double x : t) v.push_back(3 * x * x - x + 2);
    const auto d = finite_difference_rate(t, v);
    for (std::size_t j = 0; j < t.size(); ++j) CHECK(d[j] == doctest::Approx(6 * t[j] - 1).epsilon(1e-12));
    CHECK(observed_order({0.1, 0.05, 0.025}, {2e-3, 5e-4, 1.25e-4}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("reports from trajectories") {
    evolve::EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.2;
    cfg.record_every = 20;
    const auto traj = evolve::evolve_curve(presets::perturbed_circle(64, 0.05, 3), flow::parse_flow("k", "0", "0"), cfg);
    std::vector<DiscreteCurve> curves;
    for (const auto& s : traj.snapshots) curves.push_back(s.curve);
    const auto r = report_from_curves(traj.times, curves, flow::parse_flow("k", "0", "0"));
    CHECK(r.times.size() == 11);
    CHECK(r.I1.size() == 11);
    CHECK(r.dI2_measured.size() == 11);
    for (std::size_t j = 0; j < r.times.size(); ++j) {
        CHECK(r.I1[j] > 0);
        CHECK(r.I2[j] >= 0);
        CHECK(r.dI1_analytic[j] == 0.0);
        // Snapshot profiles are not band-limited, so the exact-derivative
        // cancellation holds only to the aliasing level.
        CHECK(std::abs(r.dI2_analytic[j]) < 1e-8);
        CHECK(r.closure_defect[j] < 1e-4);
    }
    CHECK(r.max_length_drift() < 1e-8);
    CHECK(r.max_energy_drift() < 1e-6);
    CHECK_FALSE(r.dual_path_error);
}

}  // TEST_SUITE
