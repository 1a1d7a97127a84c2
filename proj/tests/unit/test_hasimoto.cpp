#include <doctest.h>

#include <algorithm>
#include <random>

#include "filament/errors.hpp"
#include "filament/hasimoto.hpp"
#include "filament/sampling.hpp"
#include "oracles.hpp"

using namespace filament;
using namespace filament::hasimoto;

namespace {

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

/// Smooth wave with |psi| in roughly [0.6, 1.4], carried with a nonzero gauge.
WaveFunction random_wave(std::mt19937_64& rng, std::size_t n = 64, double L = 2 * oracle::pi,
                         double mu = 0.3) {
    auto g = sampling::random_complex_trig_polynomial(n, L, 4, 0.04, Complex(1.0, 0.0), rng);
    return WaveFunction::from_gauged(std::move(g), L, mu);
}

flow::FlowSpec vfe() { return flow::parse_flow("k", "0", "0"); }
flow::FlowSpec fm(double W) {
    return flow::parse_flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {{"W", W}});
}

}  // namespace

TEST_SUITE("hasimoto") {

TEST_CASE("forward transform of constant profiles") {
    const std::size_t n = 32;
    const GeometryProfile flat(std::vector<double>(n, 1.7), std::vector<double>(n, 0.0), 3.0);
    for (const auto& v : forward_transform(flat).psi()) CHECK(v == Complex(1.7, 0.0));

    const double L = 2 * oracle::pi * std::sqrt(1.25);
    const GeometryProfile helix(std::vector<double>(n, 0.8), std::vector<double>(n, 0.4), L);
    const auto w = forward_transform(helix);
    CHECK(w.mu() == doctest::Approx(0.4).epsilon(1e-15));
    const auto psi = w.psi();
    for (std::size_t j = 0; j < n; ++j) {
        CHECK(std::abs(psi[j] - 0.8 * std::polar(1.0, 0.4 * L * j / n)) < 1e-14);
    }
}

TEST_CASE("forward transform of a torsion-free bump is real") {
    const std::size_t n = 256;
    const double L = 40.0;
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) k[j] = 2.0 / std::cosh(L * j / n - L / 2);
    const auto psi = forward_transform(GeometryProfile(k, std::vector<double>(n, 0.0), L)).psi();
    for (std::size_t j = 0; j < n; ++j) {
        CHECK(psi[j].imag() == 0.0);
        CHECK(std::abs(psi[j].real() - k[j]) < 1e-14);
    }
}

TEST_CASE("inverse transform") {
    const std::size_t n = 32;
    const auto flat = inverse_transform(WaveFunction(std::vector<Complex>(n, 3.0), 2.0));
    CHECK(max_diff(flat.curvature(), std::vector<double>(n, 3.0)) < 1e-15);
    CHECK(max_diff(flat.torsion(), std::vector<double>(n, 0.0)) < 1e-15);

    const double L = 2 * oracle::pi * std::sqrt(1.25);
    std::vector<Complex> psi(n);
    for (std::size_t j = 0; j < n; ++j) psi[j] = 0.8 * std::polar(1.0, 0.4 * L * j / n);
    const auto h = inverse_transform(WaveFunction(psi, L, 0.4));
    CHECK(max_diff(h.curvature(), std::vector<double>(n, 0.8)) < 1e-14);
    CHECK(max_diff(h.torsion(), std::vector<double>(n, 0.4)) < 1e-14);
}

TEST_CASE("inverse(forward(p)) = p on random band-limited profiles") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const double L = 2.0 + trial;
        const GeometryProfile p(sampling::random_trig_polynomial(128, L, 4, 0.1, 0.6, rng),
                                sampling::random_trig_polynomial(128, L, 4, 0.1, 0.3, rng), L);
        REQUIRE(*std::min_element(p.curvature().begin(), p.curvature().end()) > 0.1);
        const auto back = inverse_transform(forward_transform(p));
        CHECK(max_diff(back.curvature(), p.curvature()) < 1e-10);
        CHECK(max_diff(back.torsion(), p.torsion()) < 1e-10);
    }
}

TEST_CASE("moving the base point multiplies psi by one global phase") {
    std::mt19937_64 rng(32);
    const GeometryProfile p(sampling::random_trig_polynomial(64, 5.0, 4, 0.1, 1.0, rng),
                            sampling::random_trig_polynomial(64, 5.0, 4, 0.1, 0.5, rng), 5.0);
    const auto a = forward_transform(p, 0).psi();
    const auto b = forward_transform(p, 17).psi();
    const Complex phase = b[0] / a[0];
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-14);
    for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(b[j] - phase * a[j]) < 1e-12);
}

TEST_CASE("potential term") {
    std::mt19937_64 rng(33);
    const GeometryProfile p(sampling::random_trig_polynomial(64, 4.0, 4, 0.1, 1.0, rng),
                            sampling::random_trig_polynomial(64, 4.0, 4, 0.1, 0.2, rng), 4.0);
    SUBCASE("power series Lambda = sum a_n k^(n+1) / (n+1)") {
        const auto spec = flow::parse_flow("k + 0.5*k^2 - 0.2*k^4", "0", "0");
        const auto pot = potential(p, spec, flow::evaluate_flow(spec, p, 0.0));
        for (std::size_t j = 0; j < 64; ++j) {
            const double k = p.curvature()[j];
            const double expect = k * k / 2 + 0.5 * std::pow(k, 3) / 3 - 0.2 * std::pow(k, 5) / 5;
            CHECK(std::abs(pot.Lambda[j] - expect) < 1e-12);
        }
    }
    SUBCASE("non-polynomial A by quadrature") {
        const auto spec = flow::parse_flow("sin(k)", "0", "0");
        const auto pot = potential(p, spec, flow::evaluate_flow(spec, p, 0.0));
        for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(pot.Lambda[j] - (1 - std::cos(p.curvature()[j]))) < 1e-12);
    }
    SUBCASE("nonlocal integral starts at zero") {
        const auto spec = fm(0.2);
        const auto pot = potential(p, spec, flow::evaluate_flow(spec, p, 0.0));
        CHECK(pot.nonlocal[0] == 0.0);
        CHECK(std::abs(pot.nonlocal[10]) > 0.0);
    }
}

TEST_CASE("general right-hand side reduces to the named equations") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_wave(rng, 128, 3.0 + trial, 0.1 * trial);
        CHECK(max_diff(general_rhs(w, vfe()), cubic_nls_rhs(w)) < 1e-10);
        CHECK(max_diff(general_rhs(w, fm(0.15)), hirota_rhs(w, 0.15)) < 1e-8);
        const auto ps = flow::parse_flow("k + 0.3*k^2 + 0.1*k^3", "0", "0");
        CHECK(max_diff(general_rhs(w, ps), power_series_rhs(w, {1.0, 0.3, 0.1})) < 1e-8);
    }
}

TEST_CASE("constant psi under VFE rotates at c^2 / 2") {
    const double c = 1.3;
    const WaveFunction w(std::vector<Complex>(32, c), 2.0);
    for (const auto& v : general_rhs(w, vfe())) CHECK(std::abs(v - Complex(0, c * c * c / 2)) < 1e-13);
}

TEST_CASE("explicit s or t dependence is refused") {
    std::mt19937_64 rng(35);
    const auto w = random_wave(rng);
    CHECK_THROWS_AS(general_rhs(w, flow::parse_flow("k*t", "0", "0")), NonGeometricFlow);
    CHECK_THROWS_AS(general_rhs(w, flow::parse_flow("k", "0", "cos(s)")), NonGeometricFlow);
}

TEST_CASE("wave function validation") {
    CHECK_THROWS_AS(WaveFunction(std::vector<Complex>(12, 1.0), 1.0), InvalidInput);
    CHECK_THROWS_AS(WaveFunction(std::vector<Complex>(16, 1.0), -1.0), InvalidInput);
}

}  // TEST_SUITE
