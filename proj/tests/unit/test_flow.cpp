#include <doctest.h>

#include <algorithm>
#include <random>

#include "filament/errors.hpp"
#include "filament/flow.hpp"
#include "filament/sampling.hpp"
#include "filament/spectral.hpp"
#include "oracles.hpp"

using namespace filament;
using namespace filament::flow;

namespace {

FlowSpec vfe() { return parse_flow("k", "0", "0"); }
FlowSpec fm(double W = 0.1) { return parse_flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {{"W", W}}); }

GeometryProfile constant_profile(std::size_t n, double k, double tau, double L) {
    return GeometryProfile(std::vector<double>(n, k), std::vector<double>(n, tau), L);
}

GeometryProfile random_profile(std::mt19937_64& rng, std::size_t n = 64, double L = 2 * oracle::pi) {
    return GeometryProfile(sampling::random_trig_polynomial(n, L, 5, 0.08, 1.0, rng),
                           sampling::random_trig_polynomial(n, L, 5, 0.1, 0.2, rng), L);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("parse the named flows") {
    const auto v = vfe();
    CHECK(v.A->op == Op::Variable);
    CHECK(v.A->var == Var::Curvature);
    CHECK_FALSE(v.references(Var::Torsion));

    const auto f = fm();
    CHECK(f.derivative_depth() == 1);
    CHECK(f.references(Var::Torsion));
    CHECK(constant_names(f.A) == std::vector<std::string>{"W"});
}

TEST_CASE("syntax errors carry the byte offset") {
    try {
        parse_expression("k +");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 3);
    }
    try {
        parse_expression("k * (tau");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 8);
    }
    CHECK_THROWS_AS(parse_expression("k $ 2"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("sin k"), SyntaxError);
    CHECK_THROWS_AS(parse_expression(""), SyntaxError);
}

TEST_CASE("unbound constants are named") {
    try {
        parse_flow("k + V*k", "0", "0");
        FAIL("expected UnboundConstant");
    } catch (const UnboundConstant& e) {
        CHECK(e.symbol == "V");
    }
    CHECK_NOTHROW(parse_flow("pi*k", "0", "0"));
}

TEST_CASE("d_s nests at most three deep") {
    CHECK(derivative_depth(parse_expression("d_s(d_s(d_s(k)))")) == 3);
    CHECK_THROWS_AS(parse_expression("d_s(d_s(d_s(d_s(k))))"), SyntaxError);
}

TEST_CASE("printing reparses to the same tree") {
    for (const char* text : {"k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", "a - b - c", "a / b / c",
                             "-k^2", "k^-1.5 + sqrt(abs(tau))", "exp(-s) * cos(2*pi*t)",
                             "d_s(d_s(k*tau)) - 3e-2*k^3"}) {
        const auto e = parse_expression(text);
        const auto printed = to_string(e);
        CAPTURE(printed);
        CHECK(structurally_equal(parse_expression(printed), e));
        CHECK(to_string(parse_expression(printed)) == printed);
    }
    // Left association is preserved.
    CHECK_FALSE(structurally_equal(parse_expression("a - b - c"), parse_expression("a - (b - c)")));
}

TEST_CASE("named flows evaluate on constant profiles") {
    const auto circle = constant_profile(32, 0.5, 0.0, 4 * oracle::pi);
    const auto cv = evaluate_flow(vfe(), circle, 0.0);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(cv.A[j] == 0.5);
        CHECK(cv.B[j] == 0.0);
        CHECK(cv.C[j] == 0.0);
    }
    const auto helix = constant_profile(32, 0.8, 0.4, 2 * oracle::pi * std::sqrt(1.25));
    const auto cf = evaluate_flow(fm(), helix, 0.0);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(cf.A[j] == doctest::Approx(0.8 + 0.1 * 0.8 * 0.4).epsilon(1e-15));
        CHECK(cf.A[j] == doctest::Approx(0.832).epsilon(1e-15));
        CHECK(std::abs(cf.B[j]) < 1e-15);
        CHECK(cf.C[j] == doctest::Approx(0.032).epsilon(1e-15));
    }
}

TEST_CASE("k^2 matches pointwise squaring") {
    const std::size_t n = 64;
    const double L = 3.0;
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) k[j] = 1 + 0.3 * std::cos(2 * oracle::pi * (L * j / n) / L);
    const GeometryProfile p(k, std::vector<double>(n, 0.0), L);
    const auto c = evaluate_flow(parse_flow("k^2", "0", "0"), p, 0.0);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(c.A[j] - k[j] * k[j]) < 1e-14);
}

TEST_CASE("d_s is the spectral arclength derivative") {
    oracle::TrigSeries t;
    t.L = 5.0;
    t.a0 = 1.0;
    t.modes = {1, 3};
    t.a = {0.2, 0.05};
    t.b = {-0.1, 0.02};
    const GeometryProfile p(t.sample(64), std::vector<double>(64, 0.0), t.L);
    const auto c = evaluate_flow(parse_flow("d_s(d_s(k))", "0", "0"), p, 0.0);
    CHECK(max_abs_diff(c.A, t.sample(64, 2)) < 1e-12);
}

TEST_CASE("constant folding does not change evaluation") {
    std::mt19937_64 rng(21);
    const Constants constants{{"W", 0.1}, {"c", 2.5}};
    for (const char* text : {"(W/2)*k^2 + 0*tau + 1*d_s(k)", "k + W*k*tau", "sin(pi/2)*k - c^2*tau",
                             "(c - c)/W + k^1 * tau^0", "d_s(c) + exp(0)*k"}) {
        const auto e = parse_expression(text);
        const auto folded = fold(e, constants);
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_profile(rng);
            const EvalContext ctx{p.curvature(), p.torsion(), p.length(), 0.0, constants};
            const auto raw = evaluate(e, ctx);
            const auto f = evaluate(folded, ctx);
            for (std::size_t j = 0; j < raw.size(); ++j) {
                CHECK(std::abs(raw[j] - f[j]) <= 1e-15 * std::max(1.0, std::abs(raw[j])));
            }
        }
    }
    CHECK(structurally_equal(fold(parse_expression("0*tau + k*1"), {}), parse_expression("k")));
}

TEST_CASE("classification") {
    const auto probes = default_probes(64, 2 * oracle::pi, 7);
    REQUIRE(!probes.empty());

    const auto cv = classify_flow(vfe(), probes);
    CHECK(cv.is_binormal);
    CHECK(cv.length_condition_residual == 0.0);
    REQUIRE(cv.power_series);
    CHECK(*cv.power_series == PowerSeries{{1, 1.0}});

    const auto cf = classify_flow(fm(), probes);
    CHECK_FALSE(cf.is_binormal);
    CHECK(cf.length_condition_residual < 1e-12);
    CHECK_FALSE(cf.power_series);

    const auto cp = classify_flow(parse_flow("k + 0.5*k^3 - 1e-14*k^2", "0", "0"), probes);
    REQUIRE(cp.power_series);
    CHECK(*cp.power_series == PowerSeries{{1, 1.0}, {3, 0.5}});

    // Normal flow B = k violates the length condition.
    CHECK(classify_flow(parse_flow("0", "k", "0"), probes).length_condition_residual > 0.5);
}

TEST_CASE("constant tangential speed has exactly zero residual") {
    const auto probes = default_probes(64, 2 * oracle::pi, 3);
    for (const char* c : {"1", "-2.5", "W*W"}) {
        const auto spec = parse_flow("k^2", "0", c, {{"W", 0.3}});
        CHECK_FALSE(classify_flow(spec, probes).is_binormal);
        CHECK(classify_flow(spec, probes).length_condition_residual == 0.0);
    }
}

TEST_CASE("FM length condition holds on random profiles") {
    std::mt19937_64 rng(22);
    const auto spec = fm(0.37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_profile(rng, 128, 1.0 + trial);
        const auto c = evaluate_flow(spec, p, 0.0);
        const auto cs = spectral::derivative(c.C, p.length());
        for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(cs[j] - c.B[j] * p.curvature()[j]) < 1e-12);
    }
}

TEST_CASE("explicit s dependence must be periodic") {
    const auto probes = default_probes(32, 2 * oracle::pi, 1);
    CHECK_THROWS_AS(classify_flow(parse_flow("k", "0", "s"), probes), AperiodicFlow);
    CHECK_NOTHROW(classify_flow(parse_flow("k", "0", "0.1*sin(s)"), probes));
    CHECK_NOTHROW(classify_flow(parse_flow("k*t", "0", "0"), probes));
}

TEST_CASE("division guard reports the node") {
    std::vector<double> k(16, 1.5);
    k[3] = 1.0 + 1e-13;
    k[7] = 1.0;
    const GeometryProfile p(k, std::vector<double>(16, 0.0), 1.0);
    try {
        evaluate_flow(parse_flow("1/(k - 1)", "0", "0"), p, 0.0);
        FAIL("expected DivisionNearZero");
    } catch (const DivisionNearZero& e) {
        CHECK(e.node == 3);
    }
    CHECK(parse_expression("tau/k")->bare_k_denominator);
    CHECK_FALSE(parse_expression("tau/(2*k)")->bare_k_denominator);
}

}  // TEST_SUITE
