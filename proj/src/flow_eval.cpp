#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "filament/errors.hpp"
#include "filament/flow.hpp"
#include "filament/sampling.hpp"
#include "filament/spectral.hpp"

namespace filament::flow {

namespace {

constexpr double kDivisionGuard = 1e-12;
constexpr double kSeriesDropTolerance = 1e-13;
constexpr int kMaxSeriesDegree = 64;

bool is_literal(const ExprPtr& e, double v) { return e->op == Op::Literal && e->value == v; }

std::optional<double> lookup_constant(const std::string& name, const Constants& constants) {
    if (auto it = constants.find(name); it != constants.end()) return it->second;
    if (name == "pi") return std::numbers::pi;
    return std::nullopt;
}

double apply(Func f, double x) {
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Exp: return std::exp(x);
        case Func::Sqrt: return std::sqrt(x);
        case Func::Abs: return std::abs(x);
    }
    return x;
}

// ---- polynomials in k ----

using Poly = std::map<int, double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [i, x] : a) {
        for (const auto& [j, y] : b) out[i + j] += x * y;
    }
    return out;
}

std::optional<Poly> to_poly(const ExprPtr& e, const Constants& constants) {
    switch (e->op) {
        case Op::Literal: return Poly{{0, e->value}};
        case Op::Constant: {
            auto v = lookup_constant(e->name, constants);
            if (!v) return std::nullopt;
            return Poly{{0, *v}};
        }
        case Op::Variable:
            if (e->var == Var::Curvature) return Poly{{1, 1.0}};
            return std::nullopt;
        case Op::Add:
        case Op::Sub: {
            auto a = to_poly(e->lhs, constants);
            auto b = to_poly(e->rhs, constants);
            if (!a || !b) return std::nullopt;
            const double sign = e->op == Op::Add ? 1.0 : -1.0;
            for (const auto& [n, c] : *b) (*a)[n] += sign * c;
            return a;
        }
        case Op::Mul: {
            auto a = to_poly(e->lhs, constants);
            auto b = to_poly(e->rhs, constants);
            if (!a || !b) return std::nullopt;
            auto p = poly_mul(*a, *b);
            if (!p.empty() && p.rbegin()->first > kMaxSeriesDegree) return std::nullopt;
            return p;
        }
        case Op::Div: {
            auto a = to_poly(e->lhs, constants);
            auto b = to_poly(e->rhs, constants);
            if (!a || !b) return std::nullopt;
            if (b->size() != 1 || b->begin()->first != 0 || b->begin()->second == 0.0) {
                return std::nullopt;
            }
            for (auto& [n, c] : *a) c /= b->begin()->second;
            return a;
        }
        case Op::Pow: {
            const double p = e->value;
            if (p < 0.0 || p != std::floor(p) || p > kMaxSeriesDegree) return std::nullopt;
            auto base = to_poly(e->lhs, constants);
            if (!base) return std::nullopt;
            Poly out{{0, 1.0}};
            for (int i = 0; i < static_cast<int>(p); ++i) {
                out = poly_mul(out, *base);
                if (out.rbegin()->first > kMaxSeriesDegree) return std::nullopt;
            }
            return out;
        }
        case Op::Neg: {
            auto a = to_poly(e->lhs, constants);
            if (!a) return std::nullopt;
            for (auto& [n, c] : *a) c = -c;
            return a;
        }
        case Op::Function: {
            auto a = to_poly(e->lhs, constants);
            if (!a) return std::nullopt;
            for (const auto& [n, c] : *a) {
                if (n != 0 && c != 0.0) return std::nullopt;
            }
            return Poly{{0, apply(e->func, (*a)[0])}};
        }
        case Op::Derivative: return std::nullopt;
    }
    return std::nullopt;
}

void flatten_sum(const ExprPtr& e, double sign, std::vector<std::pair<double, ExprPtr>>& out) {
    if (e->op == Op::Add) {
        flatten_sum(e->lhs, sign, out);
        flatten_sum(e->rhs, sign, out);
    } else if (e->op == Op::Sub) {
        flatten_sum(e->lhs, sign, out);
        flatten_sum(e->rhs, -sign, out);
    } else if (e->op == Op::Neg) {
        flatten_sum(e->lhs, -sign, out);
    } else {
        out.emplace_back(sign, e);
    }
}

bool depends_on_curvature_only(const ExprPtr& e) {
    if (!e) return true;
    if (e->op == Op::Derivative) return false;
    if (e->op == Op::Variable && e->var != Var::Curvature) return false;
    return depends_on_curvature_only(e->lhs) && depends_on_curvature_only(e->rhs);
}

ExprPtr rebuild_sum(const std::vector<std::pair<double, ExprPtr>>& terms) {
    ExprPtr out;
    for (const auto& [sign, term] : terms) {
        if (!out) {
            out = sign > 0 ? term : Expr::negate(term);
        } else {
            out = Expr::binary(sign > 0 ? Op::Add : Op::Sub, out, term);
        }
    }
    return out ? out : Expr::literal(0.0);
}

// ---- evaluation ----

using Values = std::vector<double>;

Values evaluate_at(const ExprPtr& e, const EvalContext& ctx, double s_offset);

double period(const EvalContext& ctx) {
    return ctx.speed ? ctx.length * spectral::mean(*ctx.speed) : ctx.length;
}

void check_periodic(const ExprPtr& e, const EvalContext& ctx, const Values& values) {
    const auto shifted = evaluate_at(e, ctx, period(ctx));
    double scale = 1.0, diff = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        scale = std::max(scale, std::abs(values[j]));
        diff = std::max(diff, std::abs(values[j] - shifted[j]));
    }
    if (!(diff <= 1e-9 * scale)) {
        throw AperiodicFlow("expression '" + to_string(e) +
                            "' depends on s but is not periodic over the domain length");
    }
}

Values evaluate_at(const ExprPtr& e, const EvalContext& ctx, double s_offset) {
    const std::size_t n = ctx.k.size();
    switch (e->op) {
        case Op::Literal: return Values(n, e->value);
        case Op::Constant: {
            auto v = lookup_constant(e->name, ctx.constants);
            if (!v) throw UnboundConstant(e->name);
            return Values(n, *v);
        }
        case Op::Variable:
            switch (e->var) {
                case Var::Curvature: return ctx.k;
                case Var::Torsion: return ctx.tau;
                case Var::Time: return Values(n, ctx.time);
                case Var::Arclength: {
                    auto s = ctx.speed ? spectral::antiderivative(*ctx.speed, ctx.length)
                                       : spectral::nodes(n, ctx.length);
                    for (auto& v : s) v += s_offset;
                    return s;
                }
            }
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            auto a = evaluate_at(e->lhs, ctx, s_offset);
            const auto b = evaluate_at(e->rhs, ctx, s_offset);
            for (std::size_t j = 0; j < n; ++j) {
                switch (e->op) {
                    case Op::Add: a[j] += b[j]; break;
                    case Op::Sub: a[j] -= b[j]; break;
                    case Op::Mul: a[j] *= b[j]; break;
                    default:
                        if (std::abs(b[j]) < kDivisionGuard) throw DivisionNearZero(j);
                        a[j] /= b[j];
                }
            }
            return a;
        }
        case Op::Pow: {
            auto a = evaluate_at(e->lhs, ctx, s_offset);
            for (auto& v : a) v = std::pow(v, e->value);
            return a;
        }
        case Op::Neg: {
            auto a = evaluate_at(e->lhs, ctx, s_offset);
            for (auto& v : a) v = -v;
            return a;
        }
        case Op::Function: {
            auto a = evaluate_at(e->lhs, ctx, s_offset);
            for (std::size_t j = 0; j < n; ++j) {
                if (e->func == Func::Sqrt && a[j] < 0.0) {
                    throw InvalidInput("sqrt of a negative value at node " + std::to_string(j));
                }
                a[j] = apply(e->func, a[j]);
            }
            return a;
        }
        case Op::Derivative: {
            const auto inner = evaluate_at(e->lhs, ctx, s_offset);
            if (uses_variable(e->lhs, Var::Arclength)) check_periodic(e->lhs, ctx, inner);
            auto d = spectral::derivative(inner, ctx.length, 1);
            if (ctx.speed) {
                for (std::size_t j = 0; j < n; ++j) d[j] /= (*ctx.speed)[j];
            }
            return d;
        }
    }
    return Values(n, 0.0);
}

}  // namespace

ExprPtr fold(const ExprPtr& e, const Constants& constants) {
    switch (e->op) {
        case Op::Literal:
        case Op::Variable: return e;
        case Op::Constant: {
            if (auto v = lookup_constant(e->name, constants)) return Expr::literal(*v);
            return e;
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            auto a = fold(e->lhs, constants);
            auto b = fold(e->rhs, constants);
            const bool la = a->op == Op::Literal, lb = b->op == Op::Literal;
            switch (e->op) {
                case Op::Add:
                    if (la && lb) return Expr::literal(a->value + b->value);
                    if (is_literal(a, 0.0)) return b;
                    if (is_literal(b, 0.0)) return a;
                    break;
                case Op::Sub:
                    if (la && lb) return Expr::literal(a->value - b->value);
                    if (is_literal(b, 0.0)) return a;
                    if (is_literal(a, 0.0)) return fold(Expr::negate(b), constants);
                    break;
                case Op::Mul:
                    if (la && lb) return Expr::literal(a->value * b->value);
                    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expr::literal(0.0);
                    if (is_literal(a, 1.0)) return b;
                    if (is_literal(b, 1.0)) return a;
                    break;
                default:
                    if (la && lb && b->value != 0.0) return Expr::literal(a->value / b->value);
                    if (is_literal(a, 0.0) && !is_literal(b, 0.0)) return Expr::literal(0.0);
                    if (is_literal(b, 1.0)) return a;
            }
            return Expr::binary(e->op, a, b);
        }
        case Op::Pow: {
            auto a = fold(e->lhs, constants);
            if (a->op == Op::Literal) return Expr::literal(std::pow(a->value, e->value));
            if (e->value == 1.0) return a;
            if (e->value == 0.0) return Expr::literal(1.0);
            return Expr::power(a, e->value);
        }
        case Op::Neg: {
            auto a = fold(e->lhs, constants);
            if (a->op == Op::Literal) return Expr::literal(-a->value);
            if (a->op == Op::Neg) return a->lhs;
            return Expr::negate(a);
        }
        case Op::Derivative: {
            auto a = fold(e->lhs, constants);
            if (a->op == Op::Literal) return Expr::literal(0.0);
            return Expr::derivative(a);
        }
        case Op::Function: {
            auto a = fold(e->lhs, constants);
            if (a->op == Op::Literal) return Expr::literal(apply(e->func, a->value));
            return Expr::function(e->func, a);
        }
    }
    return e;
}

std::optional<PowerSeries> detect_power_series(const ExprPtr& e, const Constants& constants) {
    auto poly = to_poly(fold(e, constants), constants);
    if (!poly) return std::nullopt;
    PowerSeries out;
    for (const auto& [n, c] : *poly) {
        if (std::abs(c) < kSeriesDropTolerance) continue;
        if (n == 0) return std::nullopt;
        out.emplace_back(n, c);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

CurvatureSplit split_curvature_terms(const ExprPtr& folded) {
    std::vector<std::pair<double, ExprPtr>> terms, k_only, rest;
    flatten_sum(folded, 1.0, terms);
    for (const auto& t : terms) {
        (depends_on_curvature_only(t.second) ? k_only : rest).push_back(t);
    }
    return CurvatureSplit{rebuild_sum(k_only), rebuild_sum(rest)};
}

std::vector<double> evaluate(const ExprPtr& e, const EvalContext& ctx) {
    auto values = evaluate_at(e, ctx, 0.0);
    if (uses_variable(e, Var::Arclength)) check_periodic(e, ctx, values);
    return values;
}

FlowCoefficients evaluate_flow(const FlowSpec& spec, const GeometryProfile& profile, double time,
                               const std::vector<double>* speed) {
    const EvalContext ctx{profile.curvature(), profile.torsion(), profile.length(), time,
                          spec.constants, speed};
    return FlowCoefficients{evaluate(spec.A, ctx), evaluate(spec.B, ctx), evaluate(spec.C, ctx)};
}

std::vector<GeometryProfile> default_probes(std::size_t n, double length, std::uint64_t seed,
                                            std::size_t random_count) {
    std::vector<GeometryProfile> probes;
    probes.emplace_back(std::vector<double>(n, 1.0), std::vector<double>(n, 0.5), length);

    std::vector<double> k(n), tau(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        k[j] = 1.0 + 0.3 * std::cos(phase);
        tau[j] = 0.2 * std::sin(2.0 * phase);
    }
    probes.emplace_back(k, tau, length);

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_count; ++i) {
        auto kr = sampling::random_trig_polynomial(n, length, 6, 0.1, 1.0, rng);
        auto tr = sampling::random_trig_polynomial(n, length, 6, 0.2, 0.3, rng);
        probes.emplace_back(std::move(kr), std::move(tr), length);
    }
    return probes;
}

FlowClassification classify_flow(const FlowSpec& spec, const std::vector<GeometryProfile>& probes) {
    FlowClassification out;
    out.is_binormal = is_literal(spec.folded_B(), 0.0) && is_literal(spec.folded_C(), 0.0);
    out.power_series = detect_power_series(spec.A, spec.constants);
    for (const auto& probe : probes) {
        const auto coeffs = evaluate_flow(spec, probe, 0.0);
        const auto c_s = spectral::derivative(coeffs.C, probe.length(), 1);
        for (std::size_t j = 0; j < probe.size(); ++j) {
            out.length_condition_residual =
                std::max(out.length_condition_residual,
                         std::abs(c_s[j] - coeffs.B[j] * probe.curvature()[j]));
        }
    }
    if (out.is_binormal) out.length_condition_residual = 0.0;
    return out;
}

}  // namespace filament::flow
