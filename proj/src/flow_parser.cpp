#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "filament/errors.hpp"
#include "filament/flow.hpp"

namespace filament::flow {

namespace {

constexpr int kMaxDerivativeDepth = 3;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = Expr::binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Op::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = Expr::binary(Op::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        if (accept('-')) return Expr::negate(factor());
        auto b = base();
        if (accept('^')) {
            const bool negative = accept('-');
            skip_ws();
            const double exponent = number();
            return Expr::power(b, negative ? -exponent : exponent);
        }
        return b;
    }

    double number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
            pos_ = start;
            fail("expected number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            const std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) pos_ = save;  // 'e' belongs to something else
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc()) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    ExprPtr base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected operand");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::literal(number());
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string ident(text_.substr(start, pos_ - start));
            if (ident == "d_s") {
                if (depth_ == kMaxDerivativeDepth) {
                    pos_ = start;
                    fail("d_s nested deeper than 3");
                }
                expect('(');
                ++depth_;
                auto inner = expr();
                --depth_;
                expect(')');
                return Expr::derivative(inner);
            }
            static const std::pair<const char*, Func> funcs[] = {
                {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
                {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
            for (const auto& [fname, f] : funcs) {
                if (ident == fname) {
                    expect('(');
                    auto inner = expr();
                    expect(')');
                    return Expr::function(f, inner);
                }
            }
            if (ident == "k") return Expr::variable(Var::Curvature);
            if (ident == "tau") return Expr::variable(Var::Torsion);
            if (ident == "s") return Expr::variable(Var::Arclength);
            if (ident == "t") return Expr::variable(Var::Time);
            return Expr::constant(ident);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

const char* var_name(Var v) {
    switch (v) {
        case Var::Curvature: return "k";
        case Var::Torsion: return "tau";
        case Var::Arclength: return "s";
        case Var::Time: return "t";
    }
    return "?";
}

void collect_constants(const ExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->op == Op::Constant) out.insert(e->name);
    collect_constants(e->lhs, out);
    collect_constants(e->rhs, out);
}

}  // namespace

ExprPtr Expr::literal(double v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Literal;
    e->value = v;
    return e;
}

ExprPtr Expr::variable(Var v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Variable;
    e->var = v;
    return e;
}

ExprPtr Expr::constant(std::string name) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Constant;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::binary(Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->bare_k_denominator = op == Op::Div && b->op == Op::Variable && b->var == Var::Curvature;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::power(ExprPtr base, double exponent) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Pow;
    e->value = exponent;
    e->lhs = std::move(base);
    return e;
}

ExprPtr Expr::negate(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Neg;
    e->lhs = std::move(a);
    return e;
}

ExprPtr Expr::derivative(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Derivative;
    e->lhs = std::move(a);
    return e;
}

ExprPtr Expr::function(Func f, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Function;
    e->func = f;
    e->lhs = std::move(a);
    return e;
}

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const ExprPtr& e) {
    switch (e->op) {
        case Op::Literal:
            return e->value < 0.0 ? "(-" + format_number(-e->value) + ")" : format_number(e->value);
        case Op::Variable: return var_name(e->var);
        case Op::Constant: return e->name;
        case Op::Add: return "(" + to_string(e->lhs) + " + " + to_string(e->rhs) + ")";
        case Op::Sub: return "(" + to_string(e->lhs) + " - " + to_string(e->rhs) + ")";
        case Op::Mul: return "(" + to_string(e->lhs) + " * " + to_string(e->rhs) + ")";
        case Op::Div: return "(" + to_string(e->lhs) + " / " + to_string(e->rhs) + ")";
        case Op::Pow: {
            const std::string base = e->lhs->op == Op::Variable || e->lhs->op == Op::Constant
                                         ? to_string(e->lhs)
                                         : "(" + to_string(e->lhs) + ")";
            return "(" + base + "^" + format_number(e->value) + ")";
        }
        case Op::Neg: return "(-" + to_string(e->lhs) + ")";
        case Op::Derivative: return "d_s(" + to_string(e->lhs) + ")";
        case Op::Function: return std::string(func_name(e->func)) + "(" + to_string(e->lhs) + ")";
    }
    return {};
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->op != b->op) return false;
    switch (a->op) {
        case Op::Literal: return a->value == b->value;
        case Op::Variable: return a->var == b->var;
        case Op::Constant: return a->name == b->name;
        case Op::Pow: return a->value == b->value && structurally_equal(a->lhs, b->lhs);
        case Op::Function: return a->func == b->func && structurally_equal(a->lhs, b->lhs);
        default: return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

bool uses_variable(const ExprPtr& e, Var v) {
    if (!e) return false;
    if (e->op == Op::Variable) return e->var == v;
    return uses_variable(e->lhs, v) || uses_variable(e->rhs, v);
}

int derivative_depth(const ExprPtr& e) {
    if (!e) return 0;
    const int inner = std::max(derivative_depth(e->lhs), derivative_depth(e->rhs));
    return e->op == Op::Derivative ? inner + 1 : inner;
}

std::vector<std::string> constant_names(const ExprPtr& e) {
    std::set<std::string> names;
    collect_constants(e, names);
    return {names.begin(), names.end()};
}

int FlowSpec::derivative_depth() const {
    return std::max({flow::derivative_depth(A), flow::derivative_depth(B),
                     flow::derivative_depth(C)});
}

bool FlowSpec::references(Var v) const {
    return uses_variable(A, v) || uses_variable(B, v) || uses_variable(C, v);
}

FlowSpec parse_flow(std::string_view a, std::string_view b, std::string_view c,
                    Constants constants) {
    FlowSpec spec;
    spec.A = parse_expression(a);
    spec.B = parse_expression(b);
    spec.C = parse_expression(c);
    spec.source_A = a;
    spec.source_B = b;
    spec.source_C = c;
    for (const auto* e : {&spec.A, &spec.B, &spec.C}) {
        for (const auto& name : constant_names(*e)) {
            if (name != "pi" && !constants.contains(name)) throw UnboundConstant(name);
        }
    }
    spec.constants = std::move(constants);
    return spec;
}

}  // namespace filament::flow
