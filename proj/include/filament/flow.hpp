#pragma once

// Flow coefficients gamma_t = C T + B N + A B written as expressions over the
// curve's geometric variables.
//
// Grammar (whitespace insignificant):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' ['-'] number)?
//   base   := number | ident | 'd_s' '(' expr ')' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | sqrt | abs
//
// Identifiers k, tau, s, t are the curvature, torsion, arclength and time;
// every other identifier is a named constant bound in the constants table
// ('pi' is predefined). d_s is the arclength derivative, nested at most 3 deep.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "filament/geometry.hpp"

namespace filament::flow {

enum class Var : std::uint8_t { Curvature, Torsion, Arclength, Time };
enum class Func : std::uint8_t { Sin, Cos, Exp, Sqrt, Abs };
enum class Op : std::uint8_t {
    Literal,
    Variable,
    Constant,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Derivative,
    Function
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Children are shared between trees.
struct Expr {
    Op op = Op::Literal;
    double value = 0.0;  ///< literal value, or the exponent of Pow
    Var var = Var::Curvature;
    Func func = Func::Sin;
    std::string name;  ///< constant name
    ExprPtr lhs;       ///< operand of unary nodes
    ExprPtr rhs;
    bool bare_k_denominator = false;  ///< Div whose denominator is exactly the variable k

    static ExprPtr literal(double v);
    static ExprPtr variable(Var v);
    static ExprPtr constant(std::string name);
    static ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
    static ExprPtr power(ExprPtr base, double exponent);
    static ExprPtr negate(ExprPtr a);
    static ExprPtr derivative(ExprPtr a);
    static ExprPtr function(Func f, ExprPtr a);
};

using Constants = std::map<std::string, double>;

/// The grammar above, for help output.
inline constexpr const char* kGrammar =
    "Flow coefficients gamma_t = C T + B N + A B are expressions over the curve's\n"
    "geometric variables.\n"
    "\n"
    "Grammar (whitespace insignificant):\n"
    "\n"
    "  expr   := term (('+' | '-') term)*\n"
    "  term   := factor (('*' | '/') factor)*\n"
    "  factor := '-' factor | base ('^' ['-'] number)?\n"
    "  base   := number | ident | 'd_s' '(' expr ')' | func '(' expr ')' | '(' expr ')'\n"
    "  func   := sin | cos | exp | sqrt | abs\n"
    "\n"
    "Identifiers k, tau, s, t are the curvature, torsion, arclength and time;\n"
    "every other identifier is a named constant bound in the constants table\n"
    "('pi' is predefined). d_s is the arclength derivative, nested at most 3 deep.\n";

/// Parse one expression; throws SyntaxError with a byte offset.
ExprPtr parse_expression(std::string_view text);

/// Fully parenthesized text that parses back to an identical tree.
std::string to_string(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
bool uses_variable(const ExprPtr& e, Var v);
/// Maximum nesting depth of d_s.
int derivative_depth(const ExprPtr& e);
/// Names of all constants referenced.
std::vector<std::string> constant_names(const ExprPtr& e);

/// Substitute bound constants and fold constant subexpressions
/// (x+0, x*1, x*0, 0/x, x^1, x^0, d_s(const), f(const)).
ExprPtr fold(const ExprPtr& e, const Constants& constants);

/// Polynomial in k with zero constant term: sorted (n, a_n) pairs with |a_n| >= 1e-13.
using PowerSeries = std::vector<std::pair<int, double>>;
std::optional<PowerSeries> detect_power_series(const ExprPtr& e, const Constants& constants);

/// Additive split e = curvature_only(k) + rest over the top-level sum.
struct CurvatureSplit {
    ExprPtr curvature_only;  ///< terms depending on k and constants only
    ExprPtr rest;
};
CurvatureSplit split_curvature_terms(const ExprPtr& folded);

struct FlowSpec {
    ExprPtr A;  ///< binormal coefficient
    ExprPtr B;  ///< normal coefficient
    ExprPtr C;  ///< tangential coefficient
    Constants constants;
    std::string source_A, source_B, source_C;

    /// Coefficients after constant folding.
    ExprPtr folded_A() const { return fold(A, constants); }
    ExprPtr folded_B() const { return fold(B, constants); }
    ExprPtr folded_C() const { return fold(C, constants); }
    /// Largest d_s depth over the three coefficients.
    int derivative_depth() const;
    bool references(Var v) const;
};

/// Parse the three coefficient strings; throws SyntaxError or UnboundConstant.
FlowSpec parse_flow(std::string_view a, std::string_view b, std::string_view c,
                    Constants constants = {});

/// Sampled values of the three coefficients on a profile's grid.
struct FlowCoefficients {
    std::vector<double> A, B, C;
};

/// Inputs available to an expression during evaluation.
struct EvalContext {
    const std::vector<double>& k;
    const std::vector<double>& tau;
    double length;
    double time;
    const Constants& constants;
    /// |d gamma / du| on a grid that is not arclength-uniform; d_s and s are
    /// then taken with respect to true arclength. Null means uniform.
    const std::vector<double>* speed = nullptr;
};

/// Evaluate an expression at every grid node. d_s is spectral.
/// Throws DivisionNearZero and AperiodicFlow.
std::vector<double> evaluate(const ExprPtr& e, const EvalContext& ctx);

FlowCoefficients evaluate_flow(const FlowSpec& spec, const GeometryProfile& profile, double time,
                               const std::vector<double>* speed = nullptr);

struct FlowClassification {
    bool is_binormal = false;
    double length_condition_residual = 0.0;  ///< max over probes of sup |C_s - B k|
    std::optional<PowerSeries> power_series; ///< A as sum a_n k^n, when it is one
};

/// Constant, single-mode and random band-limited probe profiles.
std::vector<GeometryProfile> default_probes(std::size_t n, double length, std::uint64_t seed,
                                            std::size_t random_count = 4);

FlowClassification classify_flow(const FlowSpec& spec, const std::vector<GeometryProfile>& probes);

}  // namespace filament::flow
