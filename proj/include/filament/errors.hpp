#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace filament {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input values (grid size, lengths, config fields).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Too many nodes with curvature below the floor for the normal to be defined.
class DegenerateFrame : public Error {
public:
    DegenerateFrame(std::size_t degenerate, std::size_t total)
        : Error("degenerate Frenet frame: " + std::to_string(degenerate) + " of " +
                std::to_string(total) + " nodes have curvature below the floor"),
          degenerate_nodes(degenerate) {}
    std::size_t degenerate_nodes;
};

class SelfIntersectionSuspected : public Error {
public:
    using Error::Error;
};

/// Parse error in a flow expression, positioned by byte offset.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset(offset) {}
    std::size_t offset;
};

class UnboundConstant : public Error {
public:
    explicit UnboundConstant(std::string name)
        : Error("unbound constant '" + name + "'"), symbol(std::move(name)) {}
    std::string symbol;
};

class DivisionNearZero : public Error {
public:
    explicit DivisionNearZero(std::size_t node)
        : Error("denominator below 1e-12 at node " + std::to_string(node)), node(node) {}
    std::size_t node;
};

/// A coefficient that depends explicitly on s is not L-periodic.
class AperiodicFlow : public Error {
public:
    using Error::Error;
};

/// The flow references s or t explicitly; the intrinsic solvers need geometry-only flows.
class NonGeometricFlow : public Error {
public:
    using Error::Error;
};

/// A time step was rejected because the solution is growing out of control.
class BlowUp : public Error {
public:
    using Error::Error;
};

}  // namespace filament
