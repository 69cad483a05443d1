#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgf {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point lies outside the closed sub-triangle u_i(triangle).
struct OutOfCell : Error {
    using Error::Error;
};

/// No cell of the requested depth contains the point within tolerance.
struct NotOnGasket : Error {
    using Error::Error;
};

/// Requested lattice depth exceeds the supported maximum (12).
struct DepthTooLarge : Error {
    using Error::Error;
};

/// Malformed expression text. `offset` is the 0-based character position.
struct SyntaxError : Error {
    SyntaxError(std::string msg, std::size_t at)
        : Error(msg + " (offset " + std::to_string(at) + ")"), offset(at) {}
    std::size_t offset;
};

/// An identifier that is not x, y, pi, e or a supported function.
struct UnknownIdentifier : Error {
    UnknownIdentifier(const std::string& id, std::size_t at)
        : Error("unknown identifier '" + id + "' (offset " + std::to_string(at) + ")"),
          name(id), offset(at) {}
    std::string name;
    std::size_t offset;
};

/// Evaluation left the domain of a function (log/sqrt/...) or produced
/// a non-finite value.
struct DomainError : Error {
    using Error::Error;
};

/// Figure index outside 1..4.
struct UnknownFigure : Error {
    using Error::Error;
};

/// Scale vector with max-norm >= 1.
struct ScaleOutOfRange : Error {
    using Error::Error;
};

/// Base function disagrees with f on V_0 beyond the compatibility tolerance.
struct IncompatibleBase : Error {
    IncompatibleBase(std::string msg, int corner, double dev)
        : Error(std::move(msg)), worst_corner(corner), deviation(dev) {}
    int worst_corner;   // 1..3, vertex with the largest |b - f|
    double deviation;   // that largest deviation
};

/// Shared-vertex values disagreed during table construction; the problem
/// data violates the compatibility assumptions more than it declared.
struct ConsistencyFailure : Error {
    using Error::Error;
};

}  // namespace sgf
