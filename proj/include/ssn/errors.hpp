#pragma once

#include <stdexcept>

namespace ssn {

/// Vector/matrix dimensions disagree.
class DimensionMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The two points are (numerically) antipodal; log/transport are undefined there.
class AntipodalPointsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A sphere point or tangent vector violates its construction invariant.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Every generation attempt produced a numerically singular matrix.
class DegenerateMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance or trace file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid solver or bench configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace ssn
