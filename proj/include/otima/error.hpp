#pragma once

#include <stdexcept>
#include <string>

namespace otima {

/// Argument outside the supported domain of a numerical routine.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Optical parameters hit the pole of the Clausius-Mossotti factor, or a
/// ratio whose denominator vanishes.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A truncated series or a quadrature refinement failed to converge.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The mean detection signal vanishes, so a visibility is undefined.
class DegenerateSignalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries "path:line: ..." context.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scan configuration (missing key, bad value, conflicting axes).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace otima
