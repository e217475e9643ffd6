#pragma once

#include <stdexcept>
#include <string>

namespace betaforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input validation failures.
struct LengthMismatch : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct NonPositiveOffDiagonal : Error { using Error::Error; };
struct DuplicateAtoms : Error { using Error::Error; };
struct InvalidWeights : Error { using Error::Error; };

// Parametrization maps.
struct NotPositiveDefinite : Error { using Error::Error; };
struct NotInUnitInterval : Error { using Error::Error; };

// Numerical failures.
struct NumericalBreakdown : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

// Samplers.
struct NotLogConcave : Error { using Error::Error; };

// Equilibrium measures.
struct UnsupportedPotential : Error { using Error::Error; };
struct NoSoftEdge : Error { using Error::Error; };

// Front end.
struct ConfigError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace betaforge
