// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace abscat {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Physical regime a tier refuses (e.g. quasiclassical closed forms for eta in [1/2, 1)).
struct RegimeError : Error {
    using Error::Error;
};

/// Angle lies in a region handled by a different operation.
struct RegionError : Error {
    using Error::Error;
};

/// Formula invoked for the wrong geometry branch (Euclidean vs conical).
struct BranchError : Error {
    using Error::Error;
};

/// Invalid run or summation configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure: non-convergence or regulator disagreement.
struct NumericError : Error {
    using Error::Error;
};

/// Malformed command line or configuration file.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace abscat
