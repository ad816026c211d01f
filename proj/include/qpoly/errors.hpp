#pragma once

#include <stdexcept>
#include <string>

namespace qpoly {

/// Thrown when an input violates a documented precondition or type invariant.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on file read/write failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qpoly
