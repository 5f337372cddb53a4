#pragma once

#include <stdexcept>
#include <string>

namespace frontier {

/// Bad input: malformed dimensions, invalid data, unknown options.
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken internal contract (e.g. an envelopment LP that reports
/// infeasible on positive data). Maps to CLI exit code 2.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace frontier
