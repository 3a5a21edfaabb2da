#pragma once

#include <stdexcept>
#include <string>

namespace eogsim {

/// Raised when inputs or configuration violate a documented contract.
/// CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on file-system failures (missing file, unwritable path).
/// CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eogsim
