#pragma once

#include <stdexcept>
#include <string>

namespace vrdlab {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config files, invalid CLI arguments.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Filesystem / serialization failures.
class IoError : public Error {
public:
    using Error::Error;
};

// Invalid or degenerate model state: exhausted replay lists, broken grids,
// preconditions violated at the device/analysis level.
class ModelError : public Error {
public:
    using Error::Error;
};

// Searches that come up empty (e.g. no row qualifies as a victim).
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Process exit codes used by the CLI, one per error class.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitIo = 2,
    kExitModel = 3,
    kExitNotFound = 4,
    kExitInternal = 5,
};

} // namespace vrdlab
