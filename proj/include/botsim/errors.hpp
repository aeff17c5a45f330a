#pragma once

#include <stdexcept>
#include <string>

namespace botsim {

// Bad parameters, malformed configs, violated preconditions. CLI exit code 2.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Missing files, parse failures, write failures. CLI exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Hard resource guards (e.g. branching-process node cap).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace botsim
