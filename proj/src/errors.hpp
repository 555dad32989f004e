#pragma once

#include <stdexcept>
#include <string>

namespace nosched {

// thrown on malformed or out-of-range configuration; message names the field
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// thrown when a numerical routine fails to converge; message carries diagnostics
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// open-loop unstable operating point: no positive gain threshold exists
struct UnstableError : std::runtime_error {
    explicit UnstableError(const std::string& what) : std::runtime_error(what) {}
};

// integration blew up; message names the bearer and slot
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nosched
