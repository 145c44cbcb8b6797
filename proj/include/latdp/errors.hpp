#pragma once

#include <stdexcept>
#include <string>

namespace latdp {

// Error taxonomy mirrors the CLI exit codes: parse -> 2, dimension -> 3,
// incompatible method/norm -> 4.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct IncompatibleError : std::runtime_error {
    explicit IncompatibleError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latdp
