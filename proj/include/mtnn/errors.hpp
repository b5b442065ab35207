#pragma once

#include <stdexcept>
#include <string>

namespace mtnn {

// Invalid configuration or arguments (bad ensemble spec, negative tau, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; the message carries "<path>:<line>: ...".
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible tensor shapes; the message names the op and the shapes.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mtnn
