#pragma once

#include <stdexcept>
#include <string>

namespace zsonify {

/// Input table is missing a required column or has no usable header.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation received an empty dataset where at least one row is required.
struct EmptyInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration file is malformed, has unknown keys, or fails validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zsonify
