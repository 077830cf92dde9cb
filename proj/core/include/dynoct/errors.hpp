#pragma once

#include <stdexcept>
#include <string>

namespace dynoct {

/// Query left the padded support of a drifting field (insufficient padding).
class OutOfSupportError : public std::runtime_error {
public:
    explicit OutOfSupportError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is structurally valid but carries no usable signal (zero energy etc).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// The change-point fit has no breakpoint to find (flat TV sequence).
class DegenerateFitError : public std::runtime_error {
public:
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dynoct
