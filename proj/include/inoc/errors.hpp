#pragma once

#include <stdexcept>
#include <string>

namespace inoc {

/// Invalid user input: inadmissible parameters, malformed files or config.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// An exhaustive operation was asked to run beyond its configured size cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace inoc
