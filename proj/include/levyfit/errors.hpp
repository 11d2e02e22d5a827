#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levyfit {

// Invalid configuration or precondition caught before any computation runs.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A state or density value left the representable/stable range. Carries the
// step index at which the blow-up was detected.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_ = 0;
};

// File exists but its contents are not a valid serialized object.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (open, read, write).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two densities were combined that do not live on the same grid.
class grid_mismatch_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace levyfit
