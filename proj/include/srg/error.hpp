#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srg {

// Root of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A site or coordinate outside the grid.
class BoundsError : public Error {
public:
    using Error::Error;
};

// Invalid parameters: bad neighborhood for the grid, duplicate seeds,
// malformed criterion text, mismatched dimensions.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Input data that violates a model invariant (non-finite intensities,
// values that cannot be represented in the requested file format).
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed file content. offset is the byte position the parser stopped at.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace srg
