#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radclust {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data. Carries a byte offset (binary formats) or a
/// 1-based line number (text formats); the unused one is npos.
class ParseError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    ParseError(const std::string& what, std::size_t offset, std::size_t line = npos)
        : Error(what), offset_(offset), line_(line) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t offset_;
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Tensor, matrix or layer dimensions that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters (k > n, non-positive knobs, unknown names).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: non-convergence, loss of definiteness.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace radclust
