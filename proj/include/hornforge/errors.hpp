#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hornforge {

/// Malformed user input: syntax, sorts, unknown names, nonlinear terms.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

/// A configured cap (cube count, elimination rows, states, ...) was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The Horn system uses a construct the requested operation cannot express.
class UnsupportedFragment : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hornforge
