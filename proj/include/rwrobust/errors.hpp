#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwr {

/// Base class for every error raised by the library. Usage errors (bad
/// arguments, violated preconditions) derive from std::invalid_argument via
/// UsageError instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateCovarianceError : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class LayoutError : public Error {
public:
    using Error::Error;
};

/// Raised when an external model process crashes, times out, or answers with
/// a malformed line. line() is the 1-based response line number counted over
/// the lifetime of the process handle (0 when not tied to a line).
class ExternalModelError : public Error {
public:
    ExternalModelError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (response line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// CSV / JSON input errors. row is the 1-based physical line in the file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::string column = {})
        : Error(format(what, row, column)), row_(row), column_(std::move(column)) {}
    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t row, const std::string& column) {
        std::string out = what;
        if (row) out += " at row " + std::to_string(row);
        if (!column.empty()) out += ", column '" + column + "'";
        return out;
    }
    std::size_t row_;
    std::string column_;
};

/// A failure while evaluating one test point; wraps the original message.
class PointError : public Error {
public:
    PointError(std::size_t point_index, const std::string& what)
        : Error("point " + std::to_string(point_index) + ": " + what), point_index_(point_index) {}
    std::size_t point_index() const noexcept { return point_index_; }

private:
    std::size_t point_index_;
};

} // namespace rwr
