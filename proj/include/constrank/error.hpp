#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace constrank {

enum class ErrorKind {
    NonPrimeCharacteristic,
    ReducibleModulus,
    InvalidModulus,
    OrderTooLarge,
    InvalidElement,
    DivisionByZero,
    DimensionMismatch,
    ShapeViolation,
    ShapeMismatch,
    EmptyInput,
    ZeroSpan,
    DependentBasis,
    ZeroVector,
    NotConstantRank,
    BudgetExceeded,
    InternalVerificationFailed,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the cause.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Text-format failure. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(ErrorKind::Parse,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column), message_(what) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

}  // namespace constrank
