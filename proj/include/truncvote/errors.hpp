#ifndef TRUNCVOTE_ERRORS_HPP
#define TRUNCVOTE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace truncvote {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidBallot : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedRule : public Error {
public:
    using Error::Error;
};

/// Raised when an exhaustive search would exceed its configured evaluation budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class OddSum : public Error {
public:
    using Error::Error;
};

class WrongKind : public Error {
public:
    using Error::Error;
};

class CaseMismatch : public Error {
public:
    using Error::Error;
};

class NonIntegerWeights : public Error {
public:
    using Error::Error;
};

/// Text-format error carrying a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace truncvote

#endif // TRUNCVOTE_ERRORS_HPP
