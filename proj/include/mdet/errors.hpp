#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an operation's arguments was violated.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Numerical integration or root finding did not converge.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// An integral over a half line does not converge (integrand not decaying).
class DivergentIntegral : public NumericalError {
public:
    explicit DivergentIntegral(const std::string& what) : NumericalError(what) {}
};

/// The moment of a given order is infinite.
class MomentDivergence : public Error {
public:
    MomentDivergence(int order, const std::string& detail)
        : Error("moment of order " + std::to_string(order) + " does not exist: " + detail),
          order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

/// Lexing, parsing or arity failure in a density expression.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error("at position " + std::to_string(position) + ": " + what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace mdet
